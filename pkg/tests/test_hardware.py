from __future__ import annotations

import json
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_force_steiner_size, networkx_steiner_size
from treespile.hardware import (
    HardwareGraph,
    SteinerCaseError,
    complete,
    grid,
    heavy_hex,
    line,
    preset,
    steiner_exact_small,
    steiner_heuristic,
    steiner_pptt,
    steiner_size,
)

# minimum Steiner vertex counts, frozen from brute-force subset enumeration
FROZEN_EXACT = [
    ("heavy_hex:12", (0, 3, 6, 9), 9),
    ("grid:3x3", (0, 2, 6, 8), 7),
    ("grid:3x4", (0, 3, 8, 11), 8),
    ("heavy_hex:12", (0, 5), 2),
    ("line:6", (0, 5), 6),
]


def nxg(g: HardwareGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_preset_counts():
    assert len(complete(4).edges) == 6
    assert len(line(5).edges) == 4 and line(5).max_degree == 2
    g = grid(3, 4)
    assert len(g.edges) == 3 * 3 + 4 * 2 == 17 and g.max_degree == 4


def test_heavy_hex_127_looks_like_eagle():
    g = heavy_hex(127)
    assert g.n == 127 and len(g.edges) == 144 and g.max_degree == 3
    degs = [len(g.neighbors(v)) for v in range(g.n)]
    assert degs.count(3) > 0 and g.is_connected()


def test_heavy_hex_12_is_a_cycle():
    h = nxg(heavy_hex(12))
    assert nx.is_isomorphic(h, nx.cycle_graph(12))


@pytest.mark.parametrize("q", [1, 2, 7, 12, 20, 33, 40, 41, 65, 100, 127, 140])
def test_heavy_hex_sizes_connected(q):
    g = heavy_hex(q)
    assert g.n == q and g.is_connected() and g.max_degree <= 3
    assert nx.is_bipartite(nxg(g))


@pytest.mark.parametrize("spec, n", [("complete:5", 5), ("line:3", 3), ("heavy_hex:12", 12), ("grid:2x3", 6)])
def test_preset_grammar(spec, n):
    assert preset(spec).n == n


@pytest.mark.parametrize("spec", ["complete", "ring:4", "line:0", "grid:3", "line:x"])
def test_bad_preset(spec):
    with pytest.raises(ValueError):
        preset(spec)


def test_graph_file_round_trip(tmp_path):
    g = grid(2, 3)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g.to_dict()))
    assert preset(f"file:{path}") == g
    assert json.loads(path.read_text()).keys() == {"n", "edges"}


def test_invalid_graphs():
    with pytest.raises(ValueError):
        HardwareGraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        HardwareGraph(2, [(0, 2)])
    with pytest.raises(ValueError):
        HardwareGraph.from_dict({"n": 3, "edges": [[0, 1]]})


def test_distances_match_networkx():
    g = heavy_hex(40)
    ref = dict(nx.all_pairs_shortest_path_length(nxg(g)))
    d = g.distances
    assert all(d[a, b] == ref[a][b] for a in range(g.n) for b in range(g.n))


@pytest.mark.parametrize("spec, terms, size", FROZEN_EXACT)
def test_exact_small_frozen(spec, terms, size):
    assert steiner_exact_small(preset(spec), terms).size == size


def test_exact_small_trivial_cases():
    g = grid(3, 3)
    r = steiner_exact_small(g, [4])
    assert r.tree_vertices == {4} and not r.tree_edges
    r = steiner_exact_small(g, [0, 1])
    assert r.tree_edges == {(0, 1)}


def test_exact_small_limits():
    with pytest.raises(ValueError):
        steiner_exact_small(line(21), [0, 1])
    with pytest.raises(ValueError):
        steiner_exact_small(line(20), list(range(11)))


@pytest.mark.parametrize("seed", range(15))
def test_exact_matches_brute_force_on_heavy_hex(seed):
    g = heavy_hex(12)
    terms = random.Random(seed).sample(range(12), 4)
    assert steiner_exact_small(g, terms).size == brute_force_steiner_size(g.edges, g.n, terms)


def test_pptt_connected_case_returns_terminals():
    r = steiner_pptt(grid(3, 3), [0, 1, 4])
    assert r.tree_vertices == {0, 1, 4} and r.is_certified_optimal


def test_pptt_two_components_adds_shortest_path():
    g = line(8)
    r = steiner_pptt(g, [0, 1, 5, 6])
    d = 4  # distance 1 -> 5
    assert r.size == 4 + d - 1


def test_pptt_single_repair_vertex_lowest_index():
    g = grid(3, 3)
    # 1, 3, 5, 7 are three+ components all adjacent to 4
    r = steiner_pptt(g, [1, 3, 5, 7])
    assert r.tree_vertices == {1, 3, 4, 5, 7}


def test_pptt_raises_outside_cases():
    with pytest.raises(SteinerCaseError):
        steiner_pptt(line(9), [0, 4, 8])


def test_pptt_rejects_tree_not_on_graph():
    from treespile.mapping import jw_tree
    with pytest.raises(ValueError):
        steiner_pptt(grid(2, 2), [0, 1], jw_tree(4))


def test_heuristic_examples():
    assert steiner_heuristic(grid(3, 3), [0, 1]).tree_vertices == {0, 1}
    r = steiner_heuristic(line(6), [0, 5])
    assert r.size == 6 and not r.is_certified_optimal
    exact = steiner_exact_small(grid(3, 3), [0, 2, 6, 8]).size
    assert exact <= steiner_heuristic(grid(3, 3), [0, 2, 6, 8]).size <= 2 * exact


@given(st.integers(0, 10**6), st.integers(2, 6))
def test_heuristic_within_twice_exact(seed, k):
    g = grid(3, 4)
    terms = random.Random(seed).sample(range(g.n), k)
    exact = steiner_exact_small(g, terms).size
    approx = steiner_heuristic(g, terms).size
    assert exact <= approx <= 2 * exact
    # networkx's metric-closure heuristic is an independent upper bound
    assert exact <= networkx_steiner_size(g.edges, terms)


@given(st.integers(0, 10**6))
def test_results_are_trees_covering_terminals(seed):
    g = heavy_hex(40)
    rng = random.Random(seed)
    terms = rng.sample(range(g.n), rng.randint(1, 6))
    r = steiner_heuristic(g, terms)
    t = nx.Graph(list(r.tree_edges))
    t.add_nodes_from(r.tree_vertices)
    assert set(terms) <= set(r.tree_vertices)
    assert nx.is_tree(t)
    assert all(g.has_edge(a, b) for a, b in r.tree_edges)


def test_steiner_size_falls_back():
    g = line(9)
    assert steiner_size(g, [0, 4, 8], exact_cases=True) == (9, False)
    assert steiner_size(g, [0, 1], exact_cases=True) == (2, True)


def test_terminals_outside_graph():
    with pytest.raises(ValueError):
        steiner_heuristic(line(3), [0, 7])
