"""Qubit connectivity graphs, device presets and Steiner-tree solvers."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from ._backend import kernels


class SteinerCaseError(ValueError):
    """Terminal set is not one of the polynomial cases; use the heuristic instead."""


class HardwareGraph:
    """Simple undirected connected graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], name: str = "custom"):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self loop on {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) outside 0..{n - 1}")
            norm.add((min(a, b), max(a, b)))
        self.n = n
        self.edges = frozenset(norm)
        self.name = name
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in norm:
            adj[a].append(b)
            adj[b].append(a)
        self._adj = tuple(tuple(sorted(v)) for v in adj)
        self._adj_sets = tuple(frozenset(v) for v in adj)

    def __repr__(self) -> str:
        return f"HardwareGraph({self.name}, n={self.n}, edges={len(self.edges)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, HardwareGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj_sets[a]

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self._adj)

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def is_connected(self) -> bool:
        return bool((self.distances[0] >= 0).all())

    def with_edge(self, a: int, b: int) -> HardwareGraph:
        return HardwareGraph(self.n, set(self.edges) | {(a, b)}, self.name + "+")

    def induced_components(self, vertices: Iterable[int]) -> list[list[int]]:
        verts = set(vertices)
        seen: set[int] = set()
        comps = []
        for v in sorted(verts):
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self._adj[u]:
                    if w in verts and w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    # cached arrays for the kernels -----------------------------------------
    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int32)
        indptr[1:] = np.cumsum([len(a) for a in self._adj])
        indices = np.array([w for a in self._adj for w in a], dtype=np.int32)
        return indptr, indices

    @cached_property
    def _apsp(self) -> tuple[np.ndarray, np.ndarray]:
        indptr, indices = self.csr
        return kernels.bfs_all_pairs(self.n, indptr, indices)

    @property
    def distances(self) -> np.ndarray:
        return self._apsp[0]

    def kernel_args(self) -> tuple:
        indptr, indices = self.csr
        dist, nexthop = self._apsp
        return self.n, indptr, indices, dist, nexthop

    # io ---------------------------------------------------------------------
    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, data: dict, name: str = "file") -> HardwareGraph:
        g = cls(int(data["n"]), [tuple(e) for e in data["edges"]], name)
        if not g.is_connected():
            raise ValueError("hardware graph must be connected")
        return g


# ----------------------------------------------------------------------- presets


def complete(q: int) -> HardwareGraph:
    return HardwareGraph(q, itertools.combinations(range(q), 2), f"complete:{q}")


def line(q: int) -> HardwareGraph:
    return HardwareGraph(q, [(i, i + 1) for i in range(q - 1)], f"line:{q}")


def grid(rows: int, cols: int) -> HardwareGraph:
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return HardwareGraph(rows * cols, edges, f"grid:{rows}x{cols}")


def _heavy_hex_rows(width: int, n_rows: int, eagle_trim: bool) -> tuple[int, list[tuple[int, int]]]:
    """Vertex numbering row by row: a row of ``width`` qubits, then its bridge qubits."""
    edges = []
    rows: list[dict[int, int]] = []
    nxt = 0
    for r in range(n_rows):
        cols = range(width)
        if eagle_trim and r == 0:
            cols = range(width - 1)
        elif eagle_trim and r == n_rows - 1:
            cols = range(1, width)
        row = {}
        for c in cols:
            row[c] = nxt
            if c - 1 in row:
                edges.append((row[c - 1], nxt))
            nxt += 1
        if rows:
            for c, bridge in rows[-1].get("bridges", {}).items():
                if c in row:
                    edges.append((bridge, row[c]))
        rows.append(row)
        if r + 1 < n_rows:
            offset = 0 if r % 2 == 0 else 2
            bridges = {}
            for c in range(offset, width, 4):
                if c in row:
                    bridges[c] = nxt
                    edges.append((row[c], nxt))
                    nxt += 1
            row["bridges"] = bridges  # type: ignore[assignment]
    return nxt, edges


def heavy_hex(q: int) -> HardwareGraph:
    """Heavy-hexagon lattice cut down to ``q`` vertices.

    ``q = 127`` gives the 7-row, width-15 layout of IBM Eagle; larger sizes keep
    adding width-15 rows; up to 40 qubits use width-5 rows, so ``q = 12`` is a
    single heavy hexagon (a 12-cycle).
    """
    if q < 1:
        raise ValueError("heavy_hex needs at least one qubit")
    if q == 127:
        total, edges = _heavy_hex_rows(15, 7, eagle_trim=True)
        assert total == 127
    else:
        width = 5 if q <= 40 else 15
        n_rows = 2
        while True:
            total, edges = _heavy_hex_rows(width, n_rows, eagle_trim=False)
            if total >= q + width:
                break
            n_rows += 1
    if q == total:
        return HardwareGraph(q, edges, f"heavy_hex:{q}")
    prefix = HardwareGraph(q, [(a, b) for a, b in edges if a < q and b < q], f"heavy_hex:{q}")
    if prefix.is_connected():
        return prefix
    # an index prefix can strand the start of a row; cut breadth-first from vertex 0 instead
    full = HardwareGraph(total, edges)
    seen, order = {0}, [0]
    for v in order:
        if len(order) >= q:
            break
        for w in full.neighbors(v):
            if w not in seen:
                seen.add(w)
                order.append(w)
    relabel = {v: i for i, v in enumerate(sorted(order[:q]))}
    kept = [(relabel[a], relabel[b]) for a, b in edges if a in relabel and b in relabel]
    return HardwareGraph(q, kept, f"heavy_hex:{q}")


def preset(spec: str) -> HardwareGraph:
    """Parse ``complete:Q | line:Q | heavy_hex:Q | grid:RxC | file:path``."""
    try:
        kind, arg = spec.split(":", 1)
    except ValueError:
        raise ValueError(f"bad graph spec {spec!r}") from None
    if kind == "file":
        return HardwareGraph.from_dict(json.loads(Path(arg).read_text()), name=spec)
    if kind == "grid":
        r, c = arg.lower().split("x")
        return grid(int(r), int(c))
    builders = {"complete": complete, "line": line, "heavy_hex": heavy_hex}
    if kind not in builders:
        raise ValueError(f"unknown graph preset {kind!r}")
    size = int(arg)
    if size < 1:
        raise ValueError("graph size must be positive")
    return builders[kind](size)


# ------------------------------------------------------------------------ Steiner


@dataclass(frozen=True)
class SteinerResult:
    tree_edges: frozenset
    tree_vertices: frozenset
    is_certified_optimal: bool

    @property
    def size(self) -> int:
        return len(self.tree_vertices)


def _checked(graph: HardwareGraph, terminals: set[int], verts, edges, optimal: bool) -> SteinerResult:
    vset = frozenset(int(v) for v in verts)
    eset = frozenset((int(a), int(b)) for a, b in edges)
    if not terminals <= vset:
        raise AssertionError("Steiner tree misses a terminal")
    if len(eset) != len(vset) - 1:
        raise AssertionError("Steiner edge count is not |V|-1")
    if any(not graph.has_edge(a, b) for a, b in eset):
        raise AssertionError("Steiner edge not in graph")
    if len(vset) > 1:
        sub = HardwareGraph(graph.n, eset)
        if len(sub.induced_components(vset)) != 1:
            raise AssertionError("Steiner tree is disconnected")
    return SteinerResult(eset, vset, optimal)


def _terminal_set(terminals: Iterable[int], graph: HardwareGraph) -> set[int]:
    terms = {int(t) for t in terminals}
    if not terms:
        raise ValueError("terminal set is empty")
    if max(terms) >= graph.n or min(terms) < 0:
        raise ValueError("terminal outside graph")
    first = min(terms)
    if any(graph.distances[first, t] < 0 for t in terms):
        raise ValueError("terminals lie in different components of the graph")
    return terms


def steiner_pptt(graph: HardwareGraph, terminals: Iterable[int], tree=None) -> SteinerResult:
    """Exact Steiner tree for strings from 2- or 4-Majorana products on a device-embedded tree.

    Raises :class:`SteinerCaseError` when the induced terminal subgraph has more
    than two components and no single vertex reconnects it.
    """
    if tree is not None and not tree.is_subgraph_of(graph):
        raise ValueError("mapping tree is not a subgraph of the hardware graph")
    terms = _terminal_set(terminals, graph)
    res = kernels.pptt_steiner(sorted(terms), *graph.kernel_args())
    if res is None:
        raise SteinerCaseError(f"terminals {sorted(terms)} are not a polynomial Steiner case")
    return _checked(graph, terms, res[0], res[1], True)


def steiner_heuristic(graph: HardwareGraph, terminals: Iterable[int]) -> SteinerResult:
    terms = _terminal_set(terminals, graph)
    verts, edges = kernels.kou_steiner(sorted(terms), *graph.kernel_args())
    return _checked(graph, terms, verts, edges, False)


def steiner_size(graph: HardwareGraph, terminals: Iterable[int], exact_cases: bool) -> tuple[int, bool]:
    """Vertex count of the tree used for compilation; ``(size, certified)``."""
    terms = sorted(set(terminals))
    args = graph.kernel_args()
    if exact_cases:
        res = kernels.pptt_steiner(terms, *args)
        if res is not None:
            return len(res[0]), True
    return len(kernels.kou_steiner(terms, *args)[0]), False


def steiner_exact_small(graph: HardwareGraph, terminals: Iterable[int]) -> SteinerResult:
    """Minimum Steiner tree by Dreyfus-Wagner dynamic programming (small instances only)."""
    terms = sorted(_terminal_set(terminals, graph))
    if len(terms) > 10 or graph.n > 20:
        raise ValueError("steiner_exact_small limited to 10 terminals and 20 vertices")
    if len(terms) == 1:
        return SteinerResult(frozenset(), frozenset(terms), True)
    dist = graph.distances
    n = graph.n
    k = len(terms)
    full = (1 << k) - 1
    inf = 1 << 30
    # dp[mask][v]: edges of the cheapest tree spanning terminals(mask) plus v
    dp = [[inf] * n for _ in range(full + 1)]
    how: list[list] = [[None] * n for _ in range(full + 1)]
    for i, t in enumerate(terms):
        for v in range(n):
            dp[1 << i][v] = int(dist[t, v])
            how[1 << i][v] = ("path", t)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        row = dp[mask]
        hrow = how[mask]
        # merge two subtrees at a common vertex
        sub = (mask - 1) & mask
        while sub:
            if sub < (mask ^ sub):
                a, b = dp[sub], dp[mask ^ sub]
                for v in range(n):
                    c = a[v] + b[v]
                    if c < row[v]:
                        row[v] = c
                        hrow[v] = ("split", sub)
            sub = (sub - 1) & mask
        # then extend along shortest paths
        base = list(row)
        for v in range(n):
            for u in range(n):
                c = base[u] + int(dist[u, v])
                if c < row[v]:
                    row[v] = c
                    hrow[v] = ("move", u)
    best_v = min(range(n), key=lambda v: (dp[full][v], v))
    edges: set[tuple[int, int]] = set()
    nexthop = graph._apsp[1]

    def add_path(a: int, b: int) -> None:
        while a != b:
            c = int(nexthop[a, b])
            edges.add((min(a, c), max(a, c)))
            a = c

    def rebuild(mask: int, v: int) -> None:
        kind, arg = how[mask][v]
        if kind == "path":
            add_path(arg, v)
        elif kind == "split":
            rebuild(arg, v)
            rebuild(mask ^ arg, v)
        else:
            add_path(arg, v)
            rebuild(mask, arg)

    rebuild(full, best_v)
    verts = set(terms)
    for a, b in edges:
        verts.update((a, b))
    if len(edges) != dp[full][best_v] or len(edges) != len(verts) - 1:
        # overlapping reconstructed paths: fall back to a spanning tree of the vertex set
        verts_sorted, edge_list = kernels.pptt_steiner(sorted(verts), *graph.kernel_args()) or (None, None)
        if verts_sorted is None or len(verts_sorted) != dp[full][best_v] + 1:
            raise AssertionError("Dreyfus-Wagner reconstruction failed")
        return _checked(graph, set(terms), verts_sorted, edge_list, True)
    return _checked(graph, set(terms), verts, edges, True)
