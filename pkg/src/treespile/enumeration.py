"""Exhaustive counting and move-graph reachability for tiny mapping spaces."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import asdict, dataclass
from typing import Iterator

from .hardware import HardwareGraph
from .mapping import MappingTree, Node, bonsai_tree, jw_tree
from .moves import neighbors

MAX_MODES = 4
MAX_VERTICES = 8

# a tree shape: (root, ((qubit, children), ...)) sorted by qubit
Shape = tuple


def _check_limits(n: int, graph: HardwareGraph) -> None:
    if n < 1:
        raise ValueError("need at least one mode")
    if n > MAX_MODES or graph.n > MAX_VERTICES:
        raise ValueError(f"enumeration limited to {MAX_MODES} modes and {MAX_VERTICES} vertices")
    if n > graph.n:
        raise ValueError("more modes than qubits")


def tree_shapes(n: int, graph: HardwareGraph) -> set[Shape]:
    """All ordered ternary trees on ``n`` distinct qubits whose edges are graph edges."""
    layer: set[Shape] = {(v, ((v, (None, None, None)),)) for v in range(graph.n)}
    for _ in range(n - 1):
        nxt: set[Shape] = set()
        for root, nodes in layer:
            table = dict(nodes)
            for q, ch in nodes:
                for slot in range(3):
                    if ch[slot] is not None:
                        continue
                    for u in graph.neighbors(q):
                        if u in table:
                            continue
                        grown = dict(table)
                        new_ch = list(ch)
                        new_ch[slot] = u
                        grown[q] = tuple(new_ch)
                        grown[u] = (None, None, None)
                        nxt.add((root, tuple(sorted(grown.items()))))
        layer = nxt
    return layer


def mappings_from_shape(shape: Shape) -> Iterator[MappingTree]:
    root, nodes = shape
    qubits = [q for q, _ in nodes]
    n = len(qubits)
    for modes in itertools.permutations(range(n)):
        for braids in itertools.product("+-", repeat=n):
            yield MappingTree(
                root,
                {q: Node(q, m, b, ch) for (q, ch), m, b in zip(nodes, modes, braids)},
                validate=False,
            )


def all_mappings(n: int, graph: HardwareGraph) -> Iterator[MappingTree]:
    _check_limits(n, graph)
    for shape in sorted(tree_shapes(n, graph), key=repr):
        yield from mappings_from_shape(shape)


def complete_bound(n: int, q: int) -> int:
    """Upper bound ``n! (2n)! C(Q, n)`` on mappings over a fully connected device."""
    return math.factorial(n) * math.factorial(2 * n) * math.comb(q, n)


def bounded_degree_bound(n: int, q: int, d: int) -> int:
    """Upper bound ``Q 3^n d^n (n-1)! 2^n n!`` for maximum device degree ``d``."""
    return q * 3**n * d**n * math.factorial(n - 1) * 2**n * math.factorial(n)


@dataclass(frozen=True)
class CountReport:
    n_modes: int
    n_vertices: int
    max_degree: int
    tree_shapes: int
    mappings: int
    complete_bound: int
    bounded_degree_bound: int

    def to_dict(self) -> dict:
        return asdict(self)


def count_mappings(n: int, graph: HardwareGraph) -> CountReport:
    """Distinct connectivity-preserving mappings: shapes times mode labellings times braid flags."""
    _check_limits(n, graph)
    shapes = len(tree_shapes(n, graph))
    total = shapes * math.factorial(n) * 2**n
    d = graph.max_degree
    return CountReport(n, graph.n, d, shapes, total, complete_bound(n, graph.n), bounded_degree_bound(n, graph.n, d))


@dataclass(frozen=True)
class ReachabilityReport:
    n_modes: int
    start: str
    reachable: int
    total: int
    outside: int

    @property
    def fraction(self) -> float:
        return self.reachable / self.total

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fraction"] = self.fraction
        return d


def reachability(n: int, graph: HardwareGraph, start: str = "bonsai") -> ReachabilityReport:
    """Breadth-first search of the move graph from a Bonsai or Jordan-Wigner start."""
    _check_limits(n, graph)
    if start == "bonsai":
        origin = bonsai_tree(graph, n)
    elif start == "jw":
        origin = jw_tree(n)
        if not origin.is_subgraph_of(graph):
            raise ValueError("Jordan-Wigner chain is not embedded in this graph")
    else:
        raise ValueError("start must be 'bonsai' or 'jw'")
    universe = {t.key for t in all_mappings(n, graph)}
    seen = {origin.key}
    queue = deque([origin])
    while queue:
        t = queue.popleft()
        for nb in neighbors(t, graph):
            if nb.key not in seen:
                seen.add(nb.key)
                queue.append(nb)
    return ReachabilityReport(n, start, len(seen & universe), len(universe), len(seen - universe))
