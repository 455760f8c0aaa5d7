"""CNOT cost models: closed-form Pauli cost and compiled (cancelled) cost."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .circuit import compile_ansatz, peephole_tagged
from .fermion import FermionicAnsatz, MajoranaMonomial, expand_generator
from .hardware import HardwareGraph, steiner_size
from .mapping import MappingTree, majorana_bits, map_ansatz
from .pauli import PauliSum

COST_KINDS = ("pauli_fc", "pauli_lc", "compiled")


@dataclass(frozen=True)
class CostBreakdown:
    total_cnots: int
    per_generator: tuple[int, ...]
    cost_kind: str
    certified_terms: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.cost_kind not in COST_KINDS:
            raise ValueError(f"unknown cost kind {self.cost_kind!r}")
        if any(c < 0 for c in self.per_generator) or sum(self.per_generator) != self.total_cnots:
            raise ValueError("per-generator costs must be non-negative and sum to the total")

    def to_dict(self) -> dict:
        return {"total_cnots": self.total_cnots, "per_generator": list(self.per_generator), "cost_kind": self.cost_kind}


def full_term_cost(weight: int) -> int:
    return max(0, 2 * (weight - 1))


def limited_term_cost(n_tree: int, weight: int) -> int:
    return 0 if weight == 0 else 2 * (2 * n_tree - weight - 1)


def _support(mask: int) -> list[int]:
    out = []
    q = 0
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return out


def _require_connected(graph: HardwareGraph) -> None:
    if not graph.is_connected():
        raise ValueError("cost model needs a connected hardware graph")


def pauli_cost(
    mapped: Sequence[tuple[float, PauliSum]],
    graph: HardwareGraph,
    tree: MappingTree | None = None,
    connectivity: str = "limited",
) -> CostBreakdown:
    """Sum of per-term ladder costs. ``limited`` sizes each term by its Steiner tree on ``graph``."""
    if connectivity not in ("full", "limited"):
        raise ValueError("connectivity must be 'full' or 'limited'")
    _require_connected(graph)
    exact = tree is not None and tree.width <= graph.n and tree.is_subgraph_of(graph)
    per = []
    certified = 0
    for _, gen in mapped:
        total = 0
        for _, p in gen:
            mask = p.support_mask
            k = bin(mask).count("1")
            if connectivity == "full":
                total += full_term_cost(k)
            elif k:
                n_tree, cert = steiner_size(graph, _support(mask), exact)
                certified += cert
                total += limited_term_cost(n_tree, k)
        per.append(total)
    kind = "pauli_fc" if connectivity == "full" else "pauli_lc"
    return CostBreakdown(sum(per), tuple(per), kind, certified)


def compiled_cost(ansatz: FermionicAnsatz, tree: MappingTree, graph: HardwareGraph) -> CostBreakdown:
    """Compile, run peephole cancellation and count the surviving CNOTs per generator."""
    _require_connected(graph)
    mapped = map_ansatz(tree, ansatz, graph.n)
    mode = "cp" if tree.width <= graph.n and tree.is_subgraph_of(graph) else "general"
    circ = compile_ansatz(mapped, tree, graph, mode, ansatz.reference_occupations)
    prep = len(circ.gates) - sum(circ.block_gates)
    tags = [-1] * prep
    for k, size in enumerate(circ.block_gates):
        tags.extend([k] * size)
    gates, tags = peephole_tagged(circ.gates, tags)
    per = [0] * len(circ.block_gates)
    for g, t in zip(gates, tags):
        if g.kind == "CNOT":
            per[t] += 1
    return CostBreakdown(sum(per), tuple(per), "compiled")


class CostEvaluator:
    """Fast repeated Pauli-cost evaluation of one ansatz over many mappings.

    Monomial index tuples are expanded once; each call recomputes the signed
    Majorana strings of the tree, XORs them per monomial and looks the Steiner
    size up in a cache keyed by support mask.
    """

    def __init__(self, ansatz: FermionicAnsatz, graph: HardwareGraph, connectivity: str = "limited"):
        if connectivity not in ("full", "limited"):
            raise ValueError("connectivity must be 'full' or 'limited'")
        _require_connected(graph)
        self.graph = graph
        self.connectivity = connectivity
        self.n_modes = ansatz.n_modes
        self._monomials: list[list[tuple[int, ...]]] = []
        for g in ansatz.generators:
            monos: list[MajoranaMonomial] = expand_generator(g, ansatz.n_modes)
            self._monomials.append([m.indices for m in monos])
        self._cache: dict[tuple[int, bool], int] = {}
        self.evaluations = 0

    def _term(self, mask: int, exact: bool) -> int:
        k = bin(mask).count("1")
        if self.connectivity == "full":
            return full_term_cost(k)
        if k == 0:
            return 0
        key = (mask, exact)
        n_tree = self._cache.get(key)
        if n_tree is None:
            n_tree = self._cache[key] = steiner_size(self.graph, _support(mask), exact)[0]
        return limited_term_cost(n_tree, k)

    def per_generator(self, tree: MappingTree) -> list[int]:
        if tree.n_modes != self.n_modes:
            raise ValueError("mapping and ansatz disagree on n_modes")
        self.evaluations += 1
        bits = majorana_bits(tree)
        exact = self.connectivity == "limited" and tree.width <= self.graph.n and tree.is_subgraph_of(self.graph)
        out = []
        for monos in self._monomials:
            total = 0
            for idx in monos:
                x = z = 0
                for k in idx:
                    bx, bz, _ = bits[k]
                    x ^= bx
                    z ^= bz
                total += self._term(x | z, exact)
            out.append(total)
        return out

    def __call__(self, tree: MappingTree) -> int:
        return sum(self.per_generator(tree))

    def breakdown(self, tree: MappingTree) -> CostBreakdown:
        per = self.per_generator(tree)
        kind = "pauli_fc" if self.connectivity == "full" else "pauli_lc"
        return CostBreakdown(sum(per), tuple(per), kind)
