"""Simulated annealing over mapping trees."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Mapping

import numpy as np

from .cost import CostEvaluator, compiled_cost
from .fermion import FermionicAnsatz, NonFermionicPoolError
from .hardware import HardwareGraph
from .mapping import MappingTree, bonsai_tree, jw_tree
from .moves import MOVE_KINDS, SEARCH_MODES, draw_move


@dataclass(frozen=True)
class AnnealConfig:
    iterations: int = 2000
    initial_temp: float | None = None
    cooling_factor: float = 0.995
    seed: int = 0
    restarts: int = 1
    search_mode: str = "cp"
    cost_kind: str = "pauli"
    enable_braiding: bool = True

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.initial_temp is not None and not self.initial_temp > 0:
            raise ValueError("initial_temp must be positive")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.search_mode not in SEARCH_MODES:
            raise ValueError(f"search_mode must be one of {SEARCH_MODES}")
        if self.cost_kind not in ("pauli", "compiled"):
            raise ValueError("cost_kind must be 'pauli' or 'compiled'")

    @classmethod
    def from_dict(cls, data: Mapping) -> AnnealConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**dict(data))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class AnnealResult:
    best_mapping: MappingTree
    best_cost: int
    initial_cost: int
    cost_trace: list[tuple[int, int]]
    accepted_moves: dict[str, int]
    best_restart: int = 0
    restart_costs: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best_cost": self.best_cost,
            "initial_cost": self.initial_cost,
            "best_restart": self.best_restart,
            "restart_costs": list(self.restart_costs),
            "accepted_moves": dict(self.accepted_moves),
            "best_mapping": self.best_mapping.to_dict(),
        }


def accept(delta: float, temp: float, rng: np.random.Generator) -> bool:
    """Metropolis rule: downhill or flat always, uphill with probability ``exp(-delta / temp)``."""
    if temp <= 0:
        raise ValueError("temperature must be positive")
    if delta <= 0:
        return True
    return bool(rng.random() < math.exp(-delta / temp))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def initial_mapping(ansatz: FermionicAnsatz, graph: HardwareGraph, mode: str) -> MappingTree:
    n = ansatz.n_modes
    if mode in ("cp", "ncp"):
        if graph.n < n:
            raise ValueError(f"graph has {graph.n} qubits but the ansatz needs {n}")
        return bonsai_tree(graph, n)
    if graph.n < n:
        raise ValueError(f"graph has {graph.n} qubits but the ansatz needs {n}")
    return jw_tree(n)


def cost_function(ansatz: FermionicAnsatz, graph: HardwareGraph, kind: str) -> Callable[[MappingTree], int]:
    if kind == "pauli":
        return CostEvaluator(ansatz, graph, "limited")
    return lambda tree: compiled_cost(ansatz, tree, graph).total_cnots


def _chain(start: MappingTree, start_cost: int, cost: Callable, graph: HardwareGraph, cfg: AnnealConfig,
           seed: int) -> tuple[MappingTree, int, list[tuple[int, int]], Counter]:
    rng = make_rng(seed)
    t0 = cfg.initial_temp if cfg.initial_temp is not None else max(1.0, start_cost / 10)
    current, current_cost = start, start_cost
    best, best_cost = start, start_cost
    trace = [(0, start_cost)]
    counts: Counter = Counter()
    temp = t0
    for it in range(1, cfg.iterations + 1):
        kind, cand = draw_move(current, graph, cfg.search_mode, rng, cfg.enable_braiding)
        if cand is not None:
            c = cost(cand)
            if accept(c - current_cost, temp, rng):
                current, current_cost = cand, c
                counts[kind] += 1
                if c < best_cost:
                    best, best_cost = cand, c
        trace.append((it, current_cost))
        temp *= cfg.cooling_factor
    return best, best_cost, trace, counts


def treespile(ansatz, graph: HardwareGraph, cfg: AnnealConfig, start: MappingTree | None = None) -> AnnealResult:
    """Anneal the mapping for ``ansatz`` on ``graph``; best over independently seeded restarts."""
    if not isinstance(ansatz, FermionicAnsatz):
        raise NonFermionicPoolError("pool has no fermionic representation")
    if start is None:
        start = initial_mapping(ansatz, graph, cfg.search_mode)
    elif cfg.search_mode == "cp" and not start.is_subgraph_of(graph):
        raise ValueError("cp search needs a start mapping embedded in the hardware graph")
    cost = cost_function(ansatz, graph, cfg.cost_kind)
    start_cost = cost(start)
    best = None
    restart_costs = []
    for r in range(cfg.restarts):
        mapping, value, trace, counts = _chain(start, start_cost, cost, graph, cfg, (cfg.seed + r) % 2**64)
        restart_costs.append(value)
        if best is None or value < best[1]:
            best = (mapping, value, trace, counts, r)
    mapping, value, trace, counts, r = best
    return AnnealResult(
        best_mapping=mapping,
        best_cost=value,
        initial_cost=start_cost,
        cost_trace=trace,
        accepted_moves={k: counts.get(k, 0) for k in MOVE_KINDS},
        best_restart=r,
        restart_costs=restart_costs,
    )
