"""Ternary-tree fermion-to-qubit mapping compiler.

Maps fermionic ansatz circuits onto device qubits through product-preserving
ternary-tree encodings, anneals the encoding against a CNOT cost model and
synthesises the circuits with Steiner-tree Pauli exponentiation.
"""

from ._backend import BACKEND
from .fermion import (
    FermionicAnsatz,
    FermionicGenerator,
    HamiltonianSpec,
    MajoranaMonomial,
    NonFermionicPoolError,
    QubitAnsatz,
    enumerate_pool,
    expand_generator,
)
from .hardware import HardwareGraph, SteinerResult, preset, steiner_exact_small, steiner_heuristic, steiner_pptt
from .mapping import (
    MappingTree,
    Node,
    bonsai_tree,
    jw_tree,
    map_ansatz,
    map_monomial,
    occupation_to_bitstring,
    pair_strings,
    random_tree,
    strings_from_tree,
)
from .pauli import PauliString, PauliSum, commutes, multiply, weight_and_support

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FermionicAnsatz",
    "FermionicGenerator",
    "HamiltonianSpec",
    "HardwareGraph",
    "MajoranaMonomial",
    "MappingTree",
    "Node",
    "NonFermionicPoolError",
    "PauliString",
    "PauliSum",
    "QubitAnsatz",
    "SteinerResult",
    "bonsai_tree",
    "commutes",
    "enumerate_pool",
    "expand_generator",
    "jw_tree",
    "map_ansatz",
    "map_monomial",
    "multiply",
    "occupation_to_bitstring",
    "pair_strings",
    "preset",
    "random_tree",
    "steiner_exact_small",
    "steiner_heuristic",
    "steiner_pptt",
    "strings_from_tree",
    "weight_and_support",
]
