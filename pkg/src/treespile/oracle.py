"""Dense statevector and unitary oracle for small-scale verification.

Basis index convention: qubit 0 is the most significant bit of the amplitude index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .circuit import Circuit, Gate
from .fermion import FermionicAnsatz, HamiltonianSpec
from .mapping import MappingTree, map_ansatz, map_monomials, pair_strings
from .pauli import PauliString, PauliSum

MAX_STATE_QUBITS = 14
MAX_UNITARY_QUBITS = 8

_SQ2 = 1 / np.sqrt(2)
_FIXED = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2,
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
}


def _index_mask(mask: int, n: int) -> int:
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def _pauli_action(p: PauliString, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(perm, diag)`` with ``(P v)[i ^ xm] = diag[i] * v[i]``; ``perm[i] = i ^ xm``."""
    if p.width > n:
        raise ValueError(f"string width {p.width} exceeds {n} qubits")
    xm = _index_mask(p.x, n)
    zm = _index_mask(p.z, n)
    idx = np.arange(1 << n, dtype=np.int64)
    signs = 1 - 2 * (np.bitwise_count(idx & zm).astype(np.int64) & 1)
    # letters: Y = i X Z, so the product of letters is i^{#Y} X^x Z^z
    scalar = (1, 1j, -1, -1j)[(p.phase + bin(p.x & p.z).count("1")) % 4]
    return idx ^ xm, scalar * signs


def apply_pauli(p: PauliString, vec: np.ndarray, n: int) -> np.ndarray:
    perm, diag = _pauli_action(p, n)
    out = np.empty_like(vec, dtype=complex)
    out[perm] = diag * vec
    return out


def pauli_matrix(p: PauliString, n: int | None = None) -> np.ndarray:
    n = p.width if n is None else n
    perm, diag = _pauli_action(p, n)
    m = np.zeros((1 << n, 1 << n), dtype=complex)
    m[perm, np.arange(1 << n)] = diag
    return m


def pauli_sum_sparse(h: PauliSum, n: int | None = None) -> sp.csr_matrix:
    n = h.width if n is None else n
    dim = 1 << n
    total = sp.csr_matrix((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for c, p in h:
        perm, diag = _pauli_action(p, n)
        total = total + sp.csr_matrix((c * diag, (perm, cols)), shape=(dim, dim))
    return total


def pauli_sum_matrix(h: PauliSum, n: int | None = None) -> np.ndarray:
    return pauli_sum_sparse(h, n).toarray()


@dataclass
class DenseState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits > MAX_STATE_QUBITS:
            raise ValueError(f"dense oracle limited to {MAX_STATE_QUBITS} qubits")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude vector has the wrong length")

    @classmethod
    def zero(cls, n: int) -> DenseState:
        return cls.basis(n, {})

    @classmethod
    def basis(cls, n: int, bits: Mapping[int, int]) -> DenseState:
        if n > MAX_STATE_QUBITS:
            raise ValueError(f"dense oracle limited to {MAX_STATE_QUBITS} qubits")
        amps = np.zeros(1 << n, dtype=complex)
        index = sum(1 << (n - 1 - q) for q, b in bits.items() if b)
        amps[index] = 1.0
        return cls(n, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: DenseState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def apply_pauli_exp(state: DenseState, p: PauliString, theta: float) -> DenseState:
    """``exp(i theta P)`` with ``P`` the Hermitian form of ``p`` (``-i p`` when ``p`` is anti-Hermitian)."""
    if p.width != state.n_qubits:
        raise ValueError("string width does not match the state")
    herm = p if p.phase % 2 == 0 else p.with_phase((p.phase - 1) % 4)
    pv = apply_pauli(herm, state.amplitudes, state.n_qubits)
    return DenseState(state.n_qubits, np.cos(theta) * state.amplitudes + 1j * np.sin(theta) * pv)


def apply_pauli_sum(state: DenseState, h: PauliSum) -> np.ndarray:
    if h.width != state.n_qubits:
        raise ValueError("operator width does not match the state")
    out = np.zeros_like(state.amplitudes)
    for c, p in h:
        out += c * apply_pauli(p, state.amplitudes, state.n_qubits)
    return out


def expectation(state: DenseState, h: PauliSum) -> complex:
    return complex(np.vdot(state.amplitudes, apply_pauli_sum(state, h)))


def evolve(state: DenseState, mapped: Sequence[tuple[float, PauliSum]]) -> DenseState:
    """Apply ``prod_k exp(theta_k T_k)`` in order, each exponential exact (no Trotter splitting)."""
    vec = state.amplitudes
    for theta, gen in mapped:
        if gen.width != state.n_qubits:
            raise ValueError("generator width does not match the state")
        if len(gen) == 0:
            continue
        vec = expm_multiply(theta * pauli_sum_sparse(gen, state.n_qubits), vec)
    return DenseState(state.n_qubits, vec)


# ----------------------------------------------------------------------- circuits


def _gate_matrix(g: Gate) -> np.ndarray:
    if g.kind == "RZ":
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    return _FIXED[g.kind]


def _apply_gate(tensor: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Apply a gate to a ``(2,)*n + (m,)`` tensor."""
    if g.kind == "CNOT":
        c, t = g.qubits
        out = tensor.copy()
        sel = [slice(None)] * (n + 1)
        sel[c] = 1
        sub = out[tuple(sel)]
        axis = t if t < c else t - 1
        out[tuple(sel)] = np.flip(sub, axis=axis)
        return out
    (q,) = g.qubits
    m = _gate_matrix(g)
    return np.moveaxis(np.tensordot(m, tensor, axes=([1], [q])), 0, q)


def apply_circuit(state: DenseState, circ: Circuit) -> DenseState:
    n = state.n_qubits
    if circ.n_qubits != n:
        raise ValueError("circuit width does not match the state")
    t = state.amplitudes.reshape((2,) * n + (1,))
    for g in circ.gates:
        t = _apply_gate(t, g, n)
    return DenseState(n, t.reshape(-1))


def circuit_unitary(circ: Circuit) -> np.ndarray:
    n = circ.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ValueError(f"unitary oracle limited to {MAX_UNITARY_QUBITS} qubits")
    dim = 1 << n
    t = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circ.gates:
        t = _apply_gate(t, g, n)
    return t.reshape(dim, dim)


def unitary_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``min_phi ||u - exp(i phi) v||_F``."""
    overlap = np.vdot(v, u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def state_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Global-phase-insensitive distance between two vectors."""
    return unitary_distance(np.asarray(a), np.asarray(b))


# ------------------------------------------------------------------ fermionic side


def mapped_ladder_operators(tree: MappingTree, width: int | None = None) -> tuple[list[PauliSum], list[PauliSum]]:
    """Mapped annihilators and creators, ``a_j = (m_2j + i m_2j+1) / 2`` with braid signs included."""
    width = tree.width if width is None else width
    assign = pair_strings(tree, width)
    annih, create = [], []
    for j in range(tree.n_modes):
        ma, mb = assign.signed(2 * j), assign.signed(2 * j + 1)
        annih.append(PauliSum(width, [(0.5, ma), (0.5j, mb)]))
        create.append(PauliSum(width, [(0.5, ma), (-0.5j, mb)]))
    return annih, create


def vacuum_residuals(tree: MappingTree) -> list[float]:
    """Norm of each mapped annihilator applied to the all-zero state."""
    width = tree.width
    vac = DenseState.zero(width)
    annih, _ = mapped_ladder_operators(tree, width)
    return [float(np.linalg.norm(apply_pauli_sum(vac, a))) for a in annih]


def prepare_fock_state(tree: MappingTree, occupations: Sequence[int]) -> DenseState:
    """Apply mapped creators for occupied modes (highest mode first) to the all-zero state."""
    width = tree.width
    state = DenseState.zero(width)
    _, create = mapped_ladder_operators(tree, width)
    for j in reversed(range(tree.n_modes)):
        if occupations[j]:
            state = DenseState(width, apply_pauli_sum(state, create[j]))
    return state


def ansatz_energy(tree: MappingTree, ansatz: FermionicAnsatz, hamiltonian: HamiltonianSpec) -> float:
    """``<psi|H|psi>`` with the reference prepared by mapped creators and the ansatz applied exactly."""
    if hamiltonian.n_modes != tree.n_modes:
        raise ValueError("Hamiltonian and mapping disagree on n_modes")
    width = tree.width
    state = prepare_fock_state(tree, ansatz.reference_occupations)
    state = evolve(state, map_ansatz(tree, ansatz, width))
    h = map_monomials(tree, hamiltonian.terms, width)
    value = expectation(state, h)
    if abs(value.imag) > 1e-9:
        raise ArithmeticError(f"Hermitian expectation has imaginary part {value.imag}")
    return value.real
