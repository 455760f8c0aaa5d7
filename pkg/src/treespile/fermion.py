"""Majorana monomials, excitation generators, operator pools and Hamiltonians.

Majorana operators follow ``m[2j] = a_j^+ + a_j`` and ``m[2j+1] = i (a_j^+ - a_j)``,
so ``a_j = (m[2j] + i m[2j+1]) / 2``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pauli import PauliString, PauliSum

GENERATOR_KINDS = ("single", "double", "maj2", "maj4")
_ARITY = {"single": 2, "double": 4, "maj2": 2, "maj4": 4}


class NonFermionicPoolError(ValueError):
    """Raised when a qubit-only (QEB / qubit pool) ansatz is used where a fermionic one is needed."""


def normalize_indices(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort a Majorana product, returning ``(sign, canonical_indices)``.

    Each adjacent transposition flips the sign; adjacent equal pairs square
    to the identity and drop out.
    """
    work = list(indices)
    sign = 1
    # bubble sort so every swap is an adjacent transposition
    n = len(work)
    for i in range(n):
        for j in range(n - 1 - i):
            if work[j] > work[j + 1]:
                work[j], work[j + 1] = work[j + 1], work[j]
                sign = -sign
    out: list[int] = []
    for idx in work:
        if out and out[-1] == idx:
            out.pop()
        else:
            out.append(idx)
    return sign, tuple(out)


@dataclass(frozen=True)
class MajoranaMonomial:
    indices: tuple[int, ...]
    coefficient: complex = 1.0

    def normalized(self) -> MajoranaMonomial:
        sign, idx = normalize_indices(self.indices)
        return MajoranaMonomial(idx, sign * complex(self.coefficient))

    def adjoint(self) -> MajoranaMonomial:
        # (m_a m_b ... m_z)^+ = m_z ... m_b m_a
        return MajoranaMonomial(tuple(reversed(self.indices)), complex(self.coefficient).conjugate())

    @property
    def degree(self) -> int:
        return len(self.indices)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, ...], complex] = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            sign, idx = normalize_indices(ia + ib)
            out[idx] = out.get(idx, 0) + sign * ca * cb
    return out


def _poly_add(a: dict, b: dict, scale: complex = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return out


def _annihilator(j: int) -> dict:
    return {(2 * j,): 0.5, (2 * j + 1,): 0.5j}


def _creator(j: int) -> dict:
    return {(2 * j,): 0.5, (2 * j + 1,): -0.5j}


def _to_monomials(poly: dict, tol: float = 1e-12) -> list[MajoranaMonomial]:
    return [MajoranaMonomial(k, complex(v)) for k, v in sorted(poly.items()) if abs(v) > tol]


def fermion_product(ops: Iterable[tuple[str, int]]) -> list[MajoranaMonomial]:
    """Expand a product of ladder operators, e.g. ``[("+", 0), ("-", 1)]`` for a0^+ a1."""
    poly: dict = {(): 1.0}
    for kind, j in ops:
        poly = _poly_mul(poly, _creator(j) if kind == "+" else _annihilator(j))
    return _to_monomials(poly)


@dataclass(frozen=True)
class FermionicGenerator:
    kind: str
    indices: tuple[int, ...]
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(self.indices) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} indices, got {len(self.indices)}")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"repeated indices in {self.kind}{self.indices}")
        if min(self.indices) < 0:
            raise ValueError("negative index")

    @property
    def is_majoranic(self) -> bool:
        return self.kind.startswith("maj")

    def check_range(self, n_modes: int) -> None:
        limit = 2 * n_modes if self.is_majoranic else n_modes
        if max(self.indices) >= limit:
            raise ValueError(f"{self.kind}{self.indices} out of range for {n_modes} modes")


def expand_generator(g: FermionicGenerator, n_modes: int) -> list[MajoranaMonomial]:
    """Majorana expansion of one pool element (anti-Hermitian as a sum)."""
    g.check_range(n_modes)
    if g.kind == "maj2":
        return [MajoranaMonomial(g.indices, 1.0)]
    if g.kind == "maj4":
        return [MajoranaMonomial(g.indices, 1j)]
    if g.kind == "single":
        i, j = g.indices
        fwd = [("+", i), ("-", j)]
        back = [("+", j), ("-", i)]
    else:
        i, j, k, l = g.indices
        fwd = [("+", i), ("+", j), ("-", k), ("-", l)]
        back = [("+", k), ("+", l), ("-", i), ("-", j)]
    poly = _poly_add(_as_poly(fermion_product(fwd)), _as_poly(fermion_product(back)), -1)
    return _to_monomials(poly)


def _as_poly(monos: Iterable[MajoranaMonomial]) -> dict:
    return {m.indices: m.coefficient for m in monos}


def is_antihermitian(monos: Iterable[MajoranaMonomial], tol: float = 1e-12) -> bool:
    poly = _as_poly(m.normalized() for m in monos)
    adj = _as_poly(m.adjoint().normalized() for m in monos)
    return all(abs(poly.get(k, 0) + adj.get(k, 0)) <= tol for k in set(poly) | set(adj))


@dataclass(frozen=True)
class FermionicAnsatz:
    n_modes: int
    reference_occupations: tuple[int, ...]
    generators: tuple[FermionicGenerator, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "reference_occupations", tuple(int(b) for b in self.reference_occupations))
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(self.reference_occupations) != self.n_modes:
            raise ValueError("reference occupation length must equal n_modes")
        if any(b not in (0, 1) for b in self.reference_occupations):
            raise ValueError("occupations must be 0 or 1")
        for g in self.generators:
            g.check_range(self.n_modes)

    @property
    def is_majoranic(self) -> bool:
        return all(g.is_majoranic for g in self.generators)


@dataclass(frozen=True)
class QubitAnsatz:
    """QEB / qubit-pool ansatz: Jordan-Wigner frame only, no fermionic form."""

    n_qubits: int
    reference_occupations: tuple[int, ...]
    generators: tuple[tuple[float, PauliSum], ...]


@dataclass(frozen=True)
class HamiltonianSpec:
    n_modes: int
    terms: tuple[MajoranaMonomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if any(not 0 <= i < 2 * self.n_modes for i in t.indices):
                raise ValueError(f"Majorana index out of range in {t.indices}")
        if not self.is_hermitian():
            raise ValueError("Hamiltonian terms are not closed under conjugation")

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        poly = _as_poly_sum(m.normalized() for m in self.terms)
        adj = _as_poly_sum(m.adjoint().normalized() for m in self.terms)
        return all(abs(poly.get(k, 0) - adj.get(k, 0)) <= tol for k in set(poly) | set(adj))


def _as_poly_sum(monos: Iterable[MajoranaMonomial]) -> dict:
    out: dict = {}
    for m in monos:
        out[m.indices] = out.get(m.indices, 0) + m.coefficient
    return out


# --------------------------------------------------------------------------- pools


def qeb_single(i: int, j: int, n: int) -> PauliSum:
    xy = PauliString.from_letters({i: "X", j: "Y"}, n)
    yx = PauliString.from_letters({i: "Y", j: "X"}, n)
    return PauliSum(n, [(0.5j, xy), (-0.5j, yx)])


_QEB_DOUBLE = (
    (+1, "XYXX"), (+1, "YXXX"), (+1, "YYYX"), (+1, "YYXY"),
    (-1, "XXYX"), (-1, "XXXY"), (-1, "YXYY"), (-1, "XYYY"),
)


def qeb_double(i: int, j: int, k: int, l: int, n: int) -> PauliSum:
    terms = []
    for sign, letters in _QEB_DOUBLE:
        p = PauliString.from_letters(dict(zip((i, j, k, l), letters)), n)
        terms.append((sign * 0.125j, p))
    return PauliSum(n, terms)


def _single_pairs(n: int):
    return itertools.combinations(range(n), 2)


def _double_quads(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) == 4:
            yield i, j, k, l


def enumerate_pool(kind: str, n_modes: int) -> list:
    """Full (unfiltered) operator pool over ``n_modes`` modes.

    ``fermionic`` and ``majoranic`` return :class:`FermionicGenerator` lists;
    ``qeb`` and ``qubit`` return anti-Hermitian :class:`PauliSum` generators in
    the Jordan-Wigner frame. Doubles use one representative per unordered pair
    of disjoint index pairs, since swapping the pairs only negates the
    generator.
    """
    if n_modes < 2:
        raise ValueError("pools need at least 2 modes")
    if kind == "fermionic":
        out = [FermionicGenerator("single", (i, j)) for i, j in _single_pairs(n_modes)]
        out += [FermionicGenerator("double", q) for q in _double_quads(n_modes)]
        return out
    if kind == "majoranic":
        m = 2 * n_modes
        out = [FermionicGenerator("maj2", p) for p in itertools.combinations(range(m), 2)]
        out += [FermionicGenerator("maj4", q) for q in itertools.combinations(range(m), 4)]
        return out
    if kind == "qeb":
        out = [qeb_single(i, j, n_modes) for i, j in _single_pairs(n_modes)]
        out += [qeb_double(*q, n_modes) for q in _double_quads(n_modes)]
        return out
    if kind == "qubit":
        seen: dict[tuple[int, int], PauliString] = {}
        for gen in enumerate_pool("qeb", n_modes):
            for _, p in gen:
                seen.setdefault((p.x, p.z), p)
        return [PauliSum(n_modes, [(1j, p)]) for p in seen.values()]
    raise ValueError(f"unknown pool kind {kind!r}")


# ------------------------------------------------------------- seeded instances


def random_hamiltonian(n_modes: int, seed: int, n_quadratic: int = 6, n_quartic: int = 6) -> HamiltonianSpec:
    """Hermitian Majorana Hamiltonian: ``i c m_a m_b`` and ``c m_a m_b m_c m_d`` with real ``c``."""
    rng = random.Random(seed)
    m = 2 * n_modes
    terms = []
    for _ in range(n_quadratic):
        idx = tuple(sorted(rng.sample(range(m), 2)))
        terms.append(MajoranaMonomial(idx, 1j * rng.uniform(-1, 1)))
    if m >= 4:
        for _ in range(n_quartic):
            idx = tuple(sorted(rng.sample(range(m), 4)))
            terms.append(MajoranaMonomial(idx, complex(rng.uniform(-1, 1))))
    return HamiltonianSpec(n_modes, tuple(terms))


def random_ansatz(n_modes: int, seed: int, n_generators: int, kinds: Sequence[str] = ("maj2", "maj4"),
                  n_occupied: int | None = None) -> FermionicAnsatz:
    """Seeded ansatz drawing generator kinds uniformly from ``kinds`` and indices uniformly."""
    rng = random.Random(seed)
    gens = []
    for _ in range(n_generators):
        kind = rng.choice(list(kinds))
        limit = 2 * n_modes if kind.startswith("maj") else n_modes
        idx = tuple(sorted(rng.sample(range(limit), _ARITY[kind])))
        if kind == "double" and rng.random() < 0.5:
            idx = (idx[0], idx[2], idx[1], idx[3])
        gens.append(FermionicGenerator(kind, idx, round(rng.uniform(-1, 1), 6)))
    occ_count = n_modes // 2 if n_occupied is None else n_occupied
    occ = [1] * occ_count + [0] * (n_modes - occ_count)
    return FermionicAnsatz(n_modes, tuple(occ), tuple(gens))
