"""Phase-tracked Pauli strings in symplectic (x, z) bitmask form.

Qubit ``u`` corresponds to bit ``u`` of the ``x`` and ``z`` integers. The letter
on a qubit is I/X/Y/Z for (x, z) = (0, 0)/(1, 0)/(1, 1)/(0, 1), and the whole
string carries a global factor ``i**phase``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {v: k for k, v in _PHASE_PREFIX.items()}
_PHASE_VALUE = (1, 1j, -1, -1j)


def _popcount(v: int) -> int:
    return bin(v).count("1")


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of ``i`` picked up when multiplying two phase-free letter strings."""
    x3, z3 = x1 ^ x2, z1 ^ z2
    return (
        _popcount(x1 & z1) + _popcount(x2 & z2) + 2 * _popcount(z1 & x2) - _popcount(x3 & z3)
    ) % 4


@dataclass(frozen=True)
class PauliString:
    width: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be non-negative")
        limit = 1 << self.width
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise ValueError(f"bit pattern does not fit in {self.width} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -----------------------------------------------------------
    @classmethod
    def identity(cls, width: int) -> PauliString:
        return cls(width)

    @classmethod
    def from_letters(cls, letters: dict[int, str], width: int, phase: int = 0) -> PauliString:
        """Build from a sparse ``{qubit: letter}`` dict."""
        x = z = 0
        for q, letter in letters.items():
            if not 0 <= q < width:
                raise ValueError(f"qubit {q} outside width {width}")
            bx, bz = _BITS[letter.upper()]
            x |= bx << q
            z |= bz << q
        return cls(width, x, z, phase)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse text such as ``"-iXIZY"`` (qubit 0 leftmost)."""
        body = label.lstrip("-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PREFIX_PHASE:
            raise ValueError(f"bad phase prefix {prefix!r}")
        x = z = 0
        for q, ch in enumerate(body):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(len(body), x, z, _PREFIX_PHASE[prefix])

    # views ------------------------------------------------------------------
    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.width))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.width))

    @property
    def support_mask(self) -> int:
        return self.x | self.z

    @property
    def coefficient(self) -> complex:
        return _PHASE_VALUE[self.phase]

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def letter(self, q: int) -> str:
        return _LETTERS[((self.x >> q) & 1, (self.z >> q) & 1)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.width))

    def items(self) -> Iterator[tuple[int, str]]:
        """Yield ``(qubit, letter)`` for non-identity qubits in increasing order."""
        mask = self.x | self.z
        q = 0
        while mask:
            if mask & 1:
                yield q, self.letter(q)
            mask >>= 1
            q += 1

    def with_phase(self, phase: int) -> PauliString:
        return PauliString(self.width, self.x, self.z, phase)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return self.with_phase(self.phase + 2)


def _check_width(a: PauliString, b: PauliString) -> None:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a @ b`` including the global phase."""
    _check_width(a, b)
    phase = a.phase + b.phase + product_phase(a.x, a.z, b.x, b.z)
    return PauliString(a.width, a.x ^ b.x, a.z ^ b.z, phase)


def multiply_all(strings: Iterable[PauliString], width: int) -> PauliString:
    out = PauliString.identity(width)
    for s in strings:
        out = multiply(out, s)
    return out


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_width(a, b)
    return _popcount((a.x & b.z) ^ (a.z & b.x)) % 2 == 0


def weight_and_support(p: PauliString) -> tuple[int, frozenset[int]]:
    support = frozenset(q for q, _ in p.items())
    return len(support), support


class PauliSum:
    """Sum of Pauli strings with complex coefficients, kept in canonical form.

    Term phases are folded into the coefficients so each stored string has
    ``phase == 0``. Terms are merged by bit pattern, zero coefficients are
    dropped and the remaining terms are ordered lexicographically on
    ``(z_bits, x_bits)``.
    """

    __slots__ = ("width", "_terms")

    def __init__(self, width: int, terms: Iterable[tuple[complex, PauliString]] = (), tol: float = 1e-12):
        self.width = width
        acc: dict[tuple[int, int], complex] = {}
        for coeff, p in terms:
            if p.width != width:
                raise ValueError(f"width mismatch: {p.width} vs {width}")
            key = (p.x, p.z)
            acc[key] = acc.get(key, 0) + complex(coeff) * p.coefficient
        kept = [(c, PauliString(width, x, z)) for (x, z), c in acc.items() if abs(c) > tol]
        kept.sort(key=lambda t: (t[1].z_bits, t[1].x_bits))
        self._terms = tuple(kept)

    @property
    def terms(self) -> tuple[tuple[complex, PauliString], ...]:
        return self._terms

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def simplify(self) -> PauliSum:
        return PauliSum(self.width, self._terms)

    def __add__(self, other: PauliSum) -> PauliSum:
        return PauliSum(self.width, self._terms + other._terms)

    def __mul__(self, scalar: complex) -> PauliSum:
        return PauliSum(self.width, [(scalar * c, p) for c, p in self._terms])

    __rmul__ = __mul__

    def adjoint(self) -> PauliSum:
        return PauliSum(self.width, [(c.conjugate(), p) for c, p in self._terms])

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return all(abs(c.imag) <= atol for c, _ in self._terms)

    def is_antihermitian(self, atol: float = 1e-10) -> bool:
        return all(abs(c.real) <= atol for c, _ in self._terms)

    def close_to(self, other: PauliSum, atol: float = 1e-10) -> bool:
        diff = PauliSum(self.width, self._terms + tuple((-c, p) for c, p in other._terms), tol=atol)
        return len(diff) == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.width == other.width and self.close_to(other)

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.6g})*{p.letters()}" for c, p in self._terms)
        return f"PauliSum({body or '0'})"
