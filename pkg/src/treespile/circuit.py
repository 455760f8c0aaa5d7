"""Gate-level compilation: Steiner-tree Pauli exponentials, peephole cleanup and QASM."""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .hardware import HardwareGraph, SteinerCaseError, SteinerResult, steiner_heuristic, steiner_pptt
from .mapping import MappingTree, occupation_to_bitstring
from .pauli import PauliString, PauliSum

GATE_KINDS = ("H", "S", "Sdg", "X", "CNOT", "RZ")
_INVERSE = {"H": "H", "S": "Sdg", "Sdg": "S", "X": "X", "CNOT": "CNOT"}
_QASM_NAME = {"H": "h", "S": "s", "Sdg": "sdg", "X": "x", "CNOT": "cx", "RZ": "rz"}


class CompilationError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate {self.kind!r}")
        want = 2 if self.kind == "CNOT" else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} acts on {want} qubit(s)")
        if self.kind == "CNOT" and self.qubits[0] == self.qubits[1]:
            raise ValueError("CNOT control equals target")
        if self.kind == "RZ" and not math.isfinite(self.angle):
            raise ValueError("RZ angle must be finite")

    def __str__(self) -> str:
        if self.kind == "RZ":
            return f"RZ({self.angle:.6g}) q{self.qubits[0]}"
        return f"{self.kind} " + ",".join(f"q{q}" for q in self.qubits)


def H(q: int) -> Gate:
    return Gate("H", (q,))


def CNOT(c: int, t: int) -> Gate:
    return Gate("CNOT", (c, t))


def RZ(q: int, angle: float) -> Gate:
    return Gate("RZ", (q,), float(angle))


@dataclass
class Circuit:
    """Ordered gate list on ``n_qubits`` wires.

    ``blocks`` optionally records the CNOT count contributed by each compiled generator
    and ``block_gates`` the matching gate counts (preparation gates come first).
    """

    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    blocks: list[int] = field(default_factory=list)
    block_gates: list[int] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        if any(not 0 <= q < self.n_qubits for q in g.qubits):
            raise ValueError(f"gate {g} outside {self.n_qubits} qubits")

    def append(self, g: Gate) -> None:
        self._check(g)
        self.gates.append(g)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def cnot_count(self) -> int:
        return sum(g.kind == "CNOT" for g in self.gates)

    def off_edge_cnots(self, graph: HardwareGraph) -> list[Gate]:
        return [g for g in self.gates if g.kind == "CNOT" and not graph.has_edge(*g.qubits)]

    def report(self) -> dict:
        return {"cnots": self.cnot_count, "total_gates": len(self.gates), "per_generator": list(self.blocks)}


# ------------------------------------------------------------------ exponentials


def _hermitian_sign(p: PauliString) -> tuple[int, bool]:
    """Sign s and flag such that ``p = s * L`` (Hermitian) or ``p = i * s * L`` (anti-Hermitian)."""
    if p.phase % 2 == 0:
        return (1 if p.phase == 0 else -1), True
    return (1 if p.phase == 1 else -1), False


def _pruned_tree(steiner: SteinerResult, terminals: set[int]) -> tuple[set[int], dict[int, set[int]]]:
    adj: dict[int, set[int]] = {v: set() for v in steiner.tree_vertices}
    for a, b in steiner.tree_edges:
        adj[a].add(b)
        adj[b].add(a)
    stack = [v for v in adj if len(adj[v]) <= 1 and v not in terminals]
    while stack:
        v = stack.pop()
        if v not in adj or len(adj) == 1:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1 and w not in terminals:
                stack.append(w)
    return set(adj), adj


def compile_pauli_exp(p: PauliString, theta: float, graph: HardwareGraph, steiner: SteinerResult) -> list[Gate]:
    """Gates for ``exp(i theta P)`` with ``P`` the Hermitian form of ``p``.

    For an anti-Hermitian ``p`` (odd phase) the Hermitian form is ``-i p``, so the
    circuit realises ``exp(theta p)``. The parity of the support is gathered onto
    one vertex of the Steiner tree by leaf elimination, rotated, and uncomputed,
    using exactly ``2(2n - k - 1)`` CNOTs for a tree on ``n`` vertices and ``k``
    support qubits.
    """
    support = {q for q, _ in p.items()}
    if not support:
        raise CompilationError("cannot compile the exponential of an identity string")
    if not support <= steiner.tree_vertices:
        raise CompilationError("Steiner tree does not cover the string support")
    sign, _ = _hermitian_sign(p)

    pre: list[Gate] = []
    post: list[Gate] = []
    for q, letter in p.items():
        if letter == "X":
            pre.append(H(q))
            post.append(H(q))
        elif letter == "Y":
            pre.extend((Gate("Sdg", (q,)), H(q)))
            post.extend((H(q), Gate("S", (q,))))

    verts, adj = _pruned_tree(steiner, support)
    parity = set(support)
    ladder: list[Gate] = []
    while len(adj) > 1:
        v = min(u for u, nb in adj.items() if len(nb) == 1)
        (w,) = adj.pop(v)
        adj[w].discard(v)
        if not graph.has_edge(v, w):
            raise CompilationError(f"Steiner edge ({v}, {w}) is not a device edge")
        if w not in parity:
            ladder.append(CNOT(w, v))
            parity.add(w)
        ladder.append(CNOT(v, w))
    (target,) = adj
    rotation = RZ(target, -2.0 * theta * sign)
    return pre + ladder + [rotation] + ladder[::-1] + post


def expected_cnots(n_tree: int, k: int) -> int:
    return 2 * (2 * n_tree - k - 1)


# ----------------------------------------------------------------- ansatz level


def hf_state_prep(tree: MappingTree, occupations: Sequence[int], n_qubits: int | None = None) -> Circuit:
    bits = occupation_to_bitstring(tree, occupations)
    circ = Circuit(tree.width if n_qubits is None else n_qubits)
    for q in sorted(bits):
        if bits[q]:
            circ.append(Gate("X", (q,)))
    return circ


def choose_steiner(graph: HardwareGraph, support: Iterable[int], exact: bool) -> SteinerResult:
    """Certified tree for the polynomial cases when ``exact``, otherwise (or on a miss) the heuristic."""
    if exact:
        try:
            return steiner_pptt(graph, support)
        except SteinerCaseError:
            pass
    return steiner_heuristic(graph, support)


def compile_ansatz(
    mapped: Sequence[tuple[float, PauliSum]],
    tree: MappingTree,
    graph: HardwareGraph,
    mode: str = "cp",
    occupations: Sequence[int] | None = None,
) -> Circuit:
    """Reference-state preparation followed by every generator, term by term."""
    if mode not in ("cp", "general"):
        raise ValueError("mode must be 'cp' or 'general'")
    if tree.width > graph.n:
        raise CompilationError("mapping uses qubits outside the hardware graph")
    exact = mode == "cp"
    if exact and not tree.is_subgraph_of(graph):
        raise CompilationError("cp compilation needs the mapping tree embedded in the hardware graph")
    occ = [0] * tree.n_modes if occupations is None else list(occupations)
    circ = hf_state_prep(tree, occ, graph.n)
    cache: dict[int, SteinerResult] = {}
    for theta, gen in mapped:
        if gen.width > graph.n:
            raise CompilationError("generator width exceeds the hardware graph")
        before = circ.cnot_count
        before_gates = len(circ.gates)
        for coeff, p in gen:
            if p.support_mask == 0:
                warnings.warn("dropping identity term (global phase only)", RuntimeWarning, stacklevel=2)
                continue
            if abs(coeff.real) > 1e-12:
                raise CompilationError("generator term is not anti-Hermitian")
            mask = p.support_mask
            st = cache.get(mask)
            if st is None:
                st = cache[mask] = choose_steiner(graph, (q for q, _ in p.items()), exact)
            string = PauliString(graph.n, p.x, p.z)
            circ.extend(compile_pauli_exp(string, theta * coeff.imag, graph, st))
        circ.blocks.append(circ.cnot_count - before)
        circ.block_gates.append(len(circ.gates) - before_gates)
    return circ


# --------------------------------------------------------------------- peephole


def _inverse_pair(a: Gate, b: Gate) -> bool:
    return a.kind != "RZ" and _INVERSE[a.kind] == b.kind and a.qubits == b.qubits


def _angle_is_identity(angle: float, tol: float = 1e-12) -> bool:
    r = math.remainder(angle, 2 * math.pi)
    return abs(r) < tol


def _cancel_pass(gates: Sequence[Gate], tags: Sequence[int]) -> tuple[list[Gate], list[int], bool]:
    out: list[Gate | None] = []
    out_tags: list[int] = []
    last: dict[int, list[int]] = {}
    changed = False
    for g, tag in zip(gates, tags):
        tops = [last[q][-1] if last.get(q) else -1 for q in g.qubits]
        idx = max(tops)
        prev = out[idx] if idx >= 0 else None
        if prev is not None and all(t == idx for t in tops) and prev.qubits == g.qubits:
            if _inverse_pair(prev, g):
                out[idx] = None
                for q in g.qubits:
                    last[q].pop()
                changed = True
                continue
            if prev.kind == "RZ" and g.kind == "RZ":
                angle = prev.angle + g.angle
                changed = True
                if _angle_is_identity(angle):
                    out[idx] = None
                    last[g.qubits[0]].pop()
                else:
                    out[idx] = RZ(g.qubits[0], angle)
                continue
        if g.kind == "RZ" and _angle_is_identity(g.angle):
            changed = True
            continue
        out.append(g)
        out_tags.append(tag)
        for q in g.qubits:
            last.setdefault(q, []).append(len(out) - 1)
    keep = [i for i, g in enumerate(out) if g is not None]
    return [out[i] for i in keep], [out_tags[i] for i in keep], changed


def peephole_tagged(gates: Sequence[Gate], tags: Sequence[int]) -> tuple[list[Gate], list[int]]:
    """:func:`peephole_cancel` on a raw gate list, carrying one tag per gate along."""
    gates, tags = list(gates), list(tags)
    changed = True
    while changed:
        gates, tags, changed = _cancel_pass(gates, tags)
    return gates, tags


def peephole_cancel(circ: Circuit) -> Circuit:
    """Cancel inverse neighbours and merge RZ runs, looking through gates on other wires.

    RZ angles that are multiples of ``2 pi`` are removed; that changes the unitary by a
    global sign only.
    """
    gates, _ = peephole_tagged(circ.gates, [0] * len(circ.gates))
    return Circuit(circ.n_qubits, gates)


# -------------------------------------------------------------------------- QASM


def emit_qasm(circ: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circ.n_qubits}];"]
    for g in circ.gates:
        name = _QASM_NAME[g.kind]
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind == "RZ":
            lines.append(f"{name}({g.angle!r}) {args};")
        else:
            lines.append(f"{name} {args};")
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.+);$")


def parse_qasm(text: str) -> Circuit:
    """Read back the subset of OpenQASM 2.0 produced by :func:`emit_qasm`."""
    names = {v: k for k, v in _QASM_NAME.items()}
    n = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//") or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if line.startswith("qreg"):
            n = int(re.search(r"\[(\d+)\]", line).group(1))
            continue
        m = _LINE.match(line)
        if not m or m.group(1) not in names:
            raise ValueError(f"unsupported QASM line: {raw!r}")
        qubits = tuple(int(v) for v in re.findall(r"q\[(\d+)\]", m.group(3)))
        angle = float(m.group(2)) if m.group(2) else 0.0
        gates.append(Gate(names[m.group(1)], qubits, angle))
    if n is None:
        raise ValueError("QASM text has no qreg declaration")
    return Circuit(n, gates)
