"""Product-preserving ternary-tree fermion-to-qubit mappings.

A :class:`MappingTree` is an ordered ternary tree whose nodes carry a physical
qubit, a fermionic mode and a braid flag. Nodes are keyed by their qubit, which
is unique within a tree. Root-to-leg paths generate the Majorana strings; each
node pairs the string leaving its X slot with the one leaving its Y slot, both
continued by the maximal all-Z descent to a leg.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from .fermion import FermionicAnsatz, MajoranaMonomial, expand_generator
from .pauli import PauliString, PauliSum, product_phase

if TYPE_CHECKING:
    from .hardware import HardwareGraph

SLOTS = ("X", "Y", "Z")
X_SLOT, Y_SLOT, Z_SLOT = 0, 1, 2


class MalformedTreeError(ValueError):
    pass


class PairingError(RuntimeError):
    """The occupation system is singular or a mode has the wrong sign: a pairing bug."""


@dataclass(frozen=True)
class Node:
    qubit: int
    mode: int
    braid: str = "+"
    children: tuple = (None, None, None)

    @property
    def out_degree(self) -> int:
        return sum(c is not None for c in self.children)

    def free_slots(self) -> list[int]:
        return [s for s, c in enumerate(self.children) if c is None]


class MappingTree:
    """Immutable labelled ordered ternary tree; the full PPTT mapping."""

    __slots__ = ("root", "_nodes", "_parent", "_key")

    def __init__(self, root: int, nodes: Mapping[int, Node] | Iterable[Node], validate: bool = True):
        if not isinstance(nodes, Mapping):
            nodes = {n.qubit: n for n in nodes}
        self.root = root
        self._nodes = dict(nodes)
        self._parent: dict[int, tuple[int, int]] | None = None
        self._key = None
        if validate:
            self.validate()

    # structure --------------------------------------------------------------
    @property
    def n_modes(self) -> int:
        return len(self._nodes)

    @property
    def nodes(self) -> Mapping[int, Node]:
        return self._nodes

    def node(self, qubit: int) -> Node:
        return self._nodes[qubit]

    @property
    def qubits(self) -> list[int]:
        return sorted(self._nodes)

    @property
    def width(self) -> int:
        return max(self._nodes) + 1

    @property
    def parents(self) -> dict[int, tuple[int, int]]:
        """``child qubit -> (parent qubit, slot)``."""
        if self._parent is None:
            par = {}
            for q, n in self._nodes.items():
                for s, c in enumerate(n.children):
                    if c is not None:
                        par[c] = (q, s)
            self._parent = par
        return self._parent

    def edges(self) -> list[tuple[int, int]]:
        return sorted(
            (min(q, c), max(q, c)) for q, n in self._nodes.items() for c in n.children if c is not None
        )

    def leaves(self) -> list[int]:
        return sorted(q for q, n in self._nodes.items() if n.out_degree == 0 and q != self.root)

    def mode_of(self) -> dict[int, int]:
        return {n.mode: q for q, n in self._nodes.items()}

    def validate(self) -> None:
        nodes = self._nodes
        n = len(nodes)
        if n == 0:
            raise MalformedTreeError("empty tree")
        if self.root not in nodes:
            raise MalformedTreeError(f"root {self.root} is not a node")
        modes = sorted(nd.mode for nd in nodes.values())
        if modes != list(range(n)):
            raise MalformedTreeError("modes must be exactly 0..N-1, each once")
        seen_child: set[int] = set()
        for q, nd in nodes.items():
            if nd.qubit != q:
                raise MalformedTreeError(f"node keyed {q} carries qubit {nd.qubit}")
            if nd.braid not in ("+", "-"):
                raise MalformedTreeError(f"bad braid flag {nd.braid!r}")
            if len(nd.children) != 3:
                raise MalformedTreeError("each node needs exactly three slots")
            for c in nd.children:
                if c is None:
                    continue
                if c not in nodes:
                    raise MalformedTreeError(f"child {c} of {q} is not a node")
                if c in seen_child or c == self.root:
                    raise MalformedTreeError(f"node {c} has more than one parent")
                seen_child.add(c)
        if len(seen_child) != n - 1:
            raise MalformedTreeError("node set is not a single rooted tree")
        # reachability rules out cycles disjoint from the root
        reached = 0
        stack = [self.root]
        while stack:
            q = stack.pop()
            reached += 1
            stack.extend(c for c in nodes[q].children if c is not None)
            if reached > n:
                break
        if reached != n:
            raise MalformedTreeError("node set is not a single rooted tree")

    # equality ---------------------------------------------------------------
    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                self.root,
                tuple((q, nd.mode, nd.braid, nd.children) for q, nd in sorted(self._nodes.items())),
            )
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, MappingTree) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"MappingTree(root={self.root}, n_modes={self.n_modes})"

    # derived ----------------------------------------------------------------
    def replace_nodes(self, updates: Mapping[int, Node], root: int | None = None, drop: Sequence[int] = ()) -> MappingTree:
        nodes = dict(self._nodes)
        for q in drop:
            del nodes[q]
        nodes.update(updates)
        return MappingTree(self.root if root is None else root, nodes, validate=False)

    def is_subgraph_of(self, graph: HardwareGraph) -> bool:
        if max(self._nodes) >= graph.n:
            return False
        return all(graph.has_edge(a, b) for a, b in self.edges())

    def compact(self) -> MappingTree:
        """Relabel the used qubits to ``0..N-1`` preserving their order."""
        relabel = {q: i for i, q in enumerate(sorted(self._nodes))}
        nodes = {
            relabel[q]: Node(relabel[q], nd.mode, nd.braid, tuple(None if c is None else relabel[c] for c in nd.children))
            for q, nd in self._nodes.items()
        }
        return MappingTree(relabel[self.root], nodes)

    # serialization ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "root": self.root,
            "nodes": [
                {
                    "id": q,
                    "qubit": q,
                    "mode": nd.mode,
                    "braid": nd.braid,
                    "children": {s: c for s, c in zip(SLOTS, nd.children)},
                }
                for q, nd in sorted(self._nodes.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> MappingTree:
        try:
            raw = list(data["nodes"])
            id_to_qubit = {}
            for rec in raw:
                if rec["id"] in id_to_qubit:
                    raise MalformedTreeError(f"duplicate node id {rec['id']}")
                id_to_qubit[rec["id"]] = int(rec["qubit"])
            if len(set(id_to_qubit.values())) != len(raw):
                raise MalformedTreeError("duplicate qubit in mapping")
            nodes = {}
            for rec in raw:
                q = id_to_qubit[rec["id"]]
                ch = rec.get("children", {})
                children = []
                for s in SLOTS:
                    cid = ch.get(s)
                    if cid is not None and cid not in id_to_qubit:
                        raise MalformedTreeError(f"unknown child id {cid}")
                    children.append(None if cid is None else id_to_qubit[cid])
                nodes[q] = Node(q, int(rec["mode"]), rec.get("braid", "+"), tuple(children))
            if data["root"] not in id_to_qubit:
                raise MalformedTreeError(f"unknown root id {data['root']}")
            tree = cls(id_to_qubit[data["root"]], nodes)
        except (KeyError, TypeError) as exc:
            raise MalformedTreeError(f"malformed mapping record: {exc}") from None
        if "n_modes" in data and data["n_modes"] != tree.n_modes:
            raise MalformedTreeError("n_modes does not match node count")
        return tree


# ----------------------------------------------------------------- constructors


def jw_tree(n_modes: int, qubits: Sequence[int] | None = None) -> MappingTree:
    """Jordan-Wigner: a Z-linked chain rooted at the first qubit, mode j on the j-th qubit."""
    qubits = list(range(n_modes)) if qubits is None else list(qubits)
    if len(qubits) != n_modes or n_modes < 1:
        raise ValueError("need one qubit per mode")
    nodes = {}
    for j, q in enumerate(qubits):
        child = qubits[j + 1] if j + 1 < n_modes else None
        nodes[q] = Node(q, j, "+", (None, None, child))
    return MappingTree(qubits[0], nodes)


def bonsai_tree(graph: HardwareGraph, n_modes: int) -> MappingTree:
    """Breadth-first spanning subtree of the device rooted at its highest-degree vertex.

    Children fill X, Y, Z slots in discovery order; modes follow BFS order.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    if graph.n < n_modes:
        raise ValueError(f"graph has {graph.n} vertices, need {n_modes}")
    if not graph.is_connected():
        raise ValueError("graph is disconnected")
    degree = [len(graph.neighbors(v)) for v in range(graph.n)]
    root = max(range(graph.n), key=lambda v: (degree[v], -v))
    order = [root]
    children: dict[int, list[int]] = {root: []}
    queue = deque([root])
    while queue and len(order) < n_modes:
        v = queue.popleft()
        for w in graph.neighbors(v):
            if len(order) == n_modes or len(children[v]) == 3:
                break
            if w in children:
                continue
            children[v].append(w)
            children[w] = []
            order.append(w)
            queue.append(w)
    if len(order) < n_modes:
        raise ValueError("could not grow a ternary spanning subtree with enough nodes")
    nodes = {}
    for j, q in enumerate(order):
        ch = children[q] + [None] * (3 - len(children[q]))
        nodes[q] = Node(q, j, "+", tuple(ch))
    return MappingTree(root, nodes)


def random_tree(n_modes: int, seed: int | None = None, qubits: Sequence[int] | None = None, braids: bool = False) -> MappingTree:
    """Grow a tree by attaching each new node to a uniformly drawn free slot."""
    rng = random.Random(seed)
    qubits = list(range(n_modes)) if qubits is None else list(qubits)
    qubits = rng.sample(qubits, n_modes)
    modes = rng.sample(range(n_modes), n_modes)
    children = {qubits[0]: [None, None, None]}
    free = [(qubits[0], s) for s in range(3)]
    for q in qubits[1:]:
        parent, slot = free.pop(rng.randrange(len(free)))
        children[parent][slot] = q
        children[q] = [None, None, None]
        free.extend((q, s) for s in range(3))
    nodes = {}
    for q, j in zip(qubits, modes):
        b = rng.choice("+-") if braids else "+"
        nodes[q] = Node(q, j, b, tuple(children[q]))
    return MappingTree(qubits[0], nodes)


# ------------------------------------------------------------- string generation


def strings_from_tree(tree: MappingTree, width: int | None = None) -> list[PauliString]:
    """All ``2N + 1`` root-to-leg Pauli strings."""
    width = tree.width if width is None else width
    return [PauliString(width, x, z) for x, z in _leg_strings_ordered(tree)]


def _leg_strings_ordered(tree: MappingTree) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    nodes = tree.nodes

    def visit(q: int, x: int, z: int) -> None:
        bit = 1 << q
        for s, c in enumerate(nodes[q].children):
            nx = x | bit if s != Z_SLOT else x
            nz = z | bit if s != X_SLOT else z
            if c is None:
                out.append((nx, nz))
            else:
                visit(c, nx, nz)

    visit(tree.root, 0, 0)
    return out


def root_z_string(tree: MappingTree) -> int:
    """Support mask of the all-Z root string that the pairing discards."""
    nodes = tree.nodes
    mask = 0
    q = tree.root
    while q is not None:
        mask |= 1 << q
        q = nodes[q].children[Z_SLOT]
    return mask


def majorana_bits(tree: MappingTree) -> list[tuple[int, int, int]]:
    """``(x, z, sign)`` for Majorana indices ``0..2N-1``; the hot-path form of :func:`pair_strings`."""
    nodes = tree.nodes
    out: list = [None] * (2 * len(nodes))

    def z_descent(c) -> int:
        mask = 0
        while c is not None:
            mask |= 1 << c
            c = nodes[c].children[Z_SLOT]
        return mask

    stack = [(tree.root, 0, 0)]
    while stack:
        q, gx, gz = stack.pop()
        nd = nodes[q]
        bit = 1 << q
        cx, cy, cz = nd.children
        zx = z_descent(cx)
        zy = z_descent(cy)
        sx = (gx | bit, gz | zx)
        sy = (gx | bit, gz | bit | zy)
        j = nd.mode
        if nd.braid == "+":
            out[2 * j] = (sx[0], sx[1], 1)
            out[2 * j + 1] = (sy[0], sy[1], 1)
        else:
            out[2 * j] = (sy[0], sy[1], -1)
            out[2 * j + 1] = (sx[0], sx[1], 1)
        if cx is not None:
            stack.append((cx, gx | bit, gz))
        if cy is not None:
            stack.append((cy, gx | bit, gz | bit))
        if cz is not None:
            stack.append((cz, gx, gz | bit))
    return out


@dataclass(frozen=True)
class MajoranaAssignment:
    strings: tuple[PauliString, ...]
    signs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.strings)

    def signed(self, k: int) -> PauliString:
        s = self.strings[k]
        return s if self.signs[k] == 1 else -s


def pair_strings(tree: MappingTree, width: int | None = None) -> MajoranaAssignment:
    width = tree.width if width is None else width
    bits = majorana_bits(tree)
    return MajoranaAssignment(
        tuple(PauliString(width, x, z) for x, z, _ in bits),
        tuple(s for _, _, s in bits),
    )


def map_monomial(tree: MappingTree, mono: MajoranaMonomial, width: int | None = None) -> tuple[complex, PauliString]:
    """Ordered product of the signed Majorana strings; phase folded into the scalar."""
    width = tree.width if width is None else width
    bits = majorana_bits(tree)
    limit = len(bits)
    x = z = 0
    phase = 0
    coeff = complex(mono.coefficient)
    for k in mono.indices:
        if not 0 <= k < limit:
            raise IndexError(f"Majorana index {k} outside [0, {limit})")
        bx, bz, sign = bits[k]
        phase += product_phase(x, z, bx, bz)
        x ^= bx
        z ^= bz
        coeff *= sign
    coeff *= (1, 1j, -1, -1j)[phase % 4]
    return coeff, PauliString(width, x, z)


def map_monomials(tree: MappingTree, monos: Iterable[MajoranaMonomial], width: int | None = None) -> PauliSum:
    width = tree.width if width is None else width
    return PauliSum(width, [map_monomial(tree, m, width) for m in monos])


def map_ansatz(tree: MappingTree, ansatz: FermionicAnsatz, width: int | None = None) -> list[tuple[float, PauliSum]]:
    """Map every generator to an anti-Hermitian qubit :class:`PauliSum`."""
    if ansatz.n_modes != tree.n_modes:
        raise ValueError(f"ansatz has {ansatz.n_modes} modes, mapping has {tree.n_modes}")
    width = tree.width if width is None else width
    out = []
    for g in ansatz.generators:
        mapped = map_monomials(tree, expand_generator(g, ansatz.n_modes), width)
        if not mapped.is_antihermitian():
            raise PairingError(f"mapped generator {g} is not anti-Hermitian")
        out.append((g.theta, mapped))
    return out


# ----------------------------------------------------------- occupation encoding


def number_operator_strings(tree: MappingTree) -> list[tuple[int, int]]:
    """``(sign, z_mask)`` with ``i m[2j] m[2j+1] -> sign * Z_{mask}`` for each mode j."""
    bits = majorana_bits(tree)
    out = []
    for j in range(tree.n_modes):
        ax, az, sa = bits[2 * j]
        bx, bz, sb = bits[2 * j + 1]
        x, z = ax ^ bx, az ^ bz
        if x:
            raise PairingError(f"mode {j} pair does not multiply to a Z-type string")
        phase = (1 + product_phase(ax, az, bx, bz)) % 4
        value = (1, 1j, -1, -1j)[phase] * sa * sb
        if value.imag != 0:
            raise PairingError(f"mode {j} number operator is not Hermitian")
        out.append((int(value.real), z))
    return out


def _gf2_solve(rows: list[int], rhs: list[int], n_cols: int) -> list[int]:
    """Solve ``A x = b`` over GF(2); rows are column bitmasks. Raises on singular systems."""
    n = len(rows)
    aug = [rows[i] | (rhs[i] << n_cols) for i in range(n)]
    pivot_cols = []
    r = 0
    for col in range(n_cols):
        sel = next((i for i in range(r, n) if (aug[i] >> col) & 1), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        for i in range(n):
            if i != r and (aug[i] >> col) & 1:
                aug[i] ^= aug[r]
        pivot_cols.append(col)
        r += 1
    if r != n or len(pivot_cols) != n_cols:
        raise PairingError("occupation matrix is singular over GF(2)")
    x = [0] * n_cols
    for i, col in enumerate(pivot_cols):
        x[col] = (aug[i] >> n_cols) & 1
    return x


def occupation_matrix(tree: MappingTree) -> tuple[list[int], np.ndarray]:
    """Used qubits (sorted) and the 0/1 matrix whose row j marks the Z-support of mode j."""
    qubits = tree.qubits
    d = np.zeros((tree.n_modes, len(qubits)), dtype=np.uint8)
    for j, (_, mask) in enumerate(number_operator_strings(tree)):
        for c, q in enumerate(qubits):
            d[j, c] = (mask >> q) & 1
    return qubits, d


def occupation_to_bitstring(tree: MappingTree, occupations: Sequence[int]) -> dict[int, int]:
    """Computational-basis bits (keyed by qubit) encoding a Fock basis state."""
    if len(occupations) != tree.n_modes:
        raise ValueError("occupation list length must equal n_modes")
    qubits = tree.qubits
    col = {q: i for i, q in enumerate(qubits)}
    rows = []
    for j, (sign, mask) in enumerate(number_operator_strings(tree)):
        if sign != -1:
            raise PairingError(f"mode {j} has number-operator sign +1; product preservation broken")
        row = 0
        for q in qubits:
            if (mask >> q) & 1:
                row |= 1 << col[q]
        rows.append(row)
    sol = _gf2_solve(rows, [int(b) for b in occupations], len(qubits))
    return {q: sol[i] for i, q in enumerate(qubits)}


def braid_variant(tree: MappingTree, qubits: Iterable[int] | None = None) -> MappingTree:
    """Copy of ``tree`` with the braid flag toggled on ``qubits`` (all nodes by default)."""
    flip = set(tree.qubits if qubits is None else qubits)
    nodes = {
        q: Node(q, nd.mode, ("-" if nd.braid == "+" else "+") if q in flip else nd.braid, nd.children)
        for q, nd in tree.nodes.items()
    }
    return MappingTree(tree.root, nodes)
