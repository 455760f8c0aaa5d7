"""Local transformations of a mapping tree used by the annealer and the reachability study."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .hardware import HardwareGraph
from .mapping import MappingTree, Node

MOVE_KINDS = ("leaf", "root", "shuffle", "swap", "braid")
SEARCH_MODES = ("free", "cp", "ncp", "ms")
_PERMS = tuple(itertools.permutations(range(3)))


class InvalidMove(ValueError):
    """The requested move would break a tree invariant."""


class NoLegalMove(RuntimeError):
    pass


def enabled_kinds(mode: str, enable_braiding: bool = True) -> tuple[str, ...]:
    if mode not in SEARCH_MODES:
        raise ValueError(f"unknown search mode {mode!r}")
    if mode == "ms":
        return ("swap",)
    kinds = MOVE_KINDS if enable_braiding else MOVE_KINDS[:-1]
    return kinds


# ------------------------------------------------------------------------ moves


def leaf_move(tree: MappingTree, v: int, w: int, slot: int, new_qubit: int | None = None,
              graph: HardwareGraph | None = None) -> MappingTree:
    """Detach leaf ``v`` and hang it on ``slot`` of ``w``, optionally on a new physical qubit.

    With ``graph`` given the new qubit must be a device neighbour of ``w``.
    """
    nodes = tree.nodes
    if v not in nodes or w not in nodes:
        raise InvalidMove("unknown node")
    if v == tree.root or nodes[v].out_degree:
        raise InvalidMove(f"node {v} is not a movable leaf")
    parent, pslot = tree.parents[v]
    if w == v:
        raise InvalidMove("a leaf cannot hang on itself")
    q = v if new_qubit is None else new_qubit
    if w == parent and slot == pslot and q == v:
        raise InvalidMove("move leaves the tree unchanged")
    if nodes[w].children[slot] is not None and not (w == parent and slot == pslot):
        raise InvalidMove(f"slot {slot} of node {w} is occupied")
    if q != v and q in nodes:
        raise InvalidMove(f"qubit {q} already carries a node")
    if graph is not None and (q >= graph.n or not graph.has_edge(w, q)):
        raise InvalidMove(f"qubit {q} is not adjacent to {w} on the device")
    old = nodes[v]
    pch = list(nodes[parent].children)
    pch[pslot] = None
    updates = {parent: Node(parent, nodes[parent].mode, nodes[parent].braid, tuple(pch))}
    wn = updates.get(w, nodes[w])
    wch = list(wn.children)
    wch[slot] = q
    updates[w] = Node(w, wn.mode, wn.braid, tuple(wch))
    updates[q] = Node(q, old.mode, old.braid, (None, None, None))
    drop = (v,) if q != v else ()
    return tree.replace_nodes(updates, drop=drop)


def root_change(tree: MappingTree, v: int) -> MappingTree:
    """Re-root at ``v`` reversing parent/child links along the old root path."""
    nodes = tree.nodes
    if v not in nodes or v == tree.root:
        raise InvalidMove("new root must be a non-root node")
    if nodes[v].out_degree > 2:
        raise InvalidMove(f"node {v} has no free slot for its old parent")
    parents = tree.parents
    path = [v]
    while path[-1] != tree.root:
        path.append(parents[path[-1]][0])
    path.reverse()  # root ... v
    children = {q: list(nodes[q].children) for q in path}
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        slot = parents[b][1]
        children[a][slot] = None
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        if i + 1 < len(path) - 1:
            # b's slot towards its old child is now free; the old parent takes it
            slot = parents[path[i + 2]][1]
        else:
            slot = children[b].index(None)
        children[b][slot] = a
    updates = {q: Node(q, nodes[q].mode, nodes[q].braid, tuple(children[q])) for q in path}
    return tree.replace_nodes(updates, root=v)


def pauli_shuffle(tree: MappingTree, q: int, perm: tuple[int, int, int]) -> MappingTree:
    """Relabel the slots of node ``q``: the child in slot ``s`` moves to slot ``perm[s]``."""
    nd = tree.node(q)
    if nd.out_degree == 0:
        raise InvalidMove("shuffling a node without children changes nothing")
    ch = [None, None, None]
    for s, c in enumerate(nd.children):
        ch[perm[s]] = c
    if tuple(ch) == nd.children:
        raise InvalidMove("permutation leaves the children unchanged")
    return tree.replace_nodes({q: Node(q, nd.mode, nd.braid, tuple(ch))})


def mode_swap(tree: MappingTree, a: int, b: int) -> MappingTree:
    if a == b:
        raise InvalidMove("mode swap needs two distinct nodes")
    na, nb = tree.node(a), tree.node(b)
    return tree.replace_nodes({
        a: Node(a, nb.mode, na.braid, na.children),
        b: Node(b, na.mode, nb.braid, nb.children),
    })


def braid_flip(tree: MappingTree, q: int) -> MappingTree:
    nd = tree.node(q)
    return tree.replace_nodes({q: Node(q, nd.mode, "-" if nd.braid == "+" else "+", nd.children)})


# ------------------------------------------------------------------ random draws


def _pick(rng: np.random.Generator, seq):
    return seq[int(rng.integers(len(seq)))]


def draw_move(tree: MappingTree, graph: HardwareGraph | None, mode: str, rng: np.random.Generator,
              enable_braiding: bool = True) -> tuple[str, MappingTree | None]:
    """One uniform draw of a move kind and its arguments; ``None`` when the draw is illegal."""
    kind = _pick(rng, enabled_kinds(mode, enable_braiding))
    qubits = tree.qubits
    try:
        if kind == "leaf":
            leaves = [q for q in tree.leaves() if q != tree.root]
            if not leaves:
                return kind, None
            v = _pick(rng, leaves)
            w = _pick(rng, qubits)
            slot = int(rng.integers(3))
            if mode == "cp":
                if graph is None:
                    raise ValueError("cp moves need a hardware graph")
                new_q = _pick(rng, graph.neighbors(w))
                return kind, leaf_move(tree, v, w, slot, new_q, graph)
            return kind, leaf_move(tree, v, w, slot)
        if kind == "root":
            return kind, root_change(tree, _pick(rng, qubits))
        if kind == "shuffle":
            return kind, pauli_shuffle(tree, _pick(rng, qubits), _PERMS[int(rng.integers(len(_PERMS)))])
        if kind == "swap":
            a, b = (qubits[int(i)] for i in rng.choice(len(qubits), size=2, replace=False)) if len(qubits) > 1 else (qubits[0], qubits[0])
            return kind, mode_swap(tree, a, b)
        return kind, braid_flip(tree, _pick(rng, qubits))
    except InvalidMove:
        return kind, None


def propose_move(tree: MappingTree, graph: HardwareGraph | None, mode: str, rng: np.random.Generator,
                 enable_braiding: bool = True, max_tries: int = 1000) -> tuple[str, MappingTree]:
    """Draw moves until one is legal."""
    for _ in range(max_tries):
        kind, new = draw_move(tree, graph, mode, rng, enable_braiding)
        if new is not None:
            return kind, new
    raise NoLegalMove(f"no legal move found in {max_tries} draws")


# ------------------------------------------------------------------ enumeration


def neighbors(tree: MappingTree, graph: HardwareGraph, enable_braiding: bool = True) -> Iterator[MappingTree]:
    """Every mapping one connectivity-preserving move away from ``tree``."""
    qubits = tree.qubits
    for v in tree.leaves():
        if v == tree.root:
            continue
        for w in qubits:
            for slot in range(3):
                for q in graph.neighbors(w):
                    try:
                        yield leaf_move(tree, v, w, slot, q, graph)
                    except InvalidMove:
                        pass
    for v in qubits:
        try:
            yield root_change(tree, v)
        except InvalidMove:
            pass
        for perm in _PERMS:
            try:
                yield pauli_shuffle(tree, v, perm)
            except InvalidMove:
                pass
        if enable_braiding:
            yield braid_flip(tree, v)
    for a, b in itertools.combinations(qubits, 2):
        yield mode_swap(tree, a, b)
