"""Pure-Python Steiner kernels; the fallback for :mod:`treespile._kernels`.

Graphs arrive in CSR form (``indptr``, ``indices``) with neighbour lists sorted
ascending. ``dist[s, t]`` is the hop distance (-1 when unreachable) and
``nexthop[s, t]`` the lowest-index neighbour of ``s`` on a shortest path to ``t``.
Every function returns ``(vertices, edges)`` with vertices sorted and edges as
``(a, b)`` pairs, ``a < b``.
"""

from collections import deque

import numpy as np


def bfs_all_pairs(n, indptr, indices):
    dist = np.full((n, n), -1, dtype=np.int32)
    nexthop = np.full((n, n), -1, dtype=np.int32)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if row[w] < 0:
                    row[w] = row[v] + 1
                    queue.append(w)
    for s in range(n):
        nexthop[s, s] = s
        for t in range(n):
            if t == s or dist[s, t] < 0:
                continue
            want = dist[s, t] - 1
            for k in range(indptr[s], indptr[s + 1]):
                w = indices[k]
                if dist[w, t] == want:
                    nexthop[s, t] = w
                    break
    return dist, nexthop


def _components(terminals, member, indptr, indices):
    label = {}
    comps = []
    for t in terminals:
        if t in label:
            continue
        cid = len(comps)
        comp = [t]
        label[t] = cid
        queue = [t]
        while queue:
            v = queue.pop()
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if member[w] and w not in label:
                    label[w] = cid
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    return comps, label


def _spanning_tree(vertices, indptr, indices, n):
    member = np.zeros(n, dtype=bool)
    member[list(vertices)] = True
    start = min(vertices)
    seen = {start}
    edges = []
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if member[w] and w not in seen:
                seen.add(w)
                edges.append((v, w) if v < w else (w, v))
                queue.append(w)
    return sorted(seen), edges


def _walk(a, b, nexthop):
    path = [a]
    while a != b:
        a = nexthop[a, b]
        path.append(int(a))
    return path


def pptt_steiner(terminals, n, indptr, indices, dist, nexthop):
    """Exact Steiner tree for terminal sets with at most two induced components
    or a single repairing vertex. Returns ``None`` outside those cases."""
    terminals = sorted(set(int(t) for t in terminals))
    member = np.zeros(n, dtype=bool)
    member[terminals] = True
    comps, label = _components(terminals, member, indptr, indices)
    if len(comps) == 1:
        verts = terminals
    elif len(comps) == 2:
        best = None
        for a in comps[0]:
            for b in comps[1]:
                d = dist[a, b]
                if d < 0:
                    continue
                key = (d, min(a, b), max(a, b))
                if best is None or key < best:
                    best = key
        if best is None:
            return None
        _, a, b = best
        verts = sorted(set(terminals) | set(_walk(a, b, nexthop)))
    else:
        verts = None
        ncomp = len(comps)
        for v in range(n):
            if member[v]:
                continue
            touched = set()
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if member[w]:
                    touched.add(label[w])
            if len(touched) == ncomp:
                verts = terminals + [v]
                break
        if verts is None:
            return None
    return _spanning_tree(verts, indptr, indices, n)


def kou_steiner(terminals, n, indptr, indices, dist, nexthop):
    """Metric-closure MST heuristic (2-approximation) with non-terminal leaves pruned."""
    terminals = sorted(set(int(t) for t in terminals))
    if len(terminals) == 1:
        return terminals, []
    member = np.zeros(n, dtype=bool)
    member[terminals] = True
    comps, _ = _components(terminals, member, indptr, indices)
    if len(comps) == 1:
        return _spanning_tree(terminals, indptr, indices, n)
    # Prim over the metric closure restricted to terminals
    in_tree = {terminals[0]}
    union = set(terminals)
    best = {t: (int(dist[terminals[0], t]), terminals[0]) for t in terminals[1:]}
    while best:
        t = min(best, key=lambda u: (best[u][0], u))
        _, src = best.pop(t)
        union.update(_walk(src, t, nexthop))
        in_tree.add(t)
        for u in best:
            d = int(dist[t, u])
            if (d, t) < best[u]:
                best[u] = (d, t)
    verts, edges = _spanning_tree(sorted(union), indptr, indices, n)
    return _prune(verts, edges, set(terminals))


def _prune(verts, edges, terminals):
    adj = {v: set() for v in verts}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    stack = [v for v in verts if len(adj[v]) <= 1 and v not in terminals]
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1 and w not in terminals:
                stack.append(w)
    kept = sorted(adj)
    kept_edges = sorted((a, b) for a, b in edges if a in adj and b in adj)
    return kept, kept_edges
