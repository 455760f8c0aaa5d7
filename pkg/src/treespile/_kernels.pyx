# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Steiner kernels. Semantics match :mod:`treespile._kernels_py` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def bfs_all_pairs(int n, const int[::1] indptr, const int[::1] indices):
    cdef cnp.ndarray[cnp.int32_t, ndim=2] dist_arr = np.full((n, n), -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] next_arr = np.full((n, n), -1, dtype=np.int32)
    cdef int[:, ::1] dist = dist_arr
    cdef int[:, ::1] nexthop = next_arr
    cdef int[::1] queue = np.empty(max(n, 1), dtype=np.int32)
    cdef int s, t, v, w, k, head, tail, want
    for s in range(n):
        dist[s, s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[s, w] < 0:
                    dist[s, w] = dist[s, v] + 1
                    queue[tail] = w
                    tail += 1
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
    return dist_arr, next_arr


cdef int _label_components(list terminals, char[::1] member, int[::1] label,
                           const int[::1] indptr, const int[::1] indices, int[::1] stack):
    cdef int ncomp = 0
    cdef int t, v, w, k, top
    for t in terminals:
        if label[t] >= 0:
            continue
        label[t] = ncomp
        stack[0] = t
        top = 1
        while top > 0:
            top -= 1
            v = stack[top]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if member[w] and label[w] < 0:
                    label[w] = ncomp
                    stack[top] = w
                    top += 1
        ncomp += 1
    return ncomp


cdef tuple _spanning_tree(list vertices, int n, const int[::1] indptr, const int[::1] indices):
    cdef char[::1] member = np.zeros(n, dtype=np.int8)
    cdef char[::1] seen = np.zeros(n, dtype=np.int8)
    cdef int[::1] queue = np.empty(len(vertices), dtype=np.int32)
    cdef int v, w, k, head = 0, tail = 1, start
    for v in vertices:
        member[v] = 1
    start = min(vertices)
    queue[0] = start
    seen[start] = 1
    edges = []
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if member[w] and not seen[w]:
                seen[w] = 1
                edges.append((v, w) if v < w else (w, v))
                queue[tail] = w
                tail += 1
    out = sorted([queue[k] for k in range(tail)])
    return out, edges


cdef list _walk(int a, int b, const int[:, ::1] nexthop):
    path = [a]
    while a != b:
        a = nexthop[a, b]
        path.append(a)
    return path


def pptt_steiner(terminals, int n, const int[::1] indptr, const int[::1] indices,
                 const int[:, ::1] dist, const int[:, ::1] nexthop):
    cdef list terms = sorted(set([int(t) for t in terminals]))
    cdef char[::1] member = np.zeros(n, dtype=np.int8)
    cdef int[::1] label = np.full(n, -1, dtype=np.int32)
    cdef int[::1] stack = np.empty(n, dtype=np.int32)
    cdef int t, v, w, k, a, b, d, ncomp, ba = -1, bb = -1, bd = -1, lo, hi, blo = -1, bhi = -1
    cdef int found = -1, ntouched
    for t in terms:
        member[t] = 1
    ncomp = _label_components(terms, member, label, indptr, indices, stack)
    if ncomp == 1:
        verts = terms
    elif ncomp == 2:
        for a in terms:
            if label[a] != 0:
                continue
            for b in terms:
                if label[b] != 1:
                    continue
                d = dist[a, b]
                if d < 0:
                    continue
                lo = a if a < b else b
                hi = b if a < b else a
                if bd < 0 or d < bd or (d == bd and (lo < blo or (lo == blo and hi < bhi))):
                    bd = d
                    blo = lo
                    bhi = hi
        if bd < 0:
            return None
        verts = sorted(set(terms) | set(_walk(blo, bhi, nexthop)))
    else:
        seen_comp = np.zeros(ncomp, dtype=np.int8)
        for v in range(n):
            if member[v]:
                continue
            seen_comp[:] = 0
            ntouched = 0
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if member[w] and not seen_comp[label[w]]:
                    seen_comp[label[w]] = 1
                    ntouched += 1
            if ntouched == ncomp:
                found = v
                break
        if found < 0:
            return None
        verts = terms + [found]
    return _spanning_tree(verts, n, indptr, indices)


def kou_steiner(terminals, int n, const int[::1] indptr, const int[::1] indices,
                const int[:, ::1] dist, const int[:, ::1] nexthop):
    cdef list terms = sorted(set([int(t) for t in terminals]))
    cdef int m = len(terms)
    if m == 1:
        return terms, []
    cdef char[::1] member = np.zeros(n, dtype=np.int8)
    cdef int[::1] label = np.full(n, -1, dtype=np.int32)
    cdef int[::1] stack = np.empty(n, dtype=np.int32)
    cdef int i, j, t, u, d, pick, ncomp
    for t in terms:
        member[t] = 1
    ncomp = _label_components(terms, member, label, indptr, indices, stack)
    if ncomp == 1:
        return _spanning_tree(terms, n, indptr, indices)
    cdef int[::1] best_d = np.empty(m, dtype=np.int32)
    cdef int[::1] best_src = np.empty(m, dtype=np.int32)
    cdef char[::1] done = np.zeros(m, dtype=np.int8)
    union = set(terms)
    done[0] = 1
    for i in range(1, m):
        best_d[i] = dist[terms[0], terms[i]]
        best_src[i] = terms[0]
    for _ in range(m - 1):
        pick = -1
        for i in range(1, m):
            if done[i]:
                continue
            if pick < 0 or best_d[i] < best_d[pick]:
                pick = i
        done[pick] = 1
        t = terms[pick]
        union.update(_walk(best_src[pick], t, nexthop))
        for i in range(1, m):
            if done[i]:
                continue
            u = terms[i]
            d = dist[t, u]
            if d < best_d[i] or (d == best_d[i] and t < best_src[i]):
                best_d[i] = d
                best_src[i] = t
    verts, edges = _spanning_tree(sorted(union), n, indptr, indices)
    return _prune(verts, edges, set(terms))


cdef tuple _prune(list verts, list edges, set terminals):
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
    kept_edges = sorted([(a, b) for a, b in edges if a in adj and b in adj])
    return kept, kept_edges
