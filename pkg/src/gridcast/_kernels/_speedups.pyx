# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled graph kernels.

Semantics mirror gridcast._kernels.pure exactly: the queue pops by
(priority, node id), relaxations are strict, and early exit masks
unsettled nodes. Parity is enforced by tests/test_kernels.py.
"""

import numpy as np


cdef inline bint _before(double f1, long n1, double f2, long n2) noexcept:
    return f1 < f2 or (f1 == f2 and n1 < n2)


cdef inline void _heap_swap(double[::1] hf, long[::1] hn, double[::1] hg,
                            long i, long j) noexcept:
    cdef double tf = hf[i]
    cdef long tn = hn[i]
    cdef double tg = hg[i]
    hf[i] = hf[j]
    hn[i] = hn[j]
    hg[i] = hg[j]
    hf[j] = tf
    hn[j] = tn
    hg[j] = tg


cdef inline void _heap_push(double[::1] hf, long[::1] hn, double[::1] hg,
                            long* size, double f, long node, double g) noexcept:
    cdef long i = size[0]
    cdef long parent
    hf[i] = f
    hn[i] = node
    hg[i] = g
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _before(hf[i], hn[i], hf[parent], hn[parent]):
            _heap_swap(hf, hn, hg, i, parent)
            i = parent
        else:
            break


cdef inline void _heap_pop(double[::1] hf, long[::1] hn, double[::1] hg,
                           long* size) noexcept:
    # Caller reads the root before popping; this removes it.
    cdef long last = size[0] - 1
    cdef long i = 0, child
    hf[0] = hf[last]
    hn[0] = hn[last]
    hg[0] = hg[last]
    size[0] = last
    while True:
        child = 2 * i + 1
        if child >= last:
            break
        if child + 1 < last and _before(hf[child + 1], hn[child + 1],
                                        hf[child], hn[child]):
            child += 1
        if _before(hf[child], hn[child], hf[i], hn[i]):
            _heap_swap(hf, hn, hg, i, child)
            i = child
        else:
            break


def dijkstra(indptr, indices, weights, long source, heur=None, long target=-1):
    """See gridcast._kernels.pure.dijkstra."""
    cdef long[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef long n = ip.shape[0] - 1
    cdef long m = idx.shape[0]

    cdef bint use_h = heur is not None
    cdef double[::1] h
    if use_h:
        h = np.ascontiguousarray(heur, dtype=np.float64)
    else:
        h = np.zeros(1, dtype=np.float64)

    dist_arr = np.full(n, np.inf, dtype=np.float64)
    parent_arr = np.full(n, -1, dtype=np.int64)
    cdef double[::1] dist = dist_arr
    cdef long[::1] parent = parent_arr
    cdef unsigned char[::1] settled = np.zeros(n, dtype=np.uint8)

    cdef double[::1] hf = np.empty(m + n + 2, dtype=np.float64)
    cdef long[::1] hn = np.empty(m + n + 2, dtype=np.int64)
    cdef double[::1] hg = np.empty(m + n + 2, dtype=np.float64)
    cdef long size = 0

    cdef long u, v, e
    cdef double g, ng, f

    dist[source] = 0.0
    _heap_push(hf, hn, hg, &size, h[source] if use_h else 0.0, source, 0.0)
    while size > 0:
        u = hn[0]
        g = hg[0]
        _heap_pop(hf, hn, hg, &size)
        if settled[u] or g > dist[u]:
            continue
        settled[u] = 1
        if u == target:
            break
        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            ng = g + w[e]
            if ng < dist[v]:
                dist[v] = ng
                parent[v] = u
                f = ng + (h[v] if use_h else 0.0)
                _heap_push(hf, hn, hg, &size, f, v, ng)
    if target >= 0:
        for v in range(n):
            if not settled[v]:
                dist[v] = np.inf
                parent[v] = -1
    return dist_arr, parent_arr


def dijkstra_multi(indptr, indices, weights, dist0):
    """See gridcast._kernels.pure.dijkstra_multi."""
    cdef long[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef long n = ip.shape[0] - 1
    cdef long m = idx.shape[0]

    dist_arr = np.array(dist0, dtype=np.float64, copy=True)
    parent_arr = np.full(n, -1, dtype=np.int64)
    cdef double[::1] dist = dist_arr
    cdef long[::1] parent = parent_arr
    cdef unsigned char[::1] settled = np.zeros(n, dtype=np.uint8)

    cdef double[::1] hf = np.empty(m + n + 2, dtype=np.float64)
    cdef long[::1] hn = np.empty(m + n + 2, dtype=np.int64)
    cdef double[::1] hg = np.empty(m + n + 2, dtype=np.float64)
    cdef long size = 0

    cdef long u, v, e
    cdef double g, ng
    cdef double INF = np.inf

    for v in range(n):
        if dist[v] < INF:
            _heap_push(hf, hn, hg, &size, dist[v], v, dist[v])
    while size > 0:
        u = hn[0]
        g = hg[0]
        _heap_pop(hf, hn, hg, &size)
        if settled[u] or g > dist[u]:
            continue
        settled[u] = 1
        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            ng = g + w[e]
            if ng < dist[v]:
                dist[v] = ng
                parent[v] = u
                _heap_push(hf, hn, hg, &size, ng, v, ng)
    return dist_arr, parent_arr


def bfs_hops(indptr, indices, long source):
    """See gridcast._kernels.pure.bfs_hops."""
    cdef long[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef long n = ip.shape[0] - 1

    hops_arr = np.full(n, -1, dtype=np.int64)
    cdef long[::1] hops = hops_arr
    cdef long[::1] queue = np.empty(n, dtype=np.int64)
    cdef long head = 0, tail = 0
    cdef long u, v, e

    hops[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            if hops[v] < 0:
                hops[v] = hops[u] + 1
                queue[tail] = v
                tail += 1
    return hops_arr
