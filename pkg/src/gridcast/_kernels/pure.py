"""Pure-Python graph kernels.

Reference twin of gridcast._kernels._speedups. Both backends operate on
CSR digraphs (indptr/indices/weights arrays with neighbor ids ascending
per row) and must produce bit-identical outputs; tests/test_kernels.py
checks the parity.
"""

import heapq

import numpy as np

INF = float("inf")


def dijkstra(indptr, indices, weights, source, heur=None, target=-1):
    """Single-source shortest paths; A* when a heuristic array is given.

    heur[v] must be an admissible, consistent lower bound on the
    remaining distance to `target`. With target >= 0 the search stops
    once the target is settled and every unsettled node reports
    dist=inf, parent=-1. Ties in the queue break on lowest node id.
    """
    n = len(indptr) - 1
    ip = indptr.tolist()
    idx = indices.tolist()
    wts = weights.tolist()
    h = heur.tolist() if heur is not None else None

    dist = [INF] * n
    parent = [-1] * n
    settled = [False] * n
    dist[source] = 0.0
    heap = [((h[source] if h is not None else 0.0), source, 0.0)]
    while heap:
        _, u, g = heapq.heappop(heap)
        if settled[u] or g > dist[u]:
            continue
        settled[u] = True
        if u == target:
            break
        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            ng = g + wts[e]
            if ng < dist[v]:
                dist[v] = ng
                parent[v] = u
                f = ng + (h[v] if h is not None else 0.0)
                heapq.heappush(heap, (f, v, ng))
    if target >= 0:
        for v in range(n):
            if not settled[v]:
                dist[v] = INF
                parent[v] = -1
    return np.array(dist, dtype=np.float64), np.array(parent, dtype=np.int64)


def dijkstra_multi(indptr, indices, weights, dist0):
    """Closes an initial distance array under shortest-path relaxation.

    Every node with a finite dist0 acts as a seed. parent[v] is -1 where
    the initial value survived, else the neighbor that improved v.
    """
    n = len(indptr) - 1
    ip = indptr.tolist()
    idx = indices.tolist()
    wts = weights.tolist()

    dist = [float(d) for d in dist0]
    parent = [-1] * n
    settled = [False] * n
    heap = [(dist[v], v) for v in range(n) if dist[v] < INF]
    heapq.heapify(heap)
    while heap:
        g, u = heapq.heappop(heap)
        if settled[u] or g > dist[u]:
            continue
        settled[u] = True
        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            ng = g + wts[e]
            if ng < dist[v]:
                dist[v] = ng
                parent[v] = u
                heapq.heappush(heap, (ng, v))
    return np.array(dist, dtype=np.float64), np.array(parent, dtype=np.int64)


def bfs_hops(indptr, indices, source):
    """Hop distance from source over a CSR digraph; -1 if unreachable."""
    n = len(indptr) - 1
    ip = indptr.tolist()
    idx = indices.tolist()

    hops = [-1] * n
    hops[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for e in range(ip[u], ip[u + 1]):
                v = idx[e]
                if hops[v] < 0:
                    hops[v] = d
                    nxt.append(v)
        frontier = nxt
    return np.array(hops, dtype=np.int64)
