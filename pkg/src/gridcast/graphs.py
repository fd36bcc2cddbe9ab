"""CSR digraph construction shared by the routing algorithms."""

from dataclasses import dataclass

import numpy as np


@dataclass
class Csr:
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray


def build_csr(n, edges) -> Csr:
    """Build a CSR digraph from (u, v, w) triples, neighbors ascending."""
    edges = sorted(edges)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(len(edges), dtype=np.int64)
    weights = np.empty(len(edges), dtype=np.float64)
    for i, (u, v, w) in enumerate(edges):
        indptr[u + 1] += 1
        indices[i] = v
        weights[i] = w
    np.cumsum(indptr, out=indptr)
    return Csr(n=n, indptr=indptr, indices=indices, weights=weights)


def weighted_csr(topology, values, status=None, nodes=None, reverse=False) -> Csr:
    """CSR over the topology's up links under a directed weight map.

    values: dict (u, v) -> weight for both orientations of each link.
    status: optional up/down map keyed by (a, b); down links are dropped.
    nodes: optional node-id filter; an edge needs both endpoints inside.
    reverse: build the edge-reversed graph (weights follow the original
    orientation, i.e. the reversed edge (v, u) carries w(u -> v)).
    """
    edges = []
    for link in topology.links:
        if status is not None and not status[link.key()]:
            continue
        if nodes is not None and (link.a not in nodes or link.b not in nodes):
            continue
        for u, v in ((link.a, link.b), (link.b, link.a)):
            w = values[(u, v)]
            edges.append((v, u, w) if reverse else (u, v, w))
    return Csr(n=topology.n, **_csr_arrays(topology.n, edges))


def hop_csr(topology, status=None, nodes=None) -> Csr:
    """Unweighted CSR (unit weights) over the topology's up links."""
    edges = []
    for link in topology.links:
        if status is not None and not status[link.key()]:
            continue
        if nodes is not None and (link.a not in nodes or link.b not in nodes):
            continue
        edges.append((link.a, link.b, 1.0))
        edges.append((link.b, link.a, 1.0))
    return Csr(n=topology.n, **_csr_arrays(topology.n, edges))


def _csr_arrays(n, edges):
    edges.sort()
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(len(edges), dtype=np.int64)
    weights = np.empty(len(edges), dtype=np.float64)
    for i, (u, v, w) in enumerate(edges):
        indptr[u + 1] += 1
        indices[i] = v
        weights[i] = w
    np.cumsum(indptr, out=indptr)
    return {"indptr": indptr, "indices": indices, "weights": weights}
