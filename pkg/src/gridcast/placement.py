"""Wireless router placement: hop-bounded minimum set cover.

Every node must end up within `hop_bound` hops of a selected router;
candidate locations are all nodes. Greedy is the classic most-new-
coverage heuristic; exact is a branch-and-bound that is only practical
up to ~25 candidate locations.
"""

import numpy as np
from dataclasses import dataclass

from . import _kernels

EXACT_LOCATION_LIMIT = 25


@dataclass
class PlacementSolution:
    selected_routers: list[int]
    assignment: dict[int, int]
    hop_bound: int


def _hop_matrix(adj):
    n = len(adj)
    indptr = np.zeros(n + 1, dtype=np.int64)
    flat = []
    for u in range(n):
        flat.extend(sorted(adj[u]))
        indptr[u + 1] = len(flat)
    indices = np.array(flat, dtype=np.int64)
    return np.stack([_kernels.bfs_hops(indptr, indices, u) for u in range(n)])


def solve_placement(adj, hop_bound: int, mode: str = "greedy") -> PlacementSolution:
    """Select router locations covering every node within hop_bound hops.

    adj: adjacency lists of the unweighted graph, nodes 0..n-1.
    mode: "greedy" or "exact". Ties always break toward the lowest id.
    """
    if hop_bound < 1:
        raise ValueError("hop bound must be >= 1")
    n = len(adj)
    hops = _hop_matrix(adj)
    within = (hops >= 0) & (hops <= hop_bound)
    cover = [frozenset(np.nonzero(within[r])[0].tolist()) for r in range(n)]

    if any(not within[:, v].any() for v in range(n)):
        raise ValueError("placement infeasible")

    if mode == "greedy":
        selected = _greedy_cover(n, cover)
    elif mode == "exact":
        if n > EXACT_LOCATION_LIMIT:
            raise ValueError(
                f"exact placement supports at most {EXACT_LOCATION_LIMIT} locations")
        selected = _exact_cover(n, cover)
    else:
        raise ValueError("mode must be 'greedy' or 'exact'")

    assignment = {}
    for v in range(n):
        assignment[v] = min(selected, key=lambda r: (hops[r][v] if hops[r][v] >= 0 else n + 1, r))
    return PlacementSolution(selected_routers=sorted(selected),
                             assignment=assignment, hop_bound=hop_bound)


def _greedy_cover(n, cover):
    uncovered = set(range(n))
    selected = []
    while uncovered:
        best = max(range(n), key=lambda r: (len(cover[r] & uncovered), -r))
        gain = len(cover[best] & uncovered)
        if gain == 0:
            raise ValueError("placement infeasible")
        selected.append(best)
        uncovered -= cover[best]
    return selected


def _exact_cover(n, cover):
    """Branch and bound over candidate subsets; returns a minimum cover."""
    covers_of = [sorted(r for r in range(n) if v in cover[r]) for v in range(n)]
    best = _greedy_cover(n, cover)
    max_gain = max(len(c) for c in cover)

    def search(uncovered, chosen):
        nonlocal best
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        # Lower bound: even perfect sets need this many more picks.
        need = (len(uncovered) + max_gain - 1) // max_gain
        if len(chosen) + need >= len(best):
            return
        pivot = min(uncovered, key=lambda v: (len(covers_of[v]), v))
        for r in covers_of[pivot]:
            chosen.append(r)
            search(uncovered - cover[r], chosen)
            chosen.pop()

    search(frozenset(range(n)), [])
    return best
