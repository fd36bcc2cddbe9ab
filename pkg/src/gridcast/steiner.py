"""Multicast tree construction: shortest paths, the two-phase metric
closure approximation, its geographic variant, and an exact solver.

The approximation follows the classic five steps: metric closure over
the terminal set, MST of the closure, expansion of the witness paths,
MST of the expansion, then pruning of non-terminal leaves. The exact
solver computes the same optimum the integer program defines, via
dynamic programming over terminal subsets, so approximation quality can
be checked without an external solver.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .geometry import DelayScale, distance
from .graphs import weighted_csr
from .topology import Topology, new_cp_weights

EXACT_TERMINAL_LIMIT = 12

INF = float("inf")


class WeightKind(Enum):
    DELAY = "delay"
    GEO_F = "geo_f"


@dataclass
class EdgeWeights:
    """Directed per-link weights; delay weights are symmetric."""

    kind: WeightKind
    values: dict[tuple[int, int], float]


def delay_weights(topology: Topology) -> EdgeWeights:
    values = {}
    for link in topology.links:
        values[(link.a, link.b)] = link.delay
        values[(link.b, link.a)] = link.delay
    return EdgeWeights(kind=WeightKind.DELAY, values=values)


def hop_weights(topology: Topology) -> EdgeWeights:
    """Unit weight per link: paths minimize hop count."""
    values = {}
    for link in topology.links:
        values[(link.a, link.b)] = 1.0
        values[(link.b, link.a)] = 1.0
    return EdgeWeights(kind=WeightKind.DELAY, values=values)


def geo_weights(topology: Topology, dests, a_coef: float, b_coef: float,
                status=None) -> EdgeWeights:
    """Composite geographic weights for every up link.

    Progress weights are computed once per (topology, destination set);
    delays are min-max scaled onto [0, max progress weight] so the two
    terms are commensurate.
    """
    newcp = new_cp_weights(topology, dests)
    links = [l for l in topology.links if status is None or status[l.key()]]
    if not links:
        raise ValueError("no links")
    delays = [l.delay for l in links]
    top = max(newcp[(l.a, l.b)] for l in links)
    top = max(top, max(newcp[(l.b, l.a)] for l in links))
    scale = DelayScale(lo=min(delays), hi=max(delays), top=top)
    values = {}
    for link in links:
        for u, v in ((link.a, link.b), (link.b, link.a)):
            values[(u, v)] = a_coef * newcp[(u, v)] + b_coef * scale.apply(link.delay)
    return EdgeWeights(kind=WeightKind.GEO_F, values=values)


@dataclass(frozen=True)
class SteinerInstance:
    topology: Topology
    source: int
    terminals: frozenset[int]
    weights: EdgeWeights

    def __post_init__(self):
        if not self.terminals:
            raise ValueError("terminal set is empty")
        if self.source in self.terminals:
            raise ValueError("source must not be a terminal")
        valid = range(self.topology.n)
        if self.source not in valid or any(t not in valid for t in self.terminals):
            raise ValueError("invalid node id")


@dataclass
class MulticastTree:
    """Rooted tree as a parent map plus the directed edge set."""

    root: int
    parent: dict[int, int | None]
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self):
        if not self.edges and len(self.parent) > 1:
            self.edges = {(p, c) for c, p in self.parent.items() if p is not None}

    def nodes(self) -> set[int]:
        return set(self.parent)

    def path_from_root(self, node: int) -> list[int]:
        path = [node]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
            if len(path) > len(self.parent):
                raise ValueError("corrupt tree: parent cycle")
        path.reverse()
        return path

    def path_weight(self, node: int, weights: EdgeWeights) -> float:
        path = self.path_from_root(node)
        return sum(weights.values[(path[i], path[i + 1])] for i in range(len(path) - 1))

    def to_dict(self, cost: float | None = None):
        d = {
            "root": self.root,
            "parents": {str(c): p for c, p in sorted(self.parent.items())},
        }
        if cost is not None:
            d["cost"] = cost
        return d

    @classmethod
    def from_dict(cls, d):
        parent = {int(c): p for c, p in d["parents"].items()}
        return cls(root=d["root"], parent=parent)


def tree_cost(tree: MulticastTree, weights: EdgeWeights) -> float:
    """Total weight of the tree's directed edges."""
    total = 0.0
    for u, v in sorted(tree.edges):
        if (u, v) not in weights.values:
            raise ValueError(f"edge ({u}, {v}) missing from weights")
        total += weights.values[(u, v)]
    return total


def _heuristic_array(topology, weights, goal, status):
    """Admissible A* potential: Euclidean distance scaled so that every
    link weight dominates its scaled length. Only valid for delay
    weights (geographic weights have no geometric lower bound)."""
    if weights.kind is not WeightKind.DELAY:
        raise ValueError("euclidean heuristic requires delay weights")
    links = [l for l in topology.links if status is None or status[l.key()]]
    max_len = max((distance(topology.nodes[l.a].pos, topology.nodes[l.b].pos)
                   for l in links), default=0.0)
    if max_len <= 0.0:
        return np.zeros(topology.n, dtype=np.float64)
    min_w = min(weights.values[(l.a, l.b)] for l in links)
    scale = min_w / max_len
    goal_pos = topology.nodes[goal].pos
    return np.array([distance(n.pos, goal_pos) * scale for n in topology.nodes],
                    dtype=np.float64)


def _lex_walk(topology, weights, status, nodes, dist_to_target, frm, to):
    """Lexicographically smallest optimal node sequence from frm to to,
    given exact distances-to-target. Falls back to the search tree if
    zero-weight edges create ties that dead-end."""
    path = [frm]
    visited = {frm}
    cur = frm
    while cur != to:
        step = None
        for v, li in topology.neighbors[cur]:
            if v in visited or (nodes is not None and v not in nodes):
                continue
            link = topology.links[li]
            if status is not None and not status[link.key()]:
                continue
            w = weights.values.get((cur, v))
            if w is None:
                continue
            if dist_to_target[v] < INF and w + dist_to_target[v] == dist_to_target[cur]:
                step = v
                break
        if step is None:
            return None
        path.append(step)
        visited.add(step)
        cur = step
    return path


def shortest_path(topology: Topology, weights: EdgeWeights, frm: int, to: int,
                  heuristic: str = "zero", status=None):
    """Minimum-weight path over up links; returns (node sequence, weight).

    heuristic: "zero" (uniform cost) or "euclidean" (A*, delay weights
    only). Ties break toward the lexicographically smallest sequence.
    """
    if frm == to:
        return [frm], 0.0
    rev = weighted_csr(topology, weights.values, status=status, reverse=True)
    if heuristic == "euclidean":
        heur = _heuristic_array(topology, weights, frm, status)
        dist, parent = _kernels.dijkstra(rev.indptr, rev.indices, rev.weights,
                                         to, heur=heur, target=frm)
    elif heuristic == "zero":
        dist, parent = _kernels.dijkstra(rev.indptr, rev.indices, rev.weights, to)
    else:
        raise ValueError("heuristic must be 'zero' or 'euclidean'")
    if not dist[frm] < INF:
        raise ValueError("no path")
    path = _lex_walk(topology, weights, status, None, dist, frm, to)
    if path is None:
        # Reversed-search parents point along a forward optimal path.
        path = [frm]
        while path[-1] != to:
            path.append(int(parent[path[-1]]))
    return path, float(dist[frm])


def metric_closure(topology: Topology, weights: EdgeWeights, s_set, status=None,
                   nodes=None):
    """Complete graph over s_set with shortest-path weights and witnesses.

    Returns {(u, v) with u < v: (weight, witness path)} where the
    witness runs in whichever direction is cheaper (ties prefer low to
    high id). Raises if any pair is unreachable. `nodes` optionally
    restricts the search to a node subset.
    """
    terms = sorted(set(s_set))
    if len(terms) < 2:
        raise ValueError("need at least two nodes for a closure")
    rev = weighted_csr(topology, weights.values, status=status, nodes=nodes,
                       reverse=True)
    dist_to = {}
    for t in terms:
        dist_to[t], _ = _kernels.dijkstra(rev.indptr, rev.indices, rev.weights, t)
    closure = {}
    for i, u in enumerate(terms):
        for v in terms[i + 1:]:
            wd_uv = float(dist_to[v][u])
            wd_vu = float(dist_to[u][v])
            if not (wd_uv < INF and wd_vu < INF):
                raise ValueError("disconnected terminal set")
            if wd_uv <= wd_vu:
                witness = _lex_walk(topology, weights, status, nodes, dist_to[v], u, v)
                closure[(u, v)] = (wd_uv, witness)
            else:
                witness = _lex_walk(topology, weights, status, nodes, dist_to[u], v, u)
                closure[(u, v)] = (wd_vu, witness)
    return closure


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _kruskal(nodes, edges):
    """MST edges via Kruskal; edges as (w, a, b) with a < b, ties by id."""
    uf = _UnionFind(nodes)
    mst = []
    for w, a, b in sorted(edges):
        if uf.union(a, b):
            mst.append((a, b))
    return mst


def _orient_and_prune(root, und_edges, keep):
    """Root an undirected edge set and drop non-keep leaves iteratively."""
    adj = {}
    for a, b in und_edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    degree = {u: len(vs) for u, vs in adj.items()}
    alive = set(adj) | {root}
    changed = True
    while changed:
        changed = False
        for u in sorted(alive):
            if u != root and u not in keep and degree.get(u, 0) <= 1:
                alive.discard(u)
                for v in adj.get(u, []):
                    if v in alive:
                        degree[v] -= 1
                degree[u] = 0
                changed = True
    parent = {root: None}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in sorted(adj.get(u, [])):
                if v in alive and v not in parent:
                    parent[v] = u
                    nxt.append(v)
        frontier = sorted(nxt)
    return MulticastTree(root=root, parent=parent)


def kmb(instance: SteinerInstance, status=None, nodes=None) -> MulticastTree:
    """Metric-closure Steiner approximation (factor <= 2 on symmetric
    weights) with deterministic tie-breaking throughout."""
    topo = instance.topology
    terms = sorted({instance.source} | instance.terminals)
    closure = metric_closure(topo, instance.weights, terms, status=status,
                             nodes=nodes)

    closure_edges = [(w, u, v) for (u, v), (w, _) in closure.items()]
    mst1 = _kruskal(terms, closure_edges)

    expansion = set()
    for a, b in mst1:
        _, witness = closure[(a, b) if a < b else (b, a)]
        for i in range(len(witness) - 1):
            u, v = witness[i], witness[i + 1]
            expansion.add((min(u, v), max(u, v)))

    vals = instance.weights.values
    exp_edges = []
    for a, b in sorted(expansion):
        w = min(vals[(a, b)], vals[(b, a)])
        exp_edges.append((w, a, b))
    exp_nodes = sorted({x for e in expansion for x in e} | {instance.source})
    mst2 = _kruskal(exp_nodes, exp_edges)

    return _orient_and_prune(instance.source, mst2, set(terms))


def mkmb(topology: Topology, source: int, dests, a_coef: float = 1.0,
         b_coef: float = 1.0):
    """Geographic variant: build under composite weights, report under delay.

    Returns (tree, cost) where cost is the tree's total delay, so costs
    are comparable with trees built directly under delay weights.
    """
    dest_set = frozenset(dests)
    gw = geo_weights(topology, dest_set, a_coef, b_coef)
    tree = kmb(SteinerInstance(topology=topology, source=source,
                               terminals=dest_set, weights=gw))
    return tree, tree_cost(tree, delay_weights(topology))


def exact_steiner(instance: SteinerInstance, status=None) -> MulticastTree:
    """Minimum-weight tree spanning source plus terminals.

    Dynamic program over terminal subsets (3^t transitions, t+1
    terminals), vectorized over nodes. Assumes symmetric weights; the
    guard keeps the subset space tractable.
    """
    topo = instance.topology
    terms = sorted({instance.source} | instance.terminals)
    if len(terms) > EXACT_TERMINAL_LIMIT:
        raise ValueError("instance too large for exact solver")
    csr = weighted_csr(topo, instance.weights.values, status=status)
    n = topo.n

    t0, rest = terms[0], terms[1:]
    t = len(rest)
    if t == 0:
        return MulticastTree(root=instance.source, parent={instance.source: None})
    full = (1 << t) - 1

    dp = np.full((full + 1, n), INF, dtype=np.float64)
    grow_parent = np.full((full + 1, n), -1, dtype=np.int64)
    split_choice = np.zeros((full + 1, n), dtype=np.int64)
    base_parent = {}

    for i, term in enumerate(rest):
        d, p = _kernels.dijkstra(csr.indptr, csr.indices, csr.weights, term)
        dp[1 << i] = d
        base_parent[1 << i] = p

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        low = mask & (-mask)
        cur = dp[mask]
        sub = (mask - 1) & mask
        while sub:
            if sub & low:
                other = mask ^ sub
                cand = dp[sub] + dp[other]
                better = cand < cur
                if better.any():
                    cur[better] = cand[better]
                    split_choice[mask][better] = sub
            sub = (sub - 1) & mask
        d, p = _kernels.dijkstra_multi(csr.indptr, csr.indices, csr.weights, cur)
        dp[mask] = d
        grow_parent[mask] = p

    if not dp[full][t0] < INF:
        raise ValueError("disconnected terminal set")

    edges = set()

    def collect(mask, v):
        while True:
            if mask & (mask - 1) == 0:
                p = base_parent[mask]
                while p[v] >= 0:
                    u = int(p[v])
                    edges.add((min(u, v), max(u, v)))
                    v = u
                return
            gp = int(grow_parent[mask][v])
            if gp < 0:
                break
            edges.add((min(gp, v), max(gp, v)))
            v = gp
        sub = int(split_choice[mask][v])
        collect(sub, v)
        collect(mask ^ sub, v)

    collect(full, t0)
    return _orient_and_prune(instance.source, edges, set(terms))
