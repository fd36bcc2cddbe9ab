"""Geographic core-based tree.

The core is the wireless node with the smallest cumulative distance to
the group; delivery runs source -> core -> member over a fixed shared
shortest-path tree. The tree deliberately ignores link up/down state:
that blindness to churn is the measured weakness of this scheme.
"""

from dataclasses import dataclass

from . import _kernels
from .geometry import cumulative_distance
from .graphs import weighted_csr
from .steiner import EdgeWeights, MulticastTree, shortest_path
from .topology import NodeKind, Topology

INF = float("inf")


@dataclass
class CoreSelection:
    core: int
    shared_tree: MulticastTree
    members: frozenset[int]


def select_core(topology: Topology, members) -> int:
    """Wireless node minimizing cumulative distance to the members."""
    member_pos = [topology.nodes[m].pos for m in sorted(set(members))]
    best = None
    for node in topology.nodes:
        if node.kind is not NodeKind.WIRELESS:
            continue
        cd = cumulative_distance(node.pos, member_pos)
        if best is None or cd < best[0]:
            best = (cd, node.id)
    if best is None:
        raise ValueError("no wireless nodes")
    return best[1]


def build_shared_tree(topology: Topology, weights: EdgeWeights, core: int,
                      members) -> MulticastTree:
    """Shortest-path tree from the core to every member, pruned.

    Fixed per (topology, members): link churn is intentionally not
    consulted, so paths can cross links that are currently down.
    """
    csr = weighted_csr(topology, weights.values)
    dist, parent = _kernels.dijkstra(csr.indptr, csr.indices, csr.weights, core)
    tree_parent = {core: None}
    for m in sorted(set(members)):
        if not dist[m] < INF:
            raise ValueError("member unreachable")
        v = m
        chain = []
        while v != core and v not in tree_parent:
            chain.append(v)
            v = int(parent[v])
        for u in reversed(chain):
            tree_parent[u] = int(parent[u])
    return MulticastTree(root=core, parent=tree_parent)


def make_core_selection(topology: Topology, weights: EdgeWeights, members) -> CoreSelection:
    members = frozenset(members)
    core = select_core(topology, members)
    tree = build_shared_tree(topology, weights, core, members)
    return CoreSelection(core=core, shared_tree=tree, members=members)


def gcbt_deliver(topology: Topology, weights: EdgeWeights, source: int,
                 selection: CoreSelection) -> dict[int, float]:
    """Per-member delay: source-to-core path plus tree path to the member."""
    _, to_core = shortest_path(topology, weights, source, selection.core)
    return {m: to_core + selection.shared_tree.path_weight(m, weights)
            for m in sorted(selection.members)}
