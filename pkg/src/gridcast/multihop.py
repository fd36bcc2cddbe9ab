"""Multihop geocast protocol: candidate discovery, routing-packet floods
with parent arrays, and the two redundant-delivery plan builders.

A candidate is a wireless node with at least one link into the
destination area (an in-area wireless node is its own candidate). Each
candidate floods a routing packet over the up links between area nodes;
the resulting parent array encodes its delivery tree. The hybrid
builder keeps the two most reliable candidates that cover the whole
area and enrolls every area node in both trees; the multiple builder
lets every area node pick its lowest-depth candidates instead.
"""

import logging
from dataclasses import dataclass, field

from .steiner import MulticastTree, SteinerInstance, delay_weights, kmb
from .topology import DestinationArea, NodeKind, Topology, nodes_in_area

log = logging.getLogger(__name__)

UNSET = -1  # wire value: never reached by the flood
ROOT = -2   # wire value: in-area candidate or attachment point


@dataclass
class ParentArray:
    """Per-candidate array over the area array: -1 unset, -2 root, else
    the id of the flood predecessor."""

    area: tuple[int, ...]
    entries: list[int]
    candidate: int

    def __post_init__(self):
        if len(self.area) != len(self.entries):
            raise ValueError("entries length must match area length")
        allowed = set(self.area) | {self.candidate}
        for e in self.entries:
            if e >= 0 and e not in allowed:
                raise ValueError(f"parent entry {e} references a foreign node")

    def entry_of(self, node: int) -> int:
        return self.entries[self.area.index(node)]


@dataclass
class CandidateInfo:
    id: int
    reliability: float
    parent_array: ParentArray
    depth: dict[int, int]
    full_coverage: bool


@dataclass
class MulticastPlan:
    algorithm: str  # "hybrid" | "multiple" | "hybrid_degenerate"
    selected: list[int]
    area_trees: dict[int, MulticastTree]
    distribution_tree: MulticastTree
    responsibles: dict[int, list[int]]
    delivery_delay: dict[int, float] = field(default_factory=dict)
    area_array: list[int] = field(default_factory=list)
    candidate_count: int = 0
    full_coverage_count: int = 0

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "selected": self.selected,
            "area_trees": {str(c): t.to_dict() for c, t in sorted(self.area_trees.items())},
            "distribution_tree": self.distribution_tree.to_dict(),
            "responsibles": {str(n): r for n, r in sorted(self.responsibles.items())},
            "delivery_delay": {str(n): d for n, d in sorted(self.delivery_delay.items())},
            "area_array": self.area_array,
            "candidate_count": self.candidate_count,
            "full_coverage_count": self.full_coverage_count,
        }


def _link_up(link, status) -> bool:
    return status is None or status[link.key()]


def identify_candidates(topology: Topology, area: DestinationArea) -> list[int]:
    """Wireless nodes with a link into the area, plus in-area wireless
    nodes themselves; link status is irrelevant here."""
    area_set = set(nodes_in_area(topology, area))
    found = []
    for node in topology.nodes:
        if node.kind is not NodeKind.WIRELESS:
            continue
        if node.id in area_set or any(v in area_set for v, _ in topology.neighbors[node.id]):
            found.append(node.id)
    return found


def flood(topology: Topology, area_array, candidate: int, status=None) -> CandidateInfo:
    """BFS flood of one candidate's routing packet over up in-area links.

    Seeds are the candidate itself when it lies inside the area,
    otherwise its in-area neighbors over up links; seeds take the root
    wire value at depth 0. Equal-depth parent ties break to the lowest
    predecessor id.
    """
    area_array = list(area_array)
    area_set = set(area_array)
    node = topology.nodes[candidate]
    in_area = candidate in area_set
    if node.kind is not NodeKind.WIRELESS or not (
            in_area or any(v in area_set for v, _ in topology.neighbors[candidate])):
        raise ValueError(f"node {candidate} is not a candidate for this area")

    entries = {n: UNSET for n in area_array}
    depth = {}
    if in_area:
        seeds = [candidate]
    else:
        seeds = sorted(v for v, li in topology.neighbors[candidate]
                       if v in area_set and _link_up(topology.links[li], status))
    for s in seeds:
        entries[s] = ROOT
        depth[s] = 0

    frontier = seeds
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v, li in topology.neighbors[u]:
                if v in area_set and entries[v] == UNSET and _link_up(topology.links[li], status):
                    entries[v] = u
                    depth[v] = d
                    nxt.append(v)
        frontier = sorted(nxt)

    pa = ParentArray(area=tuple(area_array),
                     entries=[entries[n] for n in area_array],
                     candidate=candidate)
    return CandidateInfo(id=candidate, reliability=node.reliability,
                         parent_array=pa, depth=depth,
                         full_coverage=all(e != UNSET for e in pa.entries))


def build_area_tree(parent_array: ParentArray) -> MulticastTree:
    """Tree rooted at the candidate, as encoded by the parent array.

    Root entries attach straight to the candidate; unset entries are
    left out. Guards against cyclic parents in externally supplied
    arrays (a flood cannot produce one).
    """
    cand = parent_array.candidate
    parent = {cand: None}
    for node, e in zip(parent_array.area, parent_array.entries):
        if e == UNSET or node == cand:
            continue
        parent[node] = cand if e == ROOT else e
    limit = len(parent)
    for node in parent:
        steps = 0
        v = node
        while parent.get(v) is not None:
            v = parent[v]
            steps += 1
            if steps > limit:
                raise ValueError("corrupt parent array")
        if v != cand:
            raise ValueError("corrupt parent array")
    return MulticastTree(root=cand, parent=parent)


def routing_packet(info: CandidateInfo, area: DestinationArea) -> dict:
    """Wire form of one candidate's routing packet (for trace logs)."""
    return {
        "candidate_id": info.id,
        "center_x": area.center.x,
        "center_y": area.center.y,
        "radius": area.radius,
        "area": list(info.parent_array.area),
        "parents": list(info.parent_array.entries),
    }


def _distribution_tree(topology, source, targets) -> MulticastTree:
    """Delay-weighted approximation tree over the wireless backbone."""
    if topology.nodes[source].kind is not NodeKind.WIRELESS:
        raise ValueError("source must be a wireless node")
    terminals = frozenset(t for t in targets if t != source)
    if not terminals:
        return MulticastTree(root=source, parent={source: None})
    instance = SteinerInstance(topology=topology, source=source,
                               terminals=terminals, weights=delay_weights(topology))
    return kmb(instance, nodes=set(topology.wireless_ids()))


def _plan_delivery(plan: MulticastPlan, topology: Topology) -> None:
    plan.delivery_delay = deliver(plan, topology, delay_weights(topology))


def deliver(plan: MulticastPlan, topology: Topology, weights) -> dict[int, float]:
    """First-copy delivery delay per area node (min over responsibles).

    Nodes with no responsible are absent from the result.
    """
    dist_cost = {}
    for cand in plan.selected:
        dist_cost[cand] = plan.distribution_tree.path_weight(cand, weights)
    out = {}
    for node in plan.area_array:
        options = []
        for cand in plan.responsibles.get(node, []):
            tree = plan.area_trees[cand]
            options.append(dist_cost[cand] + tree.path_weight(node, weights))
        if options:
            out[node] = min(options)
    return out


def hybrid_plan(topology: Topology, area: DestinationArea, source: int,
                status=None, responsibles_per_node: int = 2) -> MulticastPlan:
    """Reliability-first plan: the two most reliable full-coverage
    candidates each build a tree over the whole area.

    Falls back to the multiple builder when no candidate covers the
    area alone. A lone full coverer (the only candidate, or the only
    one whose attachments bridge every fragment of the area) yields a
    degenerate one-tree plan and logs a warning.
    """
    area_array = nodes_in_area(topology, area)
    candidates = identify_candidates(topology, area)
    if not candidates:
        raise ValueError("area unreachable")
    infos = [flood(topology, area_array, c, status) for c in candidates]
    full = [i for i in infos if i.full_coverage]
    count = len(full)

    if count == 0:
        return multiple_plan(topology, area, source, status,
                             responsibles_per_node=responsibles_per_node)

    if count == 1:
        if len(candidates) > 1:
            log.warning("single full-coverage candidate among %d candidates",
                        len(candidates))
        info = full[0]
        tree = build_area_tree(info.parent_array)
        plan = MulticastPlan(
            algorithm="hybrid_degenerate",
            selected=[info.id],
            area_trees={info.id: tree},
            distribution_tree=_distribution_tree(topology, source, [info.id]),
            responsibles={n: [info.id] for n in area_array},
            area_array=area_array,
            candidate_count=len(candidates),
            full_coverage_count=count,
        )
        _plan_delivery(plan, topology)
        return plan

    chosen = sorted(full, key=lambda i: (-i.reliability, i.id))[:2]
    selected = [i.id for i in chosen]
    plan = MulticastPlan(
        algorithm="hybrid",
        selected=selected,
        area_trees={i.id: build_area_tree(i.parent_array) for i in chosen},
        distribution_tree=_distribution_tree(topology, source, selected),
        responsibles={n: list(selected) for n in area_array},
        area_array=area_array,
        candidate_count=len(candidates),
        full_coverage_count=count,
    )
    _plan_delivery(plan, topology)
    return plan


def multiple_plan(topology: Topology, area: DestinationArea, source: int,
                  status=None, responsibles_per_node: int = 2) -> MulticastPlan:
    """Depth-first plan: every area node joins the trees of its
    lowest-depth candidates (ties: higher reliability, then lower id)."""
    if responsibles_per_node < 1:
        raise ValueError("responsibles_per_node must be >= 1")
    area_array = nodes_in_area(topology, area)
    candidates = identify_candidates(topology, area)
    if not candidates:
        raise ValueError("area unreachable")
    infos = [flood(topology, area_array, c, status) for c in candidates]
    by_id = {i.id: i for i in infos}

    responsibles = {}
    for node in area_array:
        options = sorted(
            (info.depth[node], -info.reliability, info.id)
            for info in infos if node in info.depth
        )
        responsibles[node] = [o[2] for o in options[:responsibles_per_node]]

    selected = sorted({c for r in responsibles.values() for c in r})
    area_trees = {}
    for cand in selected:
        chose = [n for n in area_array if cand in responsibles[n]]
        area_trees[cand] = _restricted_area_tree(by_id[cand].parent_array, chose)

    plan = MulticastPlan(
        algorithm="multiple",
        selected=selected,
        area_trees=area_trees,
        distribution_tree=_distribution_tree(topology, source, selected),
        responsibles=responsibles,
        area_array=area_array,
        candidate_count=len(candidates),
        full_coverage_count=sum(1 for i in infos if i.full_coverage),
    )
    _plan_delivery(plan, topology)
    return plan


def _restricted_area_tree(parent_array: ParentArray, members) -> MulticastTree:
    """Subtree of the flood tree reaching the given members.

    Keeps every node on a root-to-member chain; intermediate relays
    stay in the tree even if they chose another candidate.
    """
    full = build_area_tree(parent_array)
    cand = parent_array.candidate
    parent = {cand: None}
    for m in sorted(members):
        chain = []
        v = m
        while v not in parent:
            chain.append(v)
            v = full.parent[v]
        for u in reversed(chain):
            parent[u] = full.parent[u]
    return MulticastTree(root=cand, parent=parent)
