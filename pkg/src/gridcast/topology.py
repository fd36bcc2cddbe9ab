"""Heterogeneous smart-grid topology model and generator.

Nodes are wireless routers or PLC devices placed in an L x L square.
Any two nodes within radio range are linked; which nodes become wireless
is decided by the hop-bounded cover solver so that every PLC node stays
within max_plc_hops of a wireless router. Wireless-wireless links are
stable; any link touching a PLC node is unreliable (Bernoulli up/down
per routing round).
"""

import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .geometry import Position, distance
from .placement import solve_placement
from .util import derive_seed

MAX_GENERATION_RETRIES = 50


class NodeKind(Enum):
    WIRELESS = "wireless"
    PLC = "plc"


class LinkMedium(Enum):
    WIRELESS_WIRELESS = "ww"
    PLC_PLC = "pp"
    PLC_WIRELESS = "pw"


@dataclass(frozen=True)
class Node:
    id: int
    pos: Position
    kind: NodeKind
    reliability: float


@dataclass(frozen=True)
class Link:
    """Undirected link between nodes a < b."""

    a: int
    b: int
    medium: LinkMedium
    delay: float
    up_probability: float

    def key(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class DestinationArea:
    """Circular geocast area; membership is inclusive of the boundary."""

    center: Position
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("area radius must be > 0")


def default_area_side(n_nodes: int) -> float:
    """Default square side for a node count.

    Grows slower than sqrt(n): larger networks get denser, which keeps
    unit-disk graphs connectable (a constant density would disconnect
    them as n grows) and matches the intended behavior of added nodes
    filling the holes between existing ones.
    """
    return 100.0 * (n_nodes / 50.0) ** 0.25


@dataclass(frozen=True)
class TopologyParams:
    n_nodes: int = 50
    area_side: float | None = None
    radio_range: float = 22.0
    max_plc_hops: int = 2
    wireless_delay_range: tuple[float, float] = (1.0, 5.0)
    plc_delay_range: tuple[float, float] = (5.0, 20.0)
    plc_up_probability: float = 0.9
    placement_mode: str = "greedy"

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be >= 2")
        if self.max_plc_hops < 1:
            raise ValueError("max_plc_hops must be >= 1")
        for lo, hi in (self.wireless_delay_range, self.plc_delay_range):
            if lo > hi or lo <= 0:
                raise ValueError("delay ranges must satisfy 0 < lo <= hi")
        if not 0.0 <= self.plc_up_probability <= 1.0:
            raise ValueError("plc_up_probability must be in [0, 1]")
        if self.placement_mode not in ("exact", "greedy"):
            raise ValueError("placement_mode must be 'exact' or 'greedy'")

    @property
    def side(self) -> float:
        return self.area_side if self.area_side is not None else default_area_side(self.n_nodes)

    def to_dict(self):
        return {
            "n_nodes": self.n_nodes,
            "area_side": self.area_side,
            "radio_range": self.radio_range,
            "max_plc_hops": self.max_plc_hops,
            "wireless_delay_range": list(self.wireless_delay_range),
            "plc_delay_range": list(self.plc_delay_range),
            "plc_up_probability": self.plc_up_probability,
            "placement_mode": self.placement_mode,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for k in ("wireless_delay_range", "plc_delay_range"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)


@dataclass
class Topology:
    """Immutable (by convention) geometric graph of typed nodes."""

    nodes: list[Node]
    links: list[Link]
    radio_range: float
    params: TopologyParams
    seed: int
    neighbors: dict[int, list[tuple[int, int]]] = field(init=False, repr=False)
    link_index: dict[tuple[int, int], int] = field(init=False, repr=False)

    def __post_init__(self):
        self.neighbors = {node.id: [] for node in self.nodes}
        self.link_index = {}
        for i, link in enumerate(self.links):
            self.neighbors[link.a].append((link.b, i))
            self.neighbors[link.b].append((link.a, i))
            self.link_index[(link.a, link.b)] = i
        for nbrs in self.neighbors.values():
            nbrs.sort()

    @property
    def n(self) -> int:
        return len(self.nodes)

    def link_between(self, u: int, v: int) -> Link | None:
        i = self.link_index.get((min(u, v), max(u, v)))
        return self.links[i] if i is not None else None

    def wireless_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind is NodeKind.WIRELESS]

    def adjacency(self) -> list[list[int]]:
        return [[v for v, _ in self.neighbors[u]] for u in range(self.n)]

    def to_dict(self):
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "nodes": [
                {"id": n.id, "x": n.pos.x, "y": n.pos.y, "kind": n.kind.value,
                 "reliability": n.reliability}
                for n in self.nodes
            ],
            "links": [
                {"a": l.a, "b": l.b, "medium": l.medium.value, "delay": l.delay,
                 "up_probability": l.up_probability}
                for l in self.links
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d):
        params = TopologyParams.from_dict(d["params"])
        nodes = [
            Node(id=nd["id"], pos=Position(nd["x"], nd["y"]),
                 kind=NodeKind(nd["kind"]), reliability=nd["reliability"])
            for nd in d["nodes"]
        ]
        links = [
            Link(a=ld["a"], b=ld["b"], medium=LinkMedium(ld["medium"]),
                 delay=ld["delay"], up_probability=ld["up_probability"])
            for ld in d["links"]
        ]
        return cls(nodes=nodes, links=links, radio_range=params.radio_range,
                   params=params, seed=d["seed"])

    @classmethod
    def from_json(cls, text: str):
        return cls.from_dict(json.loads(text))


def _unit_disk_pairs(xs, ys, radius):
    """All node pairs (a < b) within `radius`, via a vectorized distance check."""
    pts = np.column_stack([xs, ys])
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    a, b = np.nonzero(np.triu(d2 <= radius * radius, k=1))
    return list(zip(a.tolist(), b.tolist()))


def _adjacency_csr(n, pairs):
    nbrs = [[] for _ in range(n)]
    for a, b in pairs:
        nbrs[a].append(b)
        nbrs[b].append(a)
    indptr = np.zeros(n + 1, dtype=np.int64)
    flat = []
    for u in range(n):
        nbrs[u].sort()
        flat.extend(nbrs[u])
        indptr[u + 1] = len(flat)
    return indptr, np.array(flat, dtype=np.int64), nbrs


def _connect_backbone(nbrs, wireless: set[int]) -> set[int]:
    """Promote extra nodes to wireless until the wireless subgraph is connected.

    The cover solver spreads routers apart, so adjacent routers are
    rare; the distribution tree needs a connected wireless backbone.
    Repeatedly joins the component containing the lowest id to its
    hop-nearest other wireless node through a shortest hop path.
    """
    wireless = set(wireless)
    while True:
        comp = _wireless_component(nbrs, wireless, min(wireless))
        outside = sorted(wireless - comp)
        if not outside:
            return wireless
        # BFS over the full graph from the component, lowest-id parents.
        parent = {u: None for u in sorted(comp)}
        frontier = sorted(comp)
        reached = None
        while frontier and reached is None:
            nxt = []
            for u in frontier:
                for v in nbrs[u]:
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
            nxt.sort()
            for v in nxt:
                if v in wireless:
                    reached = v
                    break
            frontier = nxt
        if reached is None:
            raise ValueError("generation failed")  # full graph disconnected
        v = parent[reached]
        while v is not None and v not in comp:
            wireless.add(v)
            v = parent[v]


def _wireless_component(nbrs, wireless, start):
    comp = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if v in wireless and v not in comp:
                comp.add(v)
                stack.append(v)
    return comp


def generate_topology(params: TopologyParams, seed: int) -> Topology:
    """Deterministic topology generation: (params, seed) fixes every bit.

    Positions are uniform in [0, L]^2 and resampled (bounded retries)
    until the unit-disk graph at the radio range is connected. The
    hop-bounded cover solver then picks the wireless routers, the
    backbone is connected, and delays/reliabilities are drawn from
    per-purpose derived RNG streams.
    """
    n = params.n_nodes
    side = params.side
    for attempt in range(MAX_GENERATION_RETRIES):
        rng = random.Random(derive_seed(seed, "positions", attempt))
        xs = [rng.uniform(0.0, side) for _ in range(n)]
        ys = [rng.uniform(0.0, side) for _ in range(n)]
        pairs = _unit_disk_pairs(xs, ys, params.radio_range)
        indptr, indices, nbrs = _adjacency_csr(n, pairs)
        if len(pairs) >= n - 1 and (_kernels.bfs_hops(indptr, indices, 0) >= 0).all():
            break
    else:
        raise ValueError("generation failed")

    placement = solve_placement([nbrs[u] for u in range(n)], params.max_plc_hops,
                                params.placement_mode)
    wireless = _connect_backbone(nbrs, set(placement.selected_routers))

    rel_rng = random.Random(derive_seed(seed, "reliability"))
    reliabilities = [rel_rng.random() for _ in range(n)]
    nodes = [
        Node(id=i, pos=Position(xs[i], ys[i]),
             kind=NodeKind.WIRELESS if i in wireless else NodeKind.PLC,
             reliability=reliabilities[i])
        for i in range(n)
    ]

    delay_rng = random.Random(derive_seed(seed, "delays"))
    links = []
    for a, b in sorted(pairs):
        if a in wireless and b in wireless:
            medium = LinkMedium.WIRELESS_WIRELESS
            lo, hi = params.wireless_delay_range
            up = 1.0
        else:
            medium = (LinkMedium.PLC_PLC
                      if a not in wireless and b not in wireless
                      else LinkMedium.PLC_WIRELESS)
            lo, hi = params.plc_delay_range
            up = params.plc_up_probability
        # Propagation delay: dominated by link length, scaled into the
        # medium's delay range with per-link jitter. The 0.2 floor keeps
        # delays strictly positive on near-zero-length links.
        length = math.hypot(xs[a] - xs[b], ys[a] - ys[b])
        stretch = 0.2 + 0.8 * min(length / params.radio_range, 1.0)
        links.append(Link(a=a, b=b, medium=medium,
                          delay=delay_rng.uniform(lo, hi) * stretch,
                          up_probability=up))

    return Topology(nodes=nodes, links=links, radio_range=params.radio_range,
                    params=params, seed=seed)


def nodes_in_area(topology: Topology, area: DestinationArea) -> list[int]:
    """Ids of nodes inside the area (boundary inclusive), ascending.

    This ordered list is the protocol's area array.
    """
    return [n.id for n in topology.nodes
            if distance(n.pos, area.center) <= area.radius]


def sample_plc_status(topology: Topology, seed: int) -> dict[tuple[int, int], bool]:
    """One up/down snapshot per link, keyed by (a, b).

    Links touching a PLC node are independently up with their
    up_probability; wireless-wireless links are always up. Deterministic
    in (topology.seed, seed).
    """
    rng = random.Random(derive_seed(topology.seed, "plc-status", seed))
    status = {}
    for link in topology.links:
        if link.medium is LinkMedium.WIRELESS_WIRELESS:
            status[link.key()] = True
        else:
            status[link.key()] = rng.random() < link.up_probability
    return status


def new_cp_weights(topology: Topology, dests) -> dict[tuple[int, int], float]:
    """Nonnegative directed link weights favoring cumulative progress.

    For each directed orientation (u, v) the cumulative progress is
    cd(u) - cd(v) toward the destination set; the weight is
    max_progress - progress, so the most-progressing orientation in the
    network gets 0 and backward orientations get the largest values.
    """
    if not topology.links:
        raise ValueError("no links")
    dest_pos = [topology.nodes[d].pos for d in sorted(set(dests))]
    cd = {}
    for link in topology.links:
        for node_id in (link.a, link.b):
            if node_id not in cd:
                pos = topology.nodes[node_id].pos
                cd[node_id] = sum(distance(pos, w) for w in dest_pos)
    cp = {}
    for link in topology.links:
        fwd = cd[link.a] - cd[link.b]
        cp[(link.a, link.b)] = fwd
        cp[(link.b, link.a)] = -fwd
    top = max(cp.values())
    return {edge: top - value for edge, value in cp.items()}
