import pytest

from gridcast.geometry import Position
from gridcast.topology import (Link, LinkMedium, Node, NodeKind, Topology,
                               TopologyParams)


def make_topology(n, edges, coords=None, kinds=None, reliabilities=None,
                  up_probability=1.0):
    """Hand-built topology for unit tests.

    edges: (a, b, delay) triples. kinds: per-node NodeKind (default all
    wireless). Media are derived from endpoint kinds.
    """
    kinds = kinds or [NodeKind.WIRELESS] * n
    nodes = [
        Node(id=i,
             pos=Position(*(coords[i] if coords else (float(i), 0.0))),
             kind=kinds[i],
             reliability=(reliabilities[i] if reliabilities else 0.5))
        for i in range(n)
    ]
    links = []
    for a, b, w in edges:
        a, b = min(a, b), max(a, b)
        if kinds[a] is NodeKind.WIRELESS and kinds[b] is NodeKind.WIRELESS:
            medium, up = LinkMedium.WIRELESS_WIRELESS, 1.0
        elif kinds[a] is NodeKind.PLC and kinds[b] is NodeKind.PLC:
            medium, up = LinkMedium.PLC_PLC, up_probability
        else:
            medium, up = LinkMedium.PLC_WIRELESS, up_probability
        links.append(Link(a=a, b=b, medium=medium, delay=float(w), up_probability=up))
    links.sort(key=lambda l: (l.a, l.b))
    params = TopologyParams(n_nodes=n, area_side=1000.0)
    return Topology(nodes=nodes, links=links, radio_range=1000.0,
                    params=params, seed=0)


@pytest.fixture
def triangle_113():
    # path 0-1-2 of unit delays plus a direct 0-2 link of delay 3
    return make_topology(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)],
                         coords=[(0, 0), (1, 0), (2, 0)])
