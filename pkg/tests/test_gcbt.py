import random

import pytest

from gridcast.gcbt import (build_shared_tree, gcbt_deliver,
                           make_core_selection, select_core)
from gridcast.geometry import Position, cumulative_distance
from gridcast.steiner import delay_weights, shortest_path
from gridcast.topology import (NodeKind, Node, Topology, TopologyParams,
                               generate_topology)

from conftest import make_topology


def test_single_wireless_node_is_core():
    kinds = [NodeKind.WIRELESS, NodeKind.PLC, NodeKind.PLC]
    t = make_topology(3, [(0, 1, 1.0), (1, 2, 1.0)], kinds=kinds)
    assert select_core(t, {1, 2}) == 0


def test_core_is_the_median_on_a_line():
    # wireless routers at x = 0, 5, 10; PLC members symmetric about x = 5
    t = make_topology(5, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)],
                      kinds=[NodeKind.WIRELESS, NodeKind.WIRELESS,
                             NodeKind.WIRELESS, NodeKind.PLC, NodeKind.PLC],
                      coords=[(0, 0), (5, 0), (10, 0), (2, 3), (8, 3)])
    assert select_core(t, {3, 4}) == 1


def test_core_requires_wireless():
    kinds = [NodeKind.PLC, NodeKind.PLC]
    t = make_topology(2, [(0, 1, 1.0)], kinds=kinds)
    with pytest.raises(ValueError, match="no wireless"):
        select_core(t, {1})


@pytest.mark.parametrize("seed", range(10))
def test_core_matches_exhaustive_scan(seed):
    topo = generate_topology(TopologyParams(n_nodes=25, area_side=80.0), seed)
    rng = random.Random(seed)
    members = rng.sample(range(topo.n), 5)
    got = select_core(topo, members)
    member_pos = [topo.nodes[m].pos for m in sorted(members)]
    best = min(((cumulative_distance(topo.nodes[w].pos, member_pos), w)
                for w in topo.wireless_ids()))
    assert got == best[1]


def test_core_invariant_under_uniform_scaling():
    topo = generate_topology(TopologyParams(n_nodes=20, area_side=60.0), 5)
    members = [2, 7, 12]
    core = select_core(topo, members)
    scaled_nodes = [Node(n.id, Position(n.pos.x * 3.0, n.pos.y * 3.0),
                         n.kind, n.reliability) for n in topo.nodes]
    scaled = Topology(nodes=scaled_nodes, links=topo.links,
                      radio_range=topo.radio_range * 3.0,
                      params=topo.params, seed=topo.seed)
    assert select_core(scaled, members) == core


def test_shared_tree_single_member_is_shortest_path(triangle_113):
    dw = delay_weights(triangle_113)
    tree = build_shared_tree(triangle_113, dw, 0, {2})
    assert tree.edges == {(0, 1), (1, 2)}


def test_shared_tree_star():
    t = make_topology(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)],
                      coords=[(0, 0), (1, 0), (0, 1), (-1, 0)])
    tree = build_shared_tree(t, delay_weights(t), 0, {1, 2, 3})
    assert tree.edges == {(0, 1), (0, 2), (0, 3)}


def test_shared_tree_member_unreachable():
    t = make_topology(3, [(0, 1, 1.0)])
    with pytest.raises(ValueError, match="unreachable"):
        build_shared_tree(t, delay_weights(t), 0, {2})


@pytest.mark.parametrize("seed", range(8))
def test_shared_tree_paths_are_shortest(seed):
    topo = generate_topology(TopologyParams(n_nodes=25, area_side=80.0), seed)
    rng = random.Random(seed)
    dw = delay_weights(topo)
    core = topo.wireless_ids()[0]
    members = rng.sample(range(topo.n), 6)
    tree = build_shared_tree(topo, dw, core, members)
    for m in members:
        _, want = shortest_path(topo, dw, core, m)
        assert tree.path_weight(m, dw) == pytest.approx(want)


def test_deliver_source_equals_core(triangle_113):
    dw = delay_weights(triangle_113)
    sel = make_core_selection(triangle_113, dw, {2})
    # geometric median of {2} among wireless nodes is node 2 itself
    assert sel.core == 2
    delays = gcbt_deliver(triangle_113, dw, 2, sel)
    assert delays[2] == 0.0


def test_deliver_member_equals_core():
    t = make_topology(3, [(0, 1, 2.0), (1, 2, 2.0)],
                      coords=[(0, 0), (1, 0), (2, 0)])
    dw = delay_weights(t)
    tree = build_shared_tree(t, dw, 1, {1})
    from gridcast.gcbt import CoreSelection
    sel = CoreSelection(core=1, shared_tree=tree, members=frozenset({1}))
    delays = gcbt_deliver(t, dw, 0, sel)
    assert delays[1] == 2.0  # source-to-core only


@pytest.mark.parametrize("seed", range(6))
def test_deliver_never_beats_direct_shortest_path(seed):
    topo = generate_topology(TopologyParams(n_nodes=25, area_side=80.0), seed)
    rng = random.Random(100 + seed)
    dw = delay_weights(topo)
    members = rng.sample(range(topo.n), 5)
    sel = make_core_selection(topo, dw, members)
    source = topo.wireless_ids()[-1]
    delays = gcbt_deliver(topo, dw, source, sel)
    for m in members:
        _, direct = shortest_path(topo, dw, source, m)
        assert delays[m] >= direct - 1e-9
