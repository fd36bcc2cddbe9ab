import math
import random

import pytest

from gridcast.geometry import Position, distance
from gridcast.topology import (DestinationArea, LinkMedium, NodeKind, Topology,
                               TopologyParams, generate_topology,
                               new_cp_weights, nodes_in_area,
                               sample_plc_status)

from conftest import make_topology


@pytest.fixture(scope="module")
def topo():
    return generate_topology(TopologyParams(), 42)


def test_same_seed_is_bit_identical(topo):
    again = generate_topology(TopologyParams(), 42)
    assert topo.to_json() == again.to_json()


def test_different_seed_differs(topo):
    other = generate_topology(TopologyParams(), 43)
    assert topo.to_json() != other.to_json()


def test_json_roundtrip_bit_exact(topo):
    text = topo.to_json()
    assert Topology.from_json(text).to_json() == text


def test_links_respect_radio_range(topo):
    for link in topo.links:
        d = distance(topo.nodes[link.a].pos, topo.nodes[link.b].pos)
        assert d <= topo.radio_range + 1e-9


def test_positions_inside_square(topo):
    side = topo.params.side
    for node in topo.nodes:
        assert 0.0 <= node.pos.x <= side
        assert 0.0 <= node.pos.y <= side


def test_link_invariants(topo):
    seen = set()
    for link in topo.links:
        assert link.a < link.b
        assert link.key() not in seen
        seen.add(link.key())
        assert link.delay > 0 and math.isfinite(link.delay)
        ka, kb = topo.nodes[link.a].kind, topo.nodes[link.b].kind
        if ka is NodeKind.WIRELESS and kb is NodeKind.WIRELESS:
            assert link.medium is LinkMedium.WIRELESS_WIRELESS
            assert link.up_probability == 1.0
        elif ka is NodeKind.PLC and kb is NodeKind.PLC:
            assert link.medium is LinkMedium.PLC_PLC
        else:
            assert link.medium is LinkMedium.PLC_WIRELESS


def test_every_plc_node_within_hop_bound(topo):
    wireless = set(topo.wireless_ids())
    assert wireless
    adj = topo.adjacency()
    k = topo.params.max_plc_hops
    for node in topo.nodes:
        frontier = {node.id}
        seen = {node.id}
        found = node.id in wireless
        for _ in range(k):
            frontier = {v for u in frontier for v in adj[u]} - seen
            seen |= frontier
            if frontier & wireless:
                found = True
                break
        assert found, f"node {node.id} has no wireless router within {k} hops"


def test_wireless_backbone_connected(topo):
    wireless = topo.wireless_ids()
    adj = topo.adjacency()
    wset = set(wireless)
    comp = {wireless[0]}
    stack = [wireless[0]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v in wset and v not in comp:
                comp.add(v)
                stack.append(v)
    assert comp == wset


def test_reliabilities_in_unit_interval(topo):
    for node in topo.nodes:
        assert 0.0 <= node.reliability <= 1.0


def test_two_node_topology():
    t = generate_topology(TopologyParams(n_nodes=2, area_side=10.0,
                                         radio_range=20.0), 1)
    assert t.n == 2
    assert len(t.links) == 1
    assert t.wireless_ids()


def test_generation_fails_below_connectivity_threshold():
    # radio range far below the percolation threshold for 50 nodes
    params = TopologyParams(n_nodes=50, area_side=100.0, radio_range=5.0)
    with pytest.raises(ValueError, match="generation failed"):
        generate_topology(params, 0)


def test_nodes_in_area_boundary_inclusive():
    t = make_topology(3, [(0, 1, 1.0), (1, 2, 1.0)],
                      coords=[(0, 0), (10, 0), (30, 0)])
    area = DestinationArea(center=Position(0, 0), radius=10.0)
    assert nodes_in_area(t, area) == [0, 1]
    assert nodes_in_area(t, DestinationArea(center=Position(0, 0), radius=0.5)) == [0]
    far = DestinationArea(center=Position(500, 500), radius=1.0)
    assert nodes_in_area(t, far) == []


def test_area_radius_must_be_positive():
    with pytest.raises(ValueError):
        DestinationArea(center=Position(0, 0), radius=0.0)


def test_plc_status_extremes():
    kinds = [NodeKind.WIRELESS, NodeKind.PLC, NodeKind.PLC]
    t_up = make_topology(3, [(0, 1, 5.0), (1, 2, 5.0)], kinds=kinds,
                         up_probability=1.0)
    assert all(sample_plc_status(t_up, 0).values())
    t_down = make_topology(3, [(0, 1, 5.0), (1, 2, 5.0)], kinds=kinds,
                           up_probability=0.0)
    status = sample_plc_status(t_down, 0)
    assert not any(status[l.key()] for l in t_down.links)


def test_plc_status_wireless_always_up():
    t = make_topology(2, [(0, 1, 1.0)])
    for seed in range(20):
        assert sample_plc_status(t, seed)[(0, 1)]


def test_plc_status_deterministic():
    kinds = [NodeKind.WIRELESS, NodeKind.PLC]
    t = make_topology(2, [(0, 1, 5.0)], kinds=kinds, up_probability=0.5)
    assert sample_plc_status(t, 7) == sample_plc_status(t, 7)


def test_plc_status_monte_carlo_rate():
    # one PLC link sampled 10000 times: up fraction within 3 sigma of 0.5
    kinds = [NodeKind.WIRELESS, NodeKind.PLC]
    t = make_topology(2, [(0, 1, 5.0)], kinds=kinds, up_probability=0.5)
    ups = sum(sample_plc_status(t, seed)[(0, 1)] for seed in range(10000))
    assert abs(ups / 10000 - 0.5) < 0.02


def test_new_cp_weights_nonnegative_and_zero_on_best():
    rng = random.Random(4)
    t = generate_topology(TopologyParams(n_nodes=20, area_side=60.0), 9)
    w = new_cp_weights(t, {3, 7})
    assert all(v >= 0.0 for v in w.values())
    assert min(w.values()) == 0.0


def test_new_cp_weights_collinear_example():
    # nodes at x = 0, 1, 3 with links 0-1 and 1-2; destination is node 2.
    # cp(0->1) = 1, cp(1->2) = 2 = max, so the longer link gets 0 and the
    # shorter gets max - cp = 1.
    t = make_topology(3, [(0, 1, 1.0), (1, 2, 1.0)],
                      coords=[(0, 0), (1, 0), (3, 0)])
    w = new_cp_weights(t, {2})
    assert w[(1, 2)] == 0.0
    assert w[(0, 1)] == 1.0
    assert w[(2, 1)] == 4.0  # full backward: -cp + max = 2 + 2
    assert w[(1, 0)] == 3.0


def test_new_cp_weights_formula_with_negative_cp():
    # a link pointing away from the destination has negative progress
    t = make_topology(3, [(0, 1, 1.0), (1, 2, 1.0)],
                      coords=[(0, 0), (1, 0), (3, 0)])
    w = new_cp_weights(t, {2})
    # cp(2->1) = -2 with max = 2 gives 4
    assert w[(2, 1)] == -(-2.0) + 2.0


def test_new_cp_weights_requires_links():
    t = make_topology(2, [(0, 1, 1.0)])
    t.links = []
    with pytest.raises(ValueError, match="no links"):
        new_cp_weights(t, {0})


def test_new_cp_weights_pure_formula_numbers():
    # nodes at x = 0, 3, 10 with the destination at x = 10:
    # cp(0->1) = 10 - 7 = 3, cp(0->2)... links 0-2 and 2-1 chosen so the
    # global max is 10 and one orientation has cp = -3 -> weight 13
    t = make_topology(3, [(0, 1, 1.0), (1, 2, 1.0)],
                      coords=[(0, 0), (3, 0), (10, 0)])
    w = new_cp_weights(t, {2})
    # cp(0->1) = 10 - 7 = 3; cp(1->2) = 7 - 0 = 7 = max
    assert w[(1, 2)] == 0.0
    assert w[(1, 0)] == -(-3.0) + 7.0  # cp = -3 under max = 7 gives 10
