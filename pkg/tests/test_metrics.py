import pytest

from gridcast.geometry import Position
from gridcast.metrics import (avg_reliability, coverage_fraction,
                              end_to_end_delay, plan_cost)
from gridcast.multihop import MulticastPlan, hybrid_plan
from gridcast.steiner import delay_weights, tree_cost
from gridcast.topology import DestinationArea, NodeKind

from conftest import make_topology

W, P = NodeKind.WIRELESS, NodeKind.PLC


def sample_plan():
    t = make_topology(
        6,
        [(0, 1, 5.0), (1, 2, 5.0), (2, 3, 5.0), (3, 4, 5.0),
         (0, 5, 2.0), (4, 5, 3.0)],
        kinds=[W, P, P, P, W, W],
        reliabilities=[0.9, 0.5, 0.5, 0.5, 0.8, 0.5],
        coords=[(0, 0), (10, 0), (20, 0), (30, 0), (40, 0), (20, 30)])
    area = DestinationArea(center=Position(20, 0), radius=11.0)
    status = {l.key(): True for l in t.links}
    return t, hybrid_plan(t, area, 5, status)


def test_plan_cost_sums_distribution_and_area_trees():
    t, plan = sample_plan()
    dw = delay_weights(t)
    want = tree_cost(plan.distribution_tree, dw)
    for tree in plan.area_trees.values():
        want += tree_cost(tree, dw)
    assert plan_cost(plan, dw) == pytest.approx(want)
    # hand check: distribution 2+3, two area trees of 3 x 5.0 edges + attachment
    assert plan_cost(plan, dw) == pytest.approx((2 + 3) + 15.0 + 15.0)


def test_plan_cost_without_area_trees_is_distribution_only():
    t, plan = sample_plan()
    dw = delay_weights(t)
    bare = MulticastPlan(algorithm="hybrid", selected=plan.selected,
                         area_trees={},
                         distribution_tree=plan.distribution_tree,
                         responsibles={}, area_array=plan.area_array)
    assert plan_cost(bare, dw) == tree_cost(plan.distribution_tree, dw)


def test_plan_cost_additive_in_area_trees():
    t, plan = sample_plan()
    dw = delay_weights(t)
    full = plan_cost(plan, dw)
    cand = plan.selected[0]
    removed = plan.area_trees.pop(cand)
    assert plan_cost(plan, dw) == pytest.approx(full - tree_cost(removed, dw))


def test_end_to_end_delay_examples():
    assert end_to_end_delay({7: 7.0}) == 7.0
    assert end_to_end_delay({1: 3.0, 2: 9.0, 3: 5.0}) == 9.0


def test_end_to_end_delay_empty():
    with pytest.raises(ValueError, match="nothing delivered"):
        end_to_end_delay({})


def test_end_to_end_matches_deliver_output():
    t, plan = sample_plan()
    assert end_to_end_delay(plan.delivery_delay) == max(plan.delivery_delay.values())


def test_avg_reliability_mean_over_selected():
    t, plan = sample_plan()
    assert plan.selected == [0, 4]
    assert avg_reliability(plan, t) == pytest.approx((0.9 + 0.8) / 2)


def test_avg_reliability_single():
    t, plan = sample_plan()
    plan.selected = [4]
    assert avg_reliability(plan, t) == pytest.approx(0.8)


def test_avg_reliability_empty_selected():
    t, plan = sample_plan()
    plan.selected = []
    with pytest.raises(ValueError):
        avg_reliability(plan, t)


def test_coverage_fraction():
    t, plan = sample_plan()
    assert coverage_fraction(plan, plan.area_array) == 1.0
    plan.delivery_delay = {1: 1.0, 2: 2.0, 3: 3.0}
    assert coverage_fraction(plan, [1, 2, 3, 4]) == 0.75
    assert coverage_fraction(plan, []) == 1.0
