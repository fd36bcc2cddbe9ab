"""Evaluation criteria over plans and trees."""

from dataclasses import dataclass

from .multihop import MulticastPlan
from .steiner import EdgeWeights, tree_cost
from .topology import Topology


@dataclass
class ScenarioMetrics:
    tree_cost: float
    end_to_end_delay: float
    avg_reliability: float | None
    coverage_fraction: float
    candidate_count: int | None
    full_coverage_count: int | None


def plan_cost(plan: MulticastPlan, weights: EdgeWeights) -> float:
    """Distribution-tree cost plus the cost of every area tree.

    Each area tree is a distinct transmission, so a link shared by two
    trees is paid once per tree.
    """
    total = tree_cost(plan.distribution_tree, weights)
    for cand in sorted(plan.area_trees):
        total += tree_cost(plan.area_trees[cand], weights)
    return total


def end_to_end_delay(delivery: dict[int, float]) -> float:
    """Worst first-copy delay over the delivered nodes."""
    if not delivery:
        raise ValueError("nothing delivered")
    return max(delivery.values())


def avg_reliability(plan: MulticastPlan, topology: Topology) -> float:
    """Mean reliability of the selected candidate transmitters."""
    if not plan.selected:
        raise ValueError("plan selected no candidates")
    return sum(topology.nodes[c].reliability for c in plan.selected) / len(plan.selected)


def coverage_fraction(plan: MulticastPlan, area_array) -> float:
    """Delivered nodes over area size; an empty area counts as covered."""
    area_array = list(area_array)
    if not area_array:
        return 1.0
    delivered = sum(1 for n in area_array if n in plan.delivery_delay)
    return delivered / len(area_array)
