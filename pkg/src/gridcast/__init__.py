"""Geocast tree construction and dual-tree reliability simulation for
heterogeneous smart-grid networks (wireless backbone + unstable PLC)."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .geometry import (DelayScale, Position, cumulative_distance,
                       cumulative_progress, distance, edge_weight_f)
from .topology import (DestinationArea, Link, LinkMedium, Node, NodeKind,
                       Topology, TopologyParams, generate_topology,
                       new_cp_weights, nodes_in_area, sample_plc_status)
from .placement import PlacementSolution, solve_placement
from .steiner import (EdgeWeights, MulticastTree, SteinerInstance, WeightKind,
                      delay_weights, exact_steiner, geo_weights, kmb,
                      metric_closure, mkmb, shortest_path, tree_cost)
from .ilp import emit_ilp
from .gcbt import CoreSelection, build_shared_tree, gcbt_deliver, select_core
from .multihop import (CandidateInfo, MulticastPlan, ParentArray,
                       build_area_tree, deliver, flood, hybrid_plan,
                       identify_candidates, multiple_plan, routing_packet)
from .metrics import (ScenarioMetrics, avg_reliability, coverage_fraction,
                      end_to_end_delay, plan_cost)
from .experiment import ExperimentConfig, oracle_check, run_single, run_sweep

__version__ = "0.1.0"
