"""Seeded experiment harness.

A sweep evaluates every (sweep point, replicate, algorithm) cell from a
sub-seed derived from (master seed, sweep index, replicate), so results
are independent of execution order and worker count. The oracle suite
re-derives key results with independent brute-force implementations.
"""

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import gcbt as gcbt_mod
from . import metrics as metrics_mod
from . import multihop
from . import placement as placement_mod
from .geometry import Position, distance
from .steiner import (SteinerInstance, delay_weights, exact_steiner,
                      hop_weights, kmb, mkmb, shortest_path, tree_cost)
from .topology import (DestinationArea, Link, LinkMedium, Node, NodeKind,
                       Topology, TopologyParams, generate_topology,
                       nodes_in_area, sample_plc_status)
from .util import derive_seed, fmt9

CSV_HEADER = ("sweep_param,sweep_value,replicate,algorithm,tree_cost,"
              "e2e_delay_ms,avg_reliability,coverage,candidate_count,"
              "full_coverage_count,status")

ALL_ALGORITHMS = ("exact", "gcbt", "hybrid", "kmb", "mkmb", "multiple")
SWEEP_KINDS = ("radius", "n_nodes", "max_plc_hops")

EXACT_TERMINAL_BUDGET = 12


class ScenarioSkip(Exception):
    """Cell cannot be evaluated; the row is emitted with status=skipped."""


@dataclass(frozen=True)
class ExperimentConfig:
    master_seed: int = 42
    replicates: int = 30
    topology: TopologyParams = field(default_factory=TopologyParams)
    sweep_kind: str = "radius"
    sweep_values: tuple = (10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
    algorithms: tuple = ALL_ALGORITHMS
    a_coef: float = 1.0
    b_coef: float = 1.0
    area_radius: float = 20.0
    source_policy: str = "farthest_from_area"
    multiple_responsibles: int = 2
    seed_mode: str = "per_cell"

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.sweep_kind not in SWEEP_KINDS:
            raise ValueError(f"sweep_kind must be one of {SWEEP_KINDS}")
        if not self.sweep_values or list(self.sweep_values) != sorted(set(self.sweep_values)):
            raise ValueError("sweep_values must be nonempty and strictly increasing")
        for alg in self.algorithms:
            if alg not in ALL_ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r}")
        if not (self.source_policy == "farthest_from_area"
                or self.source_policy.startswith("fixed:")):
            raise ValueError("source_policy must be 'farthest_from_area' or 'fixed:<id>'")
        if self.seed_mode not in ("per_cell", "per_replicate"):
            raise ValueError("seed_mode must be 'per_cell' or 'per_replicate'")

    def to_dict(self):
        return {
            "master_seed": self.master_seed,
            "replicates": self.replicates,
            "topology": self.topology.to_dict(),
            "sweep_kind": self.sweep_kind,
            "sweep_values": list(self.sweep_values),
            "algorithms": list(self.algorithms),
            "a_coef": self.a_coef,
            "b_coef": self.b_coef,
            "area_radius": self.area_radius,
            "source_policy": self.source_policy,
            "multiple_responsibles": self.multiple_responsibles,
            "seed_mode": self.seed_mode,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "topology" in d:
            d["topology"] = TopologyParams.from_dict(d["topology"])
        for k in ("sweep_values", "algorithms"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class Scenario:
    topology: Topology
    area: DestinationArea
    area_array: list[int]
    status: dict
    source: int
    dests: list[int]
    seed: int


def build_scenario(config: ExperimentConfig, sweep_idx: int, replicate: int) -> Scenario:
    """Deterministic scenario for one sweep cell.

    per_cell seeding gives every cell an independent topology;
    per_replicate shares the seed across sweep points (common random
    numbers), which pairs the points and sharpens trend comparisons.
    """
    value = config.sweep_values[sweep_idx]
    params = config.topology
    area_radius = config.area_radius
    if config.sweep_kind == "radius":
        area_radius = float(value)
    elif config.sweep_kind == "n_nodes":
        params = replace(params, n_nodes=int(value))
    else:
        params = replace(params, max_plc_hops=int(value))

    if config.seed_mode == "per_replicate":
        seed = derive_seed(config.master_seed, replicate)
    else:
        seed = derive_seed(config.master_seed, sweep_idx, replicate)
    topo = generate_topology(params, seed)
    side = params.side
    rng = random.Random(derive_seed(seed, "area"))
    center = Position(side * 0.25 + rng.random() * side * 0.5,
                      side * 0.25 + rng.random() * side * 0.5)
    area = DestinationArea(center=center, radius=area_radius)
    area_array = nodes_in_area(topo, area)
    status = sample_plc_status(topo, derive_seed(seed, "status"))
    source = _pick_source(config, topo, area)
    dests = [n for n in area_array if n != source]
    return Scenario(topology=topo, area=area, area_array=area_array,
                    status=status, source=source, dests=dests, seed=seed)


def _pick_source(config, topo, area):
    if config.source_policy.startswith("fixed:"):
        return int(config.source_policy.split(":", 1)[1])
    best = None
    for node in topo.nodes:
        if node.kind is not NodeKind.WIRELESS:
            continue
        d = distance(node.pos, area.center)
        if best is None or d > best[0]:
            best = (d, node.id)
    return best[1]


def _require_dests(scenario):
    if not scenario.area_array:
        raise ScenarioSkip("empty area")
    if not scenario.dests:
        raise ScenarioSkip("no destinations besides the source")
    if scenario.topology.nodes[scenario.source].kind is not NodeKind.WIRELESS:
        raise ScenarioSkip("source is not wireless")


def _tree_metrics(scenario, tree, cost):
    dw = delay_weights(scenario.topology)
    delays = {d: tree.path_weight(d, dw) for d in scenario.dests}
    return metrics_mod.ScenarioMetrics(
        tree_cost=cost,
        end_to_end_delay=max(delays.values()),
        avg_reliability=None,
        coverage_fraction=1.0,
        candidate_count=None,
        full_coverage_count=None,
    )


def _run_kmb(scenario, config):
    _require_dests(scenario)
    inst = SteinerInstance(topology=scenario.topology, source=scenario.source,
                           terminals=frozenset(scenario.dests),
                           weights=delay_weights(scenario.topology))
    tree = kmb(inst)
    return _tree_metrics(scenario, tree, tree_cost(tree, inst.weights))


def _run_mkmb(scenario, config):
    _require_dests(scenario)
    tree, cost = mkmb(scenario.topology, scenario.source, scenario.dests,
                      config.a_coef, config.b_coef)
    return _tree_metrics(scenario, tree, cost)


def _run_exact(scenario, config):
    _require_dests(scenario)
    if len(scenario.dests) + 1 > EXACT_TERMINAL_BUDGET:
        raise ScenarioSkip("too many terminals for the exact solver")
    inst = SteinerInstance(topology=scenario.topology, source=scenario.source,
                           terminals=frozenset(scenario.dests),
                           weights=delay_weights(scenario.topology))
    tree = exact_steiner(inst)
    return _tree_metrics(scenario, tree, tree_cost(tree, inst.weights))


def _run_gcbt(scenario, config):
    """Group-independent shared tree: the core is the network's
    geographic median and the tree spans every node, so the whole tree
    is paid regardless of the area. Joins follow hop-shortest unicast
    routes (delays are measured on the resulting paths, so the fixed
    tree is not delay-optimal for anyone). Cost/delay ignore churn;
    coverage reports what churn would have done to the fixed tree."""
    _require_dests(scenario)
    topo = scenario.topology
    dw = delay_weights(topo)
    all_nodes = [n.id for n in topo.nodes]
    selection = gcbt_mod.make_core_selection(topo, hop_weights(topo), all_nodes)
    delivery = gcbt_mod.gcbt_deliver(topo, dw, scenario.source, selection)

    to_core_path, _ = shortest_path(topo, dw, scenario.source, selection.core)
    links = {tuple(sorted(e)) for e in selection.shared_tree.edges}
    links |= {tuple(sorted((to_core_path[i], to_core_path[i + 1])))
              for i in range(len(to_core_path) - 1)}
    cost = sum(dw.values[e] for e in sorted(links))

    delivered = 0
    for m in scenario.dests:
        chain = selection.shared_tree.path_from_root(m)
        edges = [tuple(sorted((chain[i], chain[i + 1]))) for i in range(len(chain) - 1)]
        edges += [tuple(sorted((to_core_path[i], to_core_path[i + 1])))
                  for i in range(len(to_core_path) - 1)]
        if all(scenario.status[e] for e in edges):
            delivered += 1
    return metrics_mod.ScenarioMetrics(
        tree_cost=cost,
        end_to_end_delay=max(delivery[m] for m in scenario.dests),
        avg_reliability=None,
        coverage_fraction=delivered / len(scenario.dests),
        candidate_count=None,
        full_coverage_count=None,
    )


def _plan_metrics(scenario, plan):
    if not plan.delivery_delay:
        raise ScenarioSkip("nothing delivered")
    dw = delay_weights(scenario.topology)
    return metrics_mod.ScenarioMetrics(
        tree_cost=metrics_mod.plan_cost(plan, dw),
        end_to_end_delay=metrics_mod.end_to_end_delay(plan.delivery_delay),
        avg_reliability=metrics_mod.avg_reliability(plan, scenario.topology),
        coverage_fraction=metrics_mod.coverage_fraction(plan, plan.area_array),
        candidate_count=plan.candidate_count,
        full_coverage_count=plan.full_coverage_count,
    )


def _run_hybrid(scenario, config):
    if not scenario.area_array:
        raise ScenarioSkip("empty area")
    try:
        plan = multihop.hybrid_plan(scenario.topology, scenario.area, scenario.source,
                                    scenario.status,
                                    responsibles_per_node=config.multiple_responsibles)
    except ValueError as e:
        raise ScenarioSkip(str(e))
    return _plan_metrics(scenario, plan)


def _run_multiple(scenario, config):
    if not scenario.area_array:
        raise ScenarioSkip("empty area")
    try:
        plan = multihop.multiple_plan(scenario.topology, scenario.area, scenario.source,
                                      scenario.status,
                                      responsibles_per_node=config.multiple_responsibles)
    except ValueError as e:
        raise ScenarioSkip(str(e))
    return _plan_metrics(scenario, plan)


_RUNNERS = {
    "kmb": _run_kmb,
    "mkmb": _run_mkmb,
    "exact": _run_exact,
    "gcbt": _run_gcbt,
    "hybrid": _run_hybrid,
    "multiple": _run_multiple,
}


def evaluate_cell(config: ExperimentConfig, sweep_idx: int, replicate: int):
    """All algorithm rows for one (sweep point, replicate) cell."""
    rows = []
    try:
        scenario = build_scenario(config, sweep_idx, replicate)
        scenario_error = None
    except ValueError as e:
        scenario = None
        scenario_error = str(e)
    for alg in sorted(config.algorithms):
        if scenario is None:
            rows.append(_row(config, sweep_idx, replicate, alg, None,
                             f"skipped:{scenario_error}"))
            continue
        try:
            m = _RUNNERS[alg](scenario, config)
            rows.append(_row(config, sweep_idx, replicate, alg, m, "ok"))
        except ScenarioSkip as e:
            rows.append(_row(config, sweep_idx, replicate, alg, None, f"skipped:{e}"))
    return rows


def _row(config, sweep_idx, replicate, alg, m, status):
    value = config.sweep_values[sweep_idx]
    value_str = fmt9(float(value)) if config.sweep_kind == "radius" else str(int(value))

    def opt(x, fmt=fmt9):
        return "" if x is None else fmt(x)

    return {
        "sweep_idx": sweep_idx,
        "replicate": replicate,
        "algorithm": alg,
        "fields": [
            config.sweep_kind,
            value_str,
            str(replicate),
            alg,
            opt(m.tree_cost) if m else "",
            opt(m.end_to_end_delay) if m else "",
            opt(m.avg_reliability) if m else "",
            opt(m.coverage_fraction) if m else "",
            opt(m.candidate_count, str) if m else "",
            opt(m.full_coverage_count, str) if m else "",
            status,
        ],
    }


def _eval_cell_task(args):
    config_dict, i, r = args
    config = ExperimentConfig.from_dict(config_dict)
    return evaluate_cell(config, i, r)


def run_sweep(config: ExperimentConfig, workers: int = 1) -> str:
    """Full sweep as a CSV document (byte-identical for a fixed config)."""
    cells = [(i, r) for i in range(len(config.sweep_values))
             for r in range(config.replicates)]
    if workers > 1:
        cfg = config.to_dict()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_eval_cell_task, [(cfg, i, r) for i, r in cells]))
        rows = [row for cell_rows in results for row in cell_rows]
    else:
        rows = [row for i, r in cells for row in evaluate_cell(config, i, r)]
    rows.sort(key=lambda r: (r["sweep_idx"], r["replicate"], r["algorithm"]))

    lines = ["# config: " + json.dumps(config.to_dict(), sort_keys=True), CSV_HEADER]
    lines += [",".join(r["fields"]) for r in rows]
    return "\n".join(lines) + "\n"


def run_single(config: ExperimentConfig, sweep_idx: int, replicate: int) -> dict:
    """Debug dump of one sweep cell: topology, plans, traces, metric rows."""
    dump = {"config": config.to_dict(), "sweep_idx": sweep_idx, "replicate": replicate}
    rows = evaluate_cell(config, sweep_idx, replicate)
    dump["rows"] = [",".join(r["fields"]) for r in rows]
    try:
        scenario = build_scenario(config, sweep_idx, replicate)
    except ValueError:
        return dump
    dump["topology"] = scenario.topology.to_dict()
    dump["area"] = {"center_x": scenario.area.center.x,
                    "center_y": scenario.area.center.y,
                    "radius": scenario.area.radius}
    dump["source"] = scenario.source
    dump["status"] = {f"{a}-{b}": up for (a, b), up in sorted(scenario.status.items())}
    dump["packets"] = [
        multihop.routing_packet(
            multihop.flood(scenario.topology, scenario.area_array, c, scenario.status),
            scenario.area)
        for c in multihop.identify_candidates(scenario.topology, scenario.area)
    ]
    dump["plans"] = {}
    for alg, builder in (("hybrid", multihop.hybrid_plan),
                         ("multiple", multihop.multiple_plan)):
        if alg not in config.algorithms:
            continue
        try:
            plan = builder(scenario.topology, scenario.area, scenario.source,
                           scenario.status,
                           responsibles_per_node=config.multiple_responsibles)
            dump["plans"][alg] = plan.to_dict()
        except ValueError:
            pass
    return dump


# ---------------------------------------------------------------------------
# Brute-force oracle suite
# ---------------------------------------------------------------------------


def synthetic_topology(rng: random.Random, n: int, extra_edges: int = 0,
                       weight_range=(1.0, 10.0)) -> Topology:
    """Small connected all-wireless topology for oracle/property tests:
    a random spanning tree plus `extra_edges` random chords."""
    pairs = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a = order[rng.randrange(i)]
        b = order[i]
        pairs.add((min(a, b), max(a, b)))
    attempts = 0
    while len(pairs) < n - 1 + extra_edges and attempts < 10 * (extra_edges + 1):
        a, b = rng.randrange(n), rng.randrange(n)
        attempts += 1
        if a != b:
            pairs.add((min(a, b), max(a, b)))
    nodes = [Node(id=i, pos=Position(rng.uniform(0, 100), rng.uniform(0, 100)),
                  kind=NodeKind.WIRELESS, reliability=rng.random())
             for i in range(n)]
    links = [Link(a=a, b=b, medium=LinkMedium.WIRELESS_WIRELESS,
                  delay=rng.uniform(*weight_range), up_probability=1.0)
             for a, b in sorted(pairs)]
    params = TopologyParams(n_nodes=n, area_side=100.0)
    return Topology(nodes=nodes, links=links, radio_range=1e9, params=params, seed=0)


def steiner_cost_by_enumeration(topology: Topology, terminals) -> float:
    """Independent optimum: min over node supersets of the terminals of
    the MST cost of the induced subgraph (Prim, written separately from
    the production solver)."""
    terms = sorted(set(terminals))
    others = [n.id for n in topology.nodes if n.id not in terms]
    und = {}
    for link in topology.links:
        und[(link.a, link.b)] = link.delay
    best = float("inf")
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            chosen = set(terms) | set(extra)
            cost = _prim_cost(chosen, und)
            if cost is not None and cost < best:
                best = cost
    return best


def _prim_cost(nodes, und):
    nodes = sorted(nodes)
    if len(nodes) == 1:
        return 0.0
    in_tree = {nodes[0]}
    cost = 0.0
    while len(in_tree) < len(nodes):
        best = None
        for (a, b), w in und.items():
            if a in nodes and b in nodes and (a in in_tree) != (b in in_tree):
                if best is None or w < best[0]:
                    best = (w, a, b)
        if best is None:
            return None
        cost += best[0]
        in_tree.add(best[1])
        in_tree.add(best[2])
    return cost


def reference_flood(topology: Topology, area_array, candidate: int, status=None):
    """Independent flood oracle: per-level predecessor scan instead of a
    frontier queue. Returns (depth map, parent map with wire values)."""
    area_set = set(area_array)
    up = lambda li: status is None or status[topology.links[li].key()]
    if candidate in area_set:
        level = {candidate}
    else:
        level = {v for v, li in topology.neighbors[candidate]
                 if v in area_set and up(li)}
    depth = {v: 0 for v in level}
    parents = {v: multihop.ROOT for v in level}
    d = 0
    while True:
        d += 1
        frontier = {}
        for v in sorted(area_set - set(depth)):
            preds = sorted(u for u, li in topology.neighbors[v]
                           if u in level and up(li))
            if preds:
                frontier[v] = preds[0]
        if not frontier:
            break
        for v, p in frontier.items():
            depth[v] = d
            parents[v] = p
        level = set(frontier)
    for v in area_set - set(depth):
        parents[v] = multihop.UNSET
    return depth, parents


@dataclass
class OracleReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(failed == 0 for _, _, failed in self.checks)

    def lines(self):
        out = []
        for name, passed, failed in self.checks:
            verdict = "pass" if failed == 0 else "FAIL"
            out.append(f"{name}: {verdict} ({passed}/{passed + failed})")
        return out


def oracle_check(cases: int | None = None, seed: int = 0,
                 inject_fault: bool = False) -> OracleReport:
    """Runs the brute-force validation suite and reports per-check counts.

    inject_fault perturbs the solver cost before comparison; used to
    prove the harness actually detects disagreement.
    """
    checks = []

    n_cases = cases or 200
    passed = failed = 0
    for case in range(n_cases):
        rng = random.Random(derive_seed(seed, "oracle-exact", case))
        topo = synthetic_topology(rng, rng.randint(4, 8), extra_edges=rng.randint(1, 6))
        ids = list(range(topo.n))
        terms = rng.sample(ids, rng.randint(2, min(5, topo.n)))
        inst = SteinerInstance(topology=topo, source=terms[0],
                               terminals=frozenset(terms[1:]),
                               weights=delay_weights(topo))
        got = tree_cost(exact_steiner(inst), inst.weights)
        if inject_fault:
            got += 0.1
        want = steiner_cost_by_enumeration(topo, terms)
        if abs(got - want) <= 1e-9 * max(1.0, abs(want)):
            passed += 1
        else:
            failed += 1
    checks.append(("exact_vs_enumeration", passed, failed))

    n_cases = cases or 100
    passed = failed = 0
    for case in range(n_cases):
        rng = random.Random(derive_seed(seed, "oracle-kmb", case))
        topo = synthetic_topology(rng, rng.randint(5, 20), extra_edges=rng.randint(2, 15))
        ids = list(range(topo.n))
        terms = rng.sample(ids, rng.randint(2, min(6, topo.n)))
        inst = SteinerInstance(topology=topo, source=terms[0],
                               terminals=frozenset(terms[1:]),
                               weights=delay_weights(topo))
        approx = tree_cost(kmb(inst), inst.weights)
        opt = tree_cost(exact_steiner(inst), inst.weights)
        if approx <= 2.0 * opt + 1e-9:
            passed += 1
        else:
            failed += 1
    checks.append(("kmb_within_2x_of_exact", passed, failed))

    n_cases = cases or 200
    passed = failed = 0
    for case in range(n_cases):
        rng = random.Random(derive_seed(seed, "oracle-flood", case))
        params = TopologyParams(n_nodes=30, radio_range=25.0, max_plc_hops=2)
        topo = generate_topology(params, derive_seed(seed, "oracle-flood-topo", case))
        center = Position(rng.uniform(20, 60), rng.uniform(20, 60))
        area = DestinationArea(center=center, radius=rng.uniform(10, 25))
        cands = multihop.identify_candidates(topo, area)
        area_array = nodes_in_area(topo, area)
        if not cands or not area_array:
            passed += 1
            continue
        status = sample_plc_status(topo, case)
        cand = rng.choice(cands)
        info = multihop.flood(topo, area_array, cand, status)
        ref_depth, ref_parents = reference_flood(topo, area_array, cand, status)
        got_parents = dict(zip(info.parent_array.area, info.parent_array.entries))
        if info.depth == ref_depth and got_parents == ref_parents:
            passed += 1
        else:
            failed += 1
    checks.append(("flood_vs_reference_bfs", passed, failed))

    n_cases = cases or 100
    passed = failed = 0
    for case in range(n_cases):
        rng = random.Random(derive_seed(seed, "oracle-place", case))
        topo = synthetic_topology(rng, rng.randint(4, 12), extra_edges=rng.randint(0, 8))
        adj = topo.adjacency()
        k = rng.randint(1, 2)
        exact = placement_mod.solve_placement(adj, k, "exact")
        greedy = placement_mod.solve_placement(adj, k, "greedy")
        want = _exhaustive_cover_size(adj, k)
        if (len(exact.selected_routers) == want
                and len(greedy.selected_routers) >= want
                and _cover_feasible(adj, k, exact.selected_routers)):
            passed += 1
        else:
            failed += 1
    checks.append(("placement_vs_exhaustive", passed, failed))

    return OracleReport(checks=checks)


def _hops_from(adj, src):
    hops = {src: 0}
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in hops:
                    hops[v] = d
                    nxt.append(v)
        frontier = nxt
    return hops


def _cover_feasible(adj, k, routers):
    n = len(adj)
    covered = set()
    for r in routers:
        covered |= {v for v, d in _hops_from(adj, r).items() if d <= k}
    return len(covered) == n


def _exhaustive_cover_size(adj, k):
    n = len(adj)
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            if _cover_feasible(adj, k, combo):
                return size
    return n
