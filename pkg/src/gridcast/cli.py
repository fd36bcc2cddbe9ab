"""Command-line interface.

Subcommands: gen (topology JSON), run (one scenario dump), sweep (full
experiment CSV), oracle (brute-force validation suite), emit-ilp (print
the optimization model for a scenario). Exit codes: 0 success, 1 usage
error, 2 infeasible config, 3 oracle failure.
"""

import argparse
import json
import sys
from dataclasses import replace

from .experiment import (ExperimentConfig, build_scenario, oracle_check,
                         run_single, run_sweep)
from .ilp import emit_ilp
from .steiner import SteinerInstance, delay_weights
from .topology import (DestinationArea, Topology, TopologyParams,
                       generate_topology)
from .geometry import Position

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_ORACLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _load_config(args) -> ExperimentConfig:
    if args.config:
        with open(args.config) as f:
            config = ExperimentConfig.from_json(f.read())
    else:
        config = ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        config = replace(config, master_seed=args.seed)
    if getattr(args, "replicates", None) is not None:
        config = replace(config, replicates=args.replicates)
    if getattr(args, "algorithms", None):
        config = replace(config, algorithms=tuple(sorted(args.algorithms.split(","))))
    return config


def _write(out, text):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args):
    params = TopologyParams(
        n_nodes=args.n_nodes, area_side=args.area_side,
        radio_range=args.radio_range, max_plc_hops=args.max_plc_hops,
    )
    try:
        topo = generate_topology(params, args.seed if args.seed is not None else 42)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write(args.out, topo.to_json() + "\n")
    return EXIT_OK


def _cmd_run(args):
    config = _load_config(args)
    try:
        dump = run_single(config, args.sweep_index, args.replicate)
    except (ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write(args.out, json.dumps(dump, indent=2) + "\n")
    return EXIT_OK


def _cmd_sweep(args):
    config = _load_config(args)
    try:
        csv_text = run_sweep(config, workers=args.workers)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write(args.out, csv_text)
    return EXIT_OK


def _cmd_oracle(args):
    report = oracle_check(cases=args.cases, seed=args.seed or 0,
                          inject_fault=args.inject_fault)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_ORACLE


def _cmd_emit_ilp(args):
    if args.topology:
        with open(args.topology) as f:
            topo = Topology.from_json(f.read())
        cx, cy = (float(v) for v in args.center.split(","))
        area = DestinationArea(center=Position(cx, cy), radius=args.radius)
        from .topology import nodes_in_area

        dests = [n for n in nodes_in_area(topo, area) if n != args.source]
        source = args.source
    else:
        config = _load_config(args)
        scenario = build_scenario(config, args.sweep_index, args.replicate)
        topo, source, dests = scenario.topology, scenario.source, scenario.dests
    if not dests:
        print("error: empty destination set", file=sys.stderr)
        return EXIT_INFEASIBLE
    inst = SteinerInstance(topology=topo, source=source,
                           terminals=frozenset(dests), weights=delay_weights(topo))
    _write(args.out, emit_ilp(inst))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _Parser(prog="gridcast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a topology and print its JSON")
    p.add_argument("--n-nodes", type=int, default=50)
    p.add_argument("--area-side", type=float, default=None)
    p.add_argument("--radio-range", type=float, default=22.0)
    p.add_argument("--max-plc-hops", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("run", help="evaluate one sweep cell and dump everything")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--algorithms", default=None)
    p.add_argument("--sweep-index", type=int, default=0)
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="run the full experiment sweep to CSV")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--algorithms", default=None, help="comma-separated subset")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="run the brute-force validation suite")
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb solver output to self-test the harness")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("emit-ilp", help="print the optimization model for a scenario")
    p.add_argument("--topology", default=None, help="topology JSON file")
    p.add_argument("--center", default=None, help="area center as x,y")
    p.add_argument("--radius", type=float, default=20.0)
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--config", default=None)
    p.add_argument("--sweep-index", type=int, default=0)
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_emit_ilp)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as e:
        print(f"error: infeasible config: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
