"""Benchmark: compiled graph kernels vs the pure-Python fallback.

The search kernels dominate sweep runtime, so this is the number that
justifies building the extension. Usage:

    python3 benchmarks/bench_kernels.py [--n 200] [--repeats 50]
"""

import argparse
import time

import numpy as np

from gridcast._kernels import pure
from gridcast.graphs import weighted_csr
from gridcast.steiner import delay_weights
from gridcast.topology import TopologyParams, generate_topology

try:
    from gridcast._kernels import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(n, repeats):
    topo = generate_topology(TopologyParams(n_nodes=n), seed=7)
    csr = weighted_csr(topo, delay_weights(topo).values)
    seeds = np.full(topo.n, np.inf)
    seeds[0] = 0.0
    seeds[topo.n // 2] = 1.5

    cases = [
        ("dijkstra", lambda impl: impl.dijkstra(
            csr.indptr, csr.indices, csr.weights, 0)),
        ("dijkstra_multi", lambda impl: impl.dijkstra_multi(
            csr.indptr, csr.indices, csr.weights, seeds)),
        ("bfs_hops", lambda impl: impl.bfs_hops(csr.indptr, csr.indices, 0)),
    ]

    print(f"n={topo.n} nodes, {len(topo.links)} links, best of {repeats} runs")
    print(f"{'kernel':<16} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for name, call in cases:
        t_pure = timeit(lambda: call(pure), repeats)
        if _speedups is None:
            print(f"{name:<16} {t_pure * 1e6:>10.1f}us {'n/a':>12} {'n/a':>9}")
            continue
        d_p = call(pure)
        d_c = call(_speedups)
        for a, b in zip(d_p, d_c):
            assert np.array_equal(a, b), f"{name}: backend outputs differ"
        t_fast = timeit(lambda: call(_speedups), repeats)
        print(f"{name:<16} {t_pure * 1e6:>10.1f}us {t_fast * 1e6:>10.1f}us "
              f"{t_pure / t_fast:>8.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=50)
    args = parser.parse_args()
    if _speedups is None:
        print("compiled kernels not built; showing pure timings only")
    bench(args.n, args.repeats)


if __name__ == "__main__":
    main()
