#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Swaps the kernel functions behind `unruh_coherence.kernels` and times
representative workloads end to end: region-I density builds (grouped outer
products + pair coalescing dominate) and the large-s series summation.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import time

from unruh_coherence import (AccelerationParameter, Family, Observer,
                             ScenarioConfig, TruncationPolicy, kernels,
                             scenario_density)
from unruh_coherence import _kernels_py

try:
    from unruh_coherence import _kernels
except ImportError:
    _kernels = None

POLICY = TruncationPolicy(epsilon_trunc=1e-10)


def _scenario(family, n_total, s_values):
    n_acc = len(s_values)
    observers = tuple(
        Observer(f"o{i + 1}",
                 AccelerationParameter(s_values[i - (n_total - n_acc)])
                 if i >= n_total - n_acc else None)
        for i in range(n_total))
    return ScenarioConfig(family, n_total, observers, POLICY)


WORKLOADS = [
    ("GHZ N=3 s=(2,2) density", lambda: scenario_density(_scenario(
        Family.GHZ, 3, (2.0, 2.0)))),
    ("W   N=3 s=(2,2) density", lambda: scenario_density(_scenario(
        Family.W, 3, (2.0, 2.0)))),
    ("W   N=4 s=(0.9,0.9,0.9) density", lambda: scenario_density(_scenario(
        Family.W, 4, (0.9, 0.9, 0.9)))),
    ("series q=tanh^2(6), rel_tol=1e-10", lambda: kernels.sqrt_geometric_series(
        math.tanh(6.0) ** 2, 1e-10, 5_000_000_000)),
]

# ~3.2e9 terms; this is the Fig.-3 r=w=10 closed-form evaluation
LARGE_WORKLOADS = [
    ("series q=tanh^2(10), rel_tol=1e-10", lambda: kernels.sqrt_geometric_series(
        math.tanh(10.0) ** 2, 1e-10, 5_000_000_000)),
]


def _use(impl):
    kernels.block_outer = impl.block_outer
    kernels.coalesce_pairs = impl.coalesce_pairs
    kernels.sqrt_geometric_series = impl.sqrt_geometric_series


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best-of (default 3)")
    parser.add_argument("--large", action="store_true",
                        help="include the multi-billion-term series workload "
                             "(tens of seconds per backend, timed once)")
    args = parser.parse_args()

    workloads = list(WORKLOADS)
    if args.large:
        workloads += [(name, fn) for name, fn in LARGE_WORKLOADS]

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("compiled", _kernels))
    else:
        print("compiled extension not built; timing the python backend only\n")

    width = max(len(name) for name, _ in workloads)
    header = f"{'workload':<{width}}  " + "".join(
        f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for name, fn in workloads:
        repeat = 1 if (name, fn) in LARGE_WORKLOADS else args.repeat
        times = []
        for _, impl in backends:
            _use(impl)
            times.append(_time(fn, repeat))
        row = f"{name:<{width}}  " + "".join(f"{t:>11.3f}s" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.2f}x"
        print(row)

    _use(_kernels if _kernels is not None else _kernels_py)


if __name__ == "__main__":
    main()
