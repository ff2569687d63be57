#!/usr/bin/env python3
"""Times the compiled Newton-Raphson kernel against the pure-Python fallback.

Runs the shipped 10-bus fixture over its 168 baseline snapshots, several
repetitions per kernel, and reports per-snapshot timings and the speedup.

    python3 benchmarks/bench_powerflow.py [--repeat 20]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from heatplan.powerflow import _nr_py
from heatplan.powerflow.grid import build_admittance, load_grid

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def bench(kernel, G, B, specs, slack, repeat):
    n = G.shape[0]
    best = float("inf")
    iters = 0
    for _ in range(repeat):
        t0 = time.perf_counter()
        iters = 0
        for p_spec, q_spec in specs:
            _, _, it, ok = kernel.solve_snapshot(
                G, B, p_spec, q_spec, slack, np.ones(n), np.zeros(n), 1e-8, 30
            )
            assert ok
            iters += it
        best = min(best, time.perf_counter() - t0)
    return best, iters


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20, help="repetitions, best-of")
    args = parser.parse_args()

    grid = load_grid(FIXTURES / "grid10")
    Y = build_admittance(grid)
    G = np.ascontiguousarray(Y.real)
    B = np.ascontiguousarray(Y.imag)
    tan_phi = np.tan(np.arccos(0.95))
    specs = []
    for t in range(grid.baseline_load.shape[1]):
        p = (grid.baseline_gen[:, t] - grid.baseline_load[:, t]) / grid.s_base_mva
        specs.append((p, p * tan_phi))

    kernels = [("python", _nr_py)]
    try:
        from heatplan.powerflow import _nr_cy

        kernels.append(("compiled", _nr_cy))
    except ImportError:
        print("compiled kernel not available; timing the fallback only")

    results = {}
    for name, kernel in kernels:
        seconds, iters = bench(kernel, G, B, specs, grid.slack_index, args.repeat)
        results[name] = seconds
        print(
            f"{name:>9}: {seconds * 1e3:7.2f} ms for {len(specs)} snapshots "
            f"({seconds / len(specs) * 1e6:6.1f} us/snapshot, {iters} NR iterations)"
        )

    if "compiled" in results:
        print(f"  speedup: {results['python'] / results['compiled']:.2f}x")


if __name__ == "__main__":
    main()
