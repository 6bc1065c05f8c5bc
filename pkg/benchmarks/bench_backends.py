"""Compare the compiled kernels against the numpy reference backend.

Times three representative workloads: a deterministic trajectory at the
fig1 scale, a stochastic trajectory at the fig3 scale, and a batch of
threshold scans like one Monte Carlo worker block. Run with

    python3 benchmarks/bench_backends.py [--repeats N] [--paths N]
"""

import argparse
import math
import time

import numpy as np

from winfree import NoiseSpec, figure_preset, generate_brownian
from winfree.backends import _ref

try:
    from winfree.backends import _fast
except ImportError:
    _fast = None


def best_of(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workload_trajectory(cfg):
    p = cfg.params
    return (cfg.initial.theta, cfg.initial.omega, p.nu, p.kappa * cfg.coupling_scale,
            p.gamma, cfg.grid.dt, cfg.grid.steps)


def workload_stochastic(cfg, seed=0):
    p = cfg.params
    sigma_vals = cfg.noise.values_on(cfg.grid.times()[:-1])
    dB = generate_brownian(seed, cfg.grid).increments
    return (cfg.initial.theta, cfg.initial.omega, p.nu, p.kappa * cfg.coupling_scale,
            p.gamma, cfg.grid.dt, sigma_vals, dB)


def run_scan_batch(backend, cfg, n_paths):
    p = cfg.params
    sigma_vals = cfg.noise.values_on(cfg.grid.times()[:-1])
    threshold = cfg.monte_carlo.threshold
    sqrt_dt = math.sqrt(cfg.grid.dt)
    for k in range(n_paths):
        rng = np.random.Generator(np.random.Philox(key=[cfg.monte_carlo.master_seed, k]))
        dB = rng.standard_normal(cfg.grid.steps) * sqrt_dt
        backend.em_scan(cfg.initial.theta, cfg.initial.omega, p.nu,
                        p.kappa * cfg.coupling_scale, p.gamma, cfg.grid.dt,
                        sigma_vals, dB, threshold)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best is kept)")
    parser.add_argument("--paths", type=int, default=100, help="paths in the scan batch")
    args = parser.parse_args()

    fig1 = figure_preset("fig1")
    fig3 = figure_preset("fig3")

    cases = [
        ("euler_trajectory (n=21, 500 steps)",
         lambda b: b.euler_trajectory(*workload_trajectory(fig1))),
        ("em_trajectory    (n=21, 5000 steps)",
         lambda b: b.em_trajectory(*workload_stochastic(fig3))),
        (f"em_scan batch    ({args.paths} paths, 5000 steps)",
         lambda b: run_scan_batch(b, fig3, args.paths)),
    ]

    if _fast is None:
        print("compiled backend not built; timing the python backend only\n")
    header = f"{'workload':<40} {'python':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, runner in cases:
        t_ref = best_of(lambda: runner(_ref), args.repeats)
        if _fast is not None:
            t_fast = best_of(lambda: runner(_fast), args.repeats)
            print(f"{label:<40} {t_ref * 1e3:>8.2f}ms {t_fast * 1e3:>8.2f}ms {t_ref / t_fast:>7.1f}x")
        else:
            print(f"{label:<40} {t_ref * 1e3:>8.2f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
