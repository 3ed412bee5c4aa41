"""Benchmark the compiled kernel lane against the numpy fallback.

Times the kicked-map trajectory kernel and the elliptic-function kernels on
both lanes and reports the speedup together with the worst cross-lane
deviation.  Map agreement is only checked over a short horizon: for chaotic
parameters the two lanes diverge from last-bit rounding differences after a
few dozen steps, so a long-horizon comparison would measure chaos, not
correctness.

Run from the repository root::

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rotor_caustics import _kernels

TWO_PI = 2.0 * np.pi


def best_time(func, repeats):
    """Best-of-``repeats`` wall time of ``func()`` in seconds."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - start)
    return best


def circular_gap(a, b):
    """Largest distance between two angle arrays measured on the circle."""
    gap = np.abs(np.mod(a, TWO_PI) - np.mod(b, TWO_PI))
    return float(np.minimum(gap, TWO_PI - gap).max())


def bench_map_large(fast, slow, repeats, rng):
    n_seeds, n_steps = 20_000, 500
    thetas = rng.uniform(0.0, TWO_PI, n_seeds)
    ps = rng.uniform(-1.0, 1.0, n_seeds)
    args = (thetas, ps, 0.8, 2.5, n_steps, True)

    t_fast = best_time(lambda: fast.map_trajectories(*args), repeats)
    t_slow = best_time(lambda: slow.map_trajectories(*args), repeats)

    # agreement over a short horizon only (see module docstring)
    short = (thetas[:256], ps[:256], 0.8, 2.5, 12, True)
    ref_theta, ref_p = slow.map_trajectories(*short)
    got_theta, got_p = fast.map_trajectories(*short)
    gap = max(
        circular_gap(got_theta, ref_theta),
        float(np.abs(got_p - ref_p).max()),
    )
    label = f"kicked map      {n_seeds} seeds x {n_steps} steps"
    return label, t_slow, t_fast, gap


def bench_map_small(fast, slow, repeats, rng):
    # the regime the library hits hardest: a handful of launch angles
    # iterated for thousands of steps, where per-step array overhead
    # dominates the vectorised lane
    n_seeds, n_steps = 8, 5_000
    thetas = rng.uniform(0.0, TWO_PI, n_seeds)
    ps = rng.uniform(-1.0, 1.0, n_seeds)
    args = (thetas, ps, 0.8, 2.5, n_steps, True)

    t_fast = best_time(lambda: fast.map_trajectories(*args), repeats)
    t_slow = best_time(lambda: slow.map_trajectories(*args), repeats)

    short = (thetas, ps, 0.8, 2.5, 12, True)
    ref_theta, ref_p = slow.map_trajectories(*short)
    got_theta, got_p = fast.map_trajectories(*short)
    gap = max(
        circular_gap(got_theta, ref_theta),
        float(np.abs(got_p - ref_p).max()),
    )
    label = f"kicked map      {n_seeds} seeds x {n_steps} steps"
    return label, t_slow, t_fast, gap


def bench_jacobi(fast, slow, repeats, rng):
    n = 1_000_000
    u = rng.uniform(-20.0, 20.0, n)
    k = rng.uniform(-0.999, 0.999, n)

    t_fast = best_time(lambda: fast.jacobi_batch(u, k), repeats)
    t_slow = best_time(lambda: slow.jacobi_batch(u, k), repeats)

    gap = max(
        float(np.abs(a - b).max())
        for a, b in zip(fast.jacobi_batch(u, k), slow.jacobi_batch(u, k))
    )
    return f"jacobi sn/cn/dn {n} points", t_slow, t_fast, gap


def bench_jacobi_small(fast, slow, repeats, rng):
    # many calls on curve-sized batches, as the caustic-curve builder does
    n_points, n_calls = 64, 2_000
    u = rng.uniform(-20.0, 20.0, n_points)
    k = rng.uniform(-0.999, 0.999, n_points)

    def run(lane):
        for _ in range(n_calls):
            lane.jacobi_batch(u, k)

    t_fast = best_time(lambda: run(fast), repeats)
    t_slow = best_time(lambda: run(slow), repeats)

    gap = max(
        float(np.abs(a - b).max())
        for a, b in zip(fast.jacobi_batch(u, k), slow.jacobi_batch(u, k))
    )
    return f"jacobi sn/cn/dn {n_points} points x {n_calls} calls", t_slow, t_fast, gap


def bench_complete_k(fast, slow, repeats, rng):
    n = 1_000_000
    k = rng.uniform(0.0, 0.999, n)

    t_fast = best_time(lambda: fast.complete_k_batch(k), repeats)
    t_slow = best_time(lambda: slow.complete_k_batch(k), repeats)

    gap = float(np.abs(fast.complete_k_batch(k) - slow.complete_k_batch(k)).max())
    return f"complete K(k)   {n} points", t_slow, t_fast, gap


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--repeats", type=int, default=3, help="timing repeats per workload (best is kept)"
    )
    parser.add_argument("--seed", type=int, default=2024, help="workload RNG seed")
    args = parser.parse_args(argv)

    try:
        fast = _kernels.get_backend("compiled")
    except ImportError:
        print("compiled lane not built; nothing to compare against the fallback")
        return 1
    slow = _kernels.get_backend("fallback")

    rng = np.random.default_rng(args.seed)
    print(f"active lane at import time: {_kernels.backend_name()}")
    print(f"{'workload':<44} {'fallback':>10} {'compiled':>10} {'speedup':>8} {'max dev':>9}")
    benches = (
        bench_map_small,
        bench_map_large,
        bench_jacobi_small,
        bench_jacobi,
        bench_complete_k,
    )
    for bench in benches:
        label, t_slow, t_fast, gap = bench(fast, slow, args.repeats, rng)
        print(
            f"{label:<44} {t_slow * 1e3:>8.1f}ms {t_fast * 1e3:>8.1f}ms"
            f" {t_slow / t_fast:>7.1f}x {gap:>9.1e}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
