#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy twins.

Usage:
    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --repeat 5 --json results.json

Both implementations consume identical pre-generated arrays; the table
reports per-call wall time (best of ``--repeat``) and the speedup of the
jitted loop over the vectorized fallback.  Without numba installed only the
numpy column is produced.
"""

import argparse
import json
import time

import numpy as np

from hypoineq import accel


def _workloads(rng):
    n = 400_000
    u = rng.uniform(0.0, 40.0, n)
    zx = rng.standard_normal((n, 2))
    zy = rng.standard_normal((n, 2))
    tx = rng.standard_normal(n)
    ty = rng.standard_normal(n)
    pts = rng.uniform(-1.0, 1.0, size=(n, 3))
    ns, nt = 400, 256
    s = np.linspace(1e-3, 1.0, ns)
    ws = np.full(ns, 1.0 / ns)
    fvals = np.exp(-(s**2))
    cos_t = np.cos(np.linspace(1e-3, np.pi - 1e-3, nt))
    wt = np.full(nt, np.pi / nt)
    rout = np.geomspace(0.05, 4.0, 48)
    logr = np.log(np.geomspace(1e-5, 100.0, 400))
    logk = -1.3 * logr
    return {
        "phi_series": ((u, 2), {}),
        "phi_expdiff": ((u, 2), {}),
        "heis_triangle_max": ((zx, tx, zy, ty), {}),
        "kaplan_ball_count": ((pts,), {}),
        "conv2_radial_power": ((rout, s, ws, fvals, cos_t, wt, -1.0, 1e-9), {}),
        "conv2_radial_tab": ((rout, s, ws, fvals, cos_t, wt, logr, logk, 1e-9), {}),
    }


def _time(fn, args, kwargs, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", default=None)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    loads = _workloads(rng)

    rows = []
    print(f"numba available: {accel.NUMBA_AVAILABLE}  (active backend: {accel.BACKEND})")
    print(f"{'kernel':<22} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, (call_args, call_kwargs) in loads.items():
        loop_impl, numpy_impl = accel.IMPLEMENTATIONS[name]
        t_np = _time(numpy_impl, call_args, call_kwargs, args.repeat)
        if accel.NUMBA_AVAILABLE:
            from numba import njit

            jitted = njit(cache=True)(loop_impl)
            jitted(*call_args, **call_kwargs)  # compile outside timing
            t_nb = _time(jitted, call_args, call_kwargs, args.repeat)
            speed = t_np / t_nb
            print(f"{name:<22} {t_np*1e3:>8.2f}ms {t_nb*1e3:>8.2f}ms {speed:>8.2f}x")
        else:
            t_nb = None
            speed = None
            print(f"{name:<22} {t_np*1e3:>8.2f}ms {'-':>10} {'-':>9}")
        rows.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": speed})

    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba_available": accel.NUMBA_AVAILABLE, "results": rows}, fh,
                      indent=2)
        print(f"wrote {args.json}")


if __name__ == "__main__":
    main()
