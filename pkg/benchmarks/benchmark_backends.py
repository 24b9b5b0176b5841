#!/usr/bin/env python3
"""Time the compiled stepping kernels against the pure-python reference.

Runs the same adapted trajectory (inertia diag(1,10,100), Pi0 = (1,1),
dt = 0.01) through both backends and reports per-step cost.  The aim is to
show the compiled path keeps a 180 000-step run well under interactive
budgets; the python path is the readable reference, not the fast one.

Usage: python3 benchmarks/benchmark_backends.py [--steps N]
"""
import argparse
import time

import numpy as np

from suslov import _purepy

try:
    from suslov import _kernels
except ImportError:
    _kernels = None


def run(impl, nsteps: int, kind_code: int):
    out = impl.run_adapted(np.eye(3), np.array([1.0, 1.0]),
                           np.array([1.0, 10.0, 100.0]), 0.01, nsteps,
                           kind_code, 1e-12, 25)
    if out[0] != -1:
        raise RuntimeError(f"run failed at step {out[0]}")
    return out


def timed(impl, nsteps: int, kind_code: int):
    t0 = time.perf_counter()
    out = run(impl, nsteps, kind_code)
    return time.perf_counter() - t0, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20000)
    args = ap.parse_args()
    kinds = [("exp", 0), ("cay", 1)]

    print(f"adapted run, {args.steps} steps, dt=0.01")
    print(f"{'backend':<10} {'kind':<5} {'time [s]':>10} {'us/step':>10}")
    results = {}
    for name, impl in [("python", _purepy)] + ([("compiled", _kernels)] if _kernels else []):
        for kname, kcode in kinds:
            el, out = timed(impl, args.steps, kcode)
            results[(name, kname)] = out
            print(f"{name:<10} {kname:<5} {el:>10.3f} {1e6 * el / args.steps:>10.2f}")

    if _kernels is None:
        print("compiled backend not built; python reference only")
        return
    for kname, _ in kinds:
        a = results[("python", kname)]
        b = results[("compiled", kname)]
        dPi = float(np.abs(a[4] - b[4]).max())
        dR = float(np.abs(a[3] - b[3]).max())
        print(f"agreement {kname}: max |dPi| = {dPi:.3e}, max |dR| = {dR:.3e}")


if __name__ == "__main__":
    main()
