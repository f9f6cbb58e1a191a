"""Compiled vs numpy kernels: field evaluation, compensated sums, one theorem check.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]
"""
import argparse
import timeit

import numpy as np

from calabi_workbench import kernels
from calabi_workbench.cover import random_field
from calabi_workbench.verify import VerifySettings, theorem_check


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(backend, u, settings, repeat):
    # swap the module-level implementation for the duration of the timing
    saved = kernels._impl
    kernels._impl = kernels._select(backend)
    try:
        return best_of(lambda: theorem_check(u, settings), repeat)
    finally:
        kernels._impl = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled kernels not built; nothing to compare")
        return

    rng = np.random.default_rng(0)
    u = random_field(1, 0.05)
    m, p, amp, ph = u._expanded
    rows = []
    for n in (10_000, 100_000, 1_000_000):
        x, y = rng.uniform(0, 1, n), rng.uniform(0, 1, n)
        t = {b: best_of(lambda b=b: kernels.eval_modes(x, y, m, p, amp, ph, backend=b), args.repeat)
             for b in ("python", "cython")}
        rows.append((f"eval_modes n={n}", t["python"], t["cython"]))
        # grid rows share their height, which the compiled kernel exploits
        side = int(np.sqrt(n))
        X, Y = np.meshgrid(np.arange(side) / side, np.arange(side) / side)
        t = {b: best_of(lambda b=b: kernels.eval_modes(X, Y, m, p, amp, ph, backend=b), args.repeat)
             for b in ("python", "cython")}
        rows.append((f"eval_modes grid {side}x{side}", t["python"], t["cython"]))
    a = rng.standard_normal(1_000_000)
    t = {b: best_of(lambda b=b: kernels.compensated_sum(a, backend=b), args.repeat) for b in ("python", "cython")}
    rows.append(("compensated_sum n=1000000", t["python"], t["cython"]))
    st = VerifySettings()
    rows.append(("theorem_check (defaults)", end_to_end("python", u, st, args.repeat),
                 end_to_end("cython", u, st, args.repeat)))

    print(f"{'case':32s} {'numpy [s]':>10s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, tp, tc in rows:
        print(f"{name:32s} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
