"""Time the numba loop kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--repeat 5]

With COSET_RESONANCE_DISABLE_NUMBA=1 the loop forms run as plain Python,
so expect them to be slow; the numpy column is the fallback path.
"""
import argparse
import math
import time

import numpy as np

from coset_resonance import kernels
from coset_resonance.modarith import get_context


def _best(fn, args, repeat):
    fn(*args)  # warm-up (includes JIT compilation)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(0)
    ctx = get_context(100003)
    q, phi = ctx.q, ctx.phi
    ks = np.arange(0, phi, 7, dtype=np.int64)
    support = np.arange(1, 2001, dtype=np.int64)
    weights = rng.standard_normal(support.size) + 0j
    r = np.zeros(4001, dtype=np.complex128)
    r[1:] = rng.standard_normal(4000)
    hs = np.array(sorted(int(h) for h in ctx.power[np.arange(6) * (phi // 6)]), dtype=np.int64)
    mults = np.arange(1, 200, dtype=np.int64)
    x = np.geomspace(1e-6, 200.0, 200_000)
    return [
        ("power_table", (ctx.g, q)),
        ("linear_forms", (ks, ctx.dlog_table[support], weights, ctx.roots)),
        ("congruence_pair_sum", (mults, 1.0 / np.sqrt(mults) + 0j, r, q)),
        ("congruence_witness", (hs[hs != 1], 60, 40, q)),
        ("upper_gamma", (0.25, x, math.gamma(0.25))),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"backend in use: {kernels.BACKEND}")
    print(f"{'kernel':<22}{'loop [s]':>12}{'numpy [s]':>12}{'ratio':>9}{'max diff':>12}")
    for name, fargs in cases():
        loop = getattr(kernels, f"_{name}_loop")
        vec = getattr(kernels, f"_{name}_numpy")
        t_loop = _best(loop, fargs, args.repeat)
        t_vec = _best(vec, fargs, args.repeat)
        a, b = np.asarray(loop(*fargs)), np.asarray(vec(*fargs))
        diff = float(np.max(np.abs(a - b))) if a.size else 0.0
        print(f"{name:<22}{t_loop:>12.5f}{t_vec:>12.5f}{t_vec / t_loop:>9.2f}{diff:>12.3g}")


if __name__ == "__main__":
    main()
