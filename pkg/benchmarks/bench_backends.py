#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths (Jacobian assembly and rank elimination) plus the raw
convolution kernel on representative workloads, and checks that both backends
produce identical results.  Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import neurodim._kernel as kernel
import neurodim._purekernels as pure
from neurodim import Architecture, Prime
from neurodim._engine import jacobian_matrix, plan_for, sample_weights

P = Prime(2**31 - 1)

WORKLOADS = [
    ("depth-7 counterexample", Architecture((2, 3, 4, 5, 4, 6, 4, 1), 2)),
    ("depth-7 widest decrement", Architecture((2, 3, 4, 4, 4, 6, 4, 1), 2)),
    ("depth-9 two-output", Architecture((2, 3, 4, 4, 10, 17, 11, 12, 4, 2), 2)),
    ("three variables, r=2", Architecture((3, 6, 4, 1), 2)),
]


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_jacobian_and_rank(repeat: int) -> None:
    import neurodim._engine as engine

    print(f"{'workload':<28} {'jacobian(ms)':>24} {'rank(ms)':>24}")
    print(f"{'':<28} {'compiled':>11} {'fallback':>12} {'compiled':>11} {'fallback':>12}")
    for label, arch in WORKLOADS:
        plan = plan_for(arch.widths, arch.r)
        mats = sample_weights(arch, P, seed=0, trial=0)

        engine.K = kernel
        jac_fast = jacobian_matrix(plan, mats, P.p)
        t_jac_fast = time_call(lambda: jacobian_matrix(plan, mats, P.p), repeat)
        t_rank_fast = time_call(lambda: kernel.rank_mod(jac_fast.copy(), P.p), repeat)
        rank_fast = kernel.rank_mod(jac_fast.copy(), P.p)

        engine.K = pure
        jac_slow = jacobian_matrix(plan, mats, P.p)
        t_jac_slow = time_call(lambda: jacobian_matrix(plan, mats, P.p), repeat)
        t_rank_slow = time_call(lambda: pure.rank_mod(jac_slow.copy(), P.p), repeat)
        rank_slow = pure.rank_mod(jac_slow.copy(), P.p)
        engine.K = kernel

        assert np.array_equal(jac_fast, jac_slow), f"{label}: backends disagree"
        assert rank_fast == rank_slow
        print(
            f"{label:<28} {t_jac_fast * 1e3:>11.2f} {t_jac_slow * 1e3:>12.2f}"
            f" {t_rank_fast * 1e3:>11.2f} {t_rank_slow * 1e3:>12.2f}   rank={rank_fast}"
        )


def bench_convolution(repeat: int) -> None:
    rng = np.random.default_rng(0)
    print(f"\n{'convolution':<28} {'compiled(ms)':>12} {'fallback(ms)':>13}")
    for rows, ng, nt in ((110, 33, 33), (619, 129, 129)):
        g = rng.integers(0, P.p, size=ng)
        t = rng.integers(0, P.p, size=(rows, nt))
        out_fast = np.zeros((rows, ng + nt - 1), dtype=np.int64)
        out_slow = np.zeros_like(out_fast)
        t_fast = time_call(lambda: kernel.conv_many_acc(out_fast, g, t, P.p), repeat)
        t_slow = time_call(lambda: pure.conv_many_acc(out_slow, g, t, P.p), repeat)
        print(f"{f'{rows} cols x conv({ng},{nt})':<28} {t_fast * 1e3:>12.2f} {t_slow * 1e3:>13.2f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="repetitions; best time wins")
    args = parser.parse_args()
    if kernel.BACKEND != "compiled":
        print("note: compiled extension unavailable; timing fallback against itself")
    bench_jacobian_and_rank(args.repeat)
    bench_convolution(args.repeat)


if __name__ == "__main__":
    main()
