#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the three hot paths (form evaluation, alternating refinement,
affine projection) on representative probe workloads and prints a table.
Run after a warm-up so numba compilation is excluded:

    python3 benchmarks/bench_kernels.py

Setting BIQUAD_DISABLE_NUMBA=1 makes the selected path the numpy one, in
which case the two columns coincide.
"""

import time

import numpy as np

from biquad import kernels
from biquad.core import MonicParams, monic_to_tensor


def timeit(fn, repeats):
    fn()  # warm-up (numba compiles here)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_eval_form(m, n, batch=2000):
    a4 = monic_to_tensor(MonicParams(m, n, "1/3", "-1/4", "1/8")).to_float()
    rng = np.random.default_rng(0)
    xs = rng.standard_normal((batch, m))
    ys = rng.standard_normal((batch, n))

    def run_selected():
        for t in range(batch):
            kernels.eval_form(a4, xs[t], ys[t])

    def run_numpy():
        for t in range(batch):
            kernels.eval_form_numpy(a4, xs[t], ys[t])

    return run_selected, run_numpy, f"eval_form {m}x{n} x{batch}"


def bench_refine(m, n, trials=200):
    a4 = monic_to_tensor(MonicParams(m, n, "-1/2", "-1/2", "1/4")).to_float()
    rng = np.random.default_rng(1)
    xs = rng.standard_normal((trials, m))
    ys = rng.standard_normal((trials, n))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)

    def run_selected():
        kernels.refine_batch(a4, xs, ys, 200, 1e-12, False)

    def run_numpy():
        kernels.refine_batch_numpy(a4, xs, ys, 200, 1e-12, False)

    return run_selected, run_numpy, f"refine_batch {m}x{n} x{trials}"


def bench_affine(m, n, iters=2000):
    a4 = monic_to_tensor(MonicParams(m, n, "1/3", "1/5", "-1/7")).to_float()
    rng = np.random.default_rng(2)
    G = rng.standard_normal((m * n, m * n))
    G = 0.5 * (G + G.T)

    def run_selected():
        for _ in range(iters):
            kernels.project_affine(G, a4)
            kernels.affine_residual(G, a4)

    def run_numpy():
        for _ in range(iters):
            kernels.project_affine_numpy(G, a4)
            kernels.affine_residual_numpy(G, a4)

    return run_selected, run_numpy, f"project+residual {m}x{n} x{iters}"


def main():
    print(f"numba enabled: {kernels.NUMBA_ENABLED}")
    cases = [
        bench_eval_form(3, 3),
        bench_eval_form(5, 5),
        bench_refine(3, 3),
        bench_refine(5, 4),
        bench_affine(3, 3),
        bench_affine(4, 4),
    ]
    print(f"{'workload':<30} {'selected':>12} {'numpy':>12} {'speedup':>9}")
    for selected, fallback, label in cases:
        t_sel = timeit(selected, 3)
        t_np = timeit(fallback, 3)
        ratio = t_np / t_sel if t_sel > 0 else float("inf")
        print(f"{label:<30} {t_sel * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms {ratio:>8.1f}x")


if __name__ == "__main__":
    main()
