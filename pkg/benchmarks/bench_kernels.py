#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot kernels at the register sizes the verification sweeps
actually hit (the 12-qubit family member dominates).  Run after an editable
install:

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from qdel import _kernels_py
from qdel.kernels import enable_heap_reuse

try:
    from qdel import _kernels_cy
except ImportError:
    _kernels_cy = None


def best_of(fn, repeats):
    fn()  # warm up buffers and caches
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def row(label, size, py_s, cy_s):
    if cy_s is None:
        print(f"{label:<22} {size:<14} {py_s * 1e3:>10.2f} {'-':>10} {'-':>8}")
    else:
        print(
            f"{label:<22} {size:<14} {py_s * 1e3:>10.2f} {cy_s * 1e3:>10.2f} "
            f"{py_s / cy_s:>7.1f}x"
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    enable_heap_reuse()
    rng = np.random.default_rng(args.seed)
    if _kernels_cy is None:
        print("compiled extension not available; timing the numpy fallback only")
    print(f"{'kernel':<22} {'size':<14} {'numpy ms':>10} {'compiled':>10} {'speedup':>8}")

    for half_qubits in (7, 9, 11):
        d = 1 << half_qubits
        branches = rng.standard_normal((2, d)) + 1j * rng.standard_normal((2, d))
        py = best_of(lambda: _kernels_py.branch_outer_sum(branches), args.repeats)
        cy = (
            best_of(lambda: _kernels_cy.branch_outer_sum(branches), args.repeats)
            if _kernels_cy
            else None
        )
        row("branch_outer_sum", f"2 x {d}", py, cy)

    for n in (6, 8, 10):
        left, mid, right = 1 << (n // 2), 2, 1 << (n - n // 2 - 1)
        dim = left * mid * right
        rho = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        py = best_of(lambda: _kernels_py.partial_trace_dense(rho, left, mid, right), args.repeats)
        cy = (
            best_of(lambda: _kernels_cy.partial_trace_dense(rho, left, mid, right), args.repeats)
            if _kernels_cy
            else None
        )
        row("partial_trace_dense", f"{dim} x {dim}", py, cy)


if __name__ == "__main__":
    main()
