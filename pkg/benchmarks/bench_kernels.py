#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot paths (double-double axpy, the shifted residual
behind the refined resolvent solves, and the dense Toeplitz matvec that
drives kernel semigroups), plus the FFT Toeplitz path both backends
share. Run:

    python3 benchmarks/bench_kernels.py [--sizes 64,128,256,401,1024]
"""

import argparse
import time

import numpy as np

from feller_kit.kernels import _kernels_py as kpy

try:
    from feller_kit.kernels import _kernels_c as kc
except ImportError:
    kc = None


def best_time(fn, args, target=0.02, repeat=5):
    """Best per-call seconds over `repeat` samples of an adaptive batch."""
    loops = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(loops):
            fn(*args)
        span = time.perf_counter() - t0
        if span >= target / 4 or loops >= 1 << 20:
            break
        loops *= 4
    best = span / loops
    for _ in range(repeat - 1):
        t0 = time.perf_counter()
        for _ in range(loops):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / loops)
    return best


def axpy_args(rng, n):
    acc_h, acc_l, gh, gl = (rng.standard_normal(n) for _ in range(4))
    return (acc_h, acc_l, 0.7, 1e-18, gh, gl * 1e-17)


def residual_args(rng, n):
    q = rng.standard_normal((n, n))
    xh = rng.standard_normal(n)
    xl = xh * 1e-17
    f = rng.standard_normal(n)
    return (q, 3.0, 1e-17, xh, xl, f)


def toeplitz_args(rng, n):
    k = np.exp(-0.05 * np.arange(n, dtype=float))
    return (k, rng.standard_normal(n))


CASES = (
    ("dd_axpy", axpy_args),
    ("dd_shifted_residual", residual_args),
    ("toeplitz_matvec_direct", toeplitz_args),
    ("toeplitz_matvec_fft", toeplitz_args),
)


def fmt(seconds):
    return f"{seconds * 1e6:10.1f}"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--sizes",
        default="64,128,256,401,1024",
        help="comma-separated problem sizes",
    )
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rng = np.random.default_rng(42)

    if kc is None:
        print("compiled backend not available; timing the fallback only")
    print(f"{'kernel':24s} {'n':>5s} {'python us':>10s} {'c us':>10s} {'speedup':>8s}")
    for name, make in CASES:
        for n in sizes:
            call_args = make(rng, n)
            t_py = best_time(getattr(kpy, name), call_args)
            row = f"{name:24s} {n:5d} {fmt(t_py)}"
            if kc is not None and hasattr(kc, name):
                t_c = best_time(getattr(kc, name), call_args)
                row += f" {fmt(t_c)} {t_py / t_c:7.2f}x"
            else:
                row += f" {'-':>10s} {'-':>8s}"
            print(row)
        print()


if __name__ == "__main__":
    main()
