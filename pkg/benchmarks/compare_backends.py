#!/usr/bin/env python3
"""Benchmark the compiled orbit kernels against the pure-Python fallback.

Also asserts that the two backends produce bit-identical grids, which is the
contract that makes the fallback a drop-in replacement.

Usage: python benchmarks/compare_backends.py [--size 256] [--max-iter 400]
"""

import argparse
import time

import numpy as np

from chebhalley.backend import load_backend
from chebhalley.dynamics import GridWindow, _kernel_args, _target_arrays
from chebhalley.maps import circle_map, family_map, roots_of_unity


def run_tile(impl, args, t_re, t_im, win, max_iter, radius):
    size = win.width * win.height
    kind = np.zeros(size, np.uint8)
    index = np.full(size, -1, np.int32)
    iters = np.zeros(size, np.int32)
    rre = np.zeros(size)
    rim = np.zeros(size)
    t0 = time.perf_counter()
    impl.classify_tile(*args, t_re, t_im,
                       win.re0, win.re_step, win.im0, win.im_step,
                       0, win.width, 0, win.height, win.width,
                       max_iter, 1e-9, radius, kind, index, iters, rre, rim)
    elapsed = time.perf_counter() - t0
    return elapsed, (kind, index, iters, rre, rim), int(iters.sum())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--max-iter", type=int, default=400)
    opts = ap.parse_args()

    try:
        cython_impl = load_backend("cython")
    except ImportError:
        print("compiled backend not built; run pip install -e . first")
        return 1
    python_impl = load_backend("python")

    cases = [
        ("main family n=3, alpha=10", family_map(3, 10.0), roots_of_unity(3),
         0.0, GridWindow(-10, 10, -10, 10, opts.size, opts.size)),
        ("main family n=3, alpha=0.2+1.592i", family_map(3, 0.2 + 1.592j),
         roots_of_unity(3), 0.0, GridWindow(-2, 2, -2, 2, opts.size, opts.size)),
        ("circle model a=16", circle_map(16.0), [0j], 32.0,
         GridWindow(-40, 40, -40, 40, opts.size, opts.size)),
    ]

    print(f"{opts.size}x{opts.size} grid, max_iter={opts.max_iter}\n")
    for name, spec, targets, radius, win in cases:
        args = _kernel_args(spec)
        t_re, t_im = _target_arrays(targets)
        t_cy, out_cy, iters = run_tile(cython_impl, args, t_re, t_im, win,
                                       opts.max_iter, radius)
        t_py, out_py, _ = run_tile(python_impl, args, t_re, t_im, win,
                                   opts.max_iter, radius)
        identical = all(np.array_equal(a, b) for a, b in zip(out_cy, out_py))
        rate_cy = iters / t_cy / 1e6
        rate_py = iters / t_py / 1e6
        print(f"{name}")
        print(f"  cython: {t_cy * 1e3:8.1f} ms  ({rate_cy:7.1f} M iters/s)")
        print(f"  python: {t_py * 1e3:8.1f} ms  ({rate_py:7.1f} M iters/s)")
        print(f"  speedup: {t_py / t_cy:6.1f}x   bit-identical: {identical}")
        if not identical:
            print("  ERROR: backends disagree")
            return 1
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
