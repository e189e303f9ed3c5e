#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

import thermotrack.kernels._py as py_impl

try:
    import thermotrack.kernels._core as core_impl
except ImportError:
    core_impl = None


def bench(fn, args_iter, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in args_iter:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best / len(args_iter)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    masks = [(rng.random((12, 16)) < rng.uniform(0.1, 0.6),) for _ in range(500)]
    hists = [
        (np.bincount(rng.integers(0, 256, 192), minlength=256),) for _ in range(500)
    ]
    frames = [(rng.uniform(0, 255, (12, 16)), 600, 800) for _ in range(20)]

    cases = [
        ("label_components (16x12 mask)", "label_components", masks),
        ("otsu_threshold (256-bin hist)", "otsu_threshold", hists),
        ("bilinear_resize (16x12 -> 800x600)", "bilinear_resize", frames),
    ]

    print(f"{'kernel':<36}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for name, attr, data in cases:
        t_py = bench(getattr(py_impl, attr), data, args.repeats)
        if core_impl is not None:
            t_c = bench(getattr(core_impl, attr), data, args.repeats)
            print(f"{name:<36}{t_py * 1e6:>10.1f}us{t_c * 1e6:>10.1f}us"
                  f"{t_py / t_c:>9.1f}x")
        else:
            print(f"{name:<36}{t_py * 1e6:>10.1f}us{'n/a':>12}{'n/a':>10}")

    if core_impl is None:
        print("\ncompiled extension not available; build with "
              "`pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
