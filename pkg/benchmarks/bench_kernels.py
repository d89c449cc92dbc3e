#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times each raster kernel on synthetic frames and prints a side-by-side
table.  The composite row (gray -> laplacian -> variance) is the per-frame
scoring path that dominates a full-mission triage run.
"""

import argparse
import time

import numpy as np

from panotriage import kernels

LAPLACIAN = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def build_cases(height, width, seed):
    rng = np.random.RandomState(seed)
    gray = np.ascontiguousarray(rng.rand(height, width) * 255)
    gray2 = np.ascontiguousarray(rng.rand(height, width) * 255)
    rgb = rng.randint(0, 256, (height, width, 3), dtype=np.uint8)
    flat = np.ascontiguousarray(gray.ravel())
    kernel = np.ascontiguousarray(LAPLACIAN)

    def score_frame(mod):
        lap = mod.convolve3x3(mod.rgb_to_gray(rgb), kernel)
        return mod.variance(np.ascontiguousarray(lap.ravel()))

    return [
        ("rgb_to_gray", lambda mod: mod.rgb_to_gray(rgb)),
        ("convolve3x3", lambda mod: mod.convolve3x3(gray, kernel)),
        ("variance", lambda mod: mod.variance(flat)),
        ("box_resize 64x32", lambda mod: mod.box_resize(gray, 32, 64)),
        ("mean_abs_diff", lambda mod: mod.mean_abs_diff(gray, gray2)),
        ("score frame (composite)", score_frame),
    ]


def main():
    parser = argparse.ArgumentParser(description="Compare kernel backends")
    parser.add_argument("--height", type=int, default=720)
    parser.add_argument("--width", type=int, default=1440)
    parser.add_argument("--repeats", type=int, default=5, help="best-of-N timing")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = kernels.available_backends()
    names = list(backends)
    print(f"frame {args.width}x{args.height}, best of {args.repeats} runs, "
          f"selected backend: {kernels.BACKEND}")
    header = f"{'kernel':<26}" + "".join(f"{name:>12}" for name in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, call in build_cases(args.height, args.width, args.seed):
        timings = [time_call(lambda m=backends[name]: call(m), args.repeats) for name in names]
        row = f"{label:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in timings)
        if len(timings) == 2 and timings[1] > 0:
            row += f"{timings[0] / timings[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
