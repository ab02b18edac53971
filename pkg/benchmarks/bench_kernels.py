#!/usr/bin/env python3
"""Benchmark the compiled dense kernels against the numpy fallback.

Each row times one full dense pipeline pass on a random state: the
Fourier matrix on every spatial qudit, path control on every photon, and
both register marginals.  Build the extension first
(``pip install -e . --no-build-isolation``); without it only the numpy
column is reported.

    python benchmarks/bench_kernels.py [--repeat 3] [--big]
"""

import argparse
import math
import time

import numpy as np

from hyperghz import _kernels_py

try:
    from hyperghz import _kernels
except ImportError:
    _kernels = None

SHAPES = [(2, 4), (3, 3), (2, 6), (3, 4), (4, 4), (2, 9), (3, 6), (2, 11)]
BIG_SHAPES = [(2, 12), (2, 13), (3, 8)]


def full_pass(impl, amps, d, n):
    idx = np.arange(d)
    fourier = np.ascontiguousarray(
        np.exp(2j * np.pi / d * np.outer(idx, idx)) / math.sqrt(d)
    )
    out = amps
    for axis in range(n):
        out = impl.apply_qudit_matrix(out, fourier, axis, d, 2 * n)
    for photon in range(n):
        out = impl.add_spatial_into_oam(out, d, n, photon)
    impl.register_probs(out, d, n, True)
    impl.register_probs(out, d, n, False)
    return out


def best_time(impl, amps, d, n, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        full_pass(impl, amps, d, n)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument(
        "--big", action="store_true", help="include states up to 2**26 amplitudes"
    )
    args = parser.parse_args()

    shapes = SHAPES + (BIG_SHAPES if args.big else [])
    rng = np.random.default_rng(0)

    print(f"numpy fallback vs compiled kernels (best of {args.repeat})")
    print()
    print("| d | n | amplitudes | numpy (s) | compiled (s) | speedup |")
    print("| --- | --- | --- | --- | --- | --- |")
    for d, n in shapes:
        size = d ** (2 * n)
        amps = rng.normal(size=size) + 1j * rng.normal(size=size)
        amps /= np.linalg.norm(amps)
        t_py = best_time(_kernels_py, amps, d, n, args.repeat)
        if _kernels is None:
            print(f"| {d} | {n} | {size} | {t_py:.4f} | not built | - |")
            continue
        t_cy = best_time(_kernels, amps, d, n, args.repeat)
        print(f"| {d} | {n} | {size} | {t_py:.4f} | {t_cy:.4f} | {t_py / t_cy:.2f}x |")

    sample = rng.normal(size=3**6) + 1j * rng.normal(size=3**6)
    if _kernels is not None:
        check = np.max(
            np.abs(
                full_pass(_kernels, sample, 3, 3) - full_pass(_kernels_py, sample, 3, 3)
            )
        )
        print()
        print(f"backend agreement on a d=3, n=3 state: max |diff| = {check:.3g}")


if __name__ == "__main__":
    main()
