#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import random
import time

import numpy as np

from ringlab import kernels
from ringlab.algebras import matrix_algebra


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    rng = random.Random(0)
    mats = {}
    for p, rows, cols, n in [(2, 8, 8, 400), (3, 12, 9, 400), (251, 16, 16, 200)]:
        ms = [
            np.array(
                [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], dtype=np.int64
            )
            for _ in range(n)
        ]
        mats[(p, rows, cols)] = ms
    m3f5 = matrix_algebra(3, 5)
    nrows = 4096
    x = np.array([[rng.randrange(5) for _ in range(9)] for _ in range(nrows)], dtype=np.int64)
    y = np.array([[rng.randrange(5) for _ in range(9)] for _ in range(nrows)], dtype=np.int64)
    return mats, (x, y, m3f5.table)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    mats, (x, y, table) = workloads()
    print(f"backends available: {', '.join(backends)}")
    print(f"{'workload':38s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for key, ms in mats.items():
        p, rows, cols = key
        times = {}
        for name in backends:
            impl = kernels.get_backend(name)

            def run(impl=impl):
                for m in ms:
                    impl.rref(m, p)
                    impl.nullspace(m, p)

            times[name] = bench(run, args.repeats)
        label = f"rref+nullspace {len(ms)}x {rows}x{cols} mod {p}"
        row = f"{label:38s}" + "".join(f"{times[b] * 1e3:10.1f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['python'] / times['c']:9.1f}x"
        print(row)
    times = {}
    for name in backends:
        impl = kernels.get_backend(name)
        times[name] = bench(lambda impl=impl: impl.batch_mul(x, y, table, 5), args.repeats)
    label = f"batch_mul {x.shape[0]}x dim-9 mod 5"
    row = f"{label:38s}" + "".join(f"{times[b] * 1e3:10.1f}ms" for b in backends)
    if len(backends) == 2:
        row += f"{times['python'] / times['c']:9.1f}x"
    print(row)


if __name__ == "__main__":
    main()
