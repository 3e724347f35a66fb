"""Compare the compiled rank-counting kernel against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--primes 5 7 11 13 17] [--r 2]

The counting loop dominates the finite-field intersection dimensions, so this
is the benchmark that justifies shipping the extension.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mbrank import kernels_py  # noqa: E402
from mbrank.catalog import load_catalog  # noqa: E402
from mbrank.exact import GF  # noqa: E402
from mbrank.tensor import slices  # noqa: E402

try:
    from mbrank import _kernels

    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False


def int_slices(name: str, direction: str, p: int):
    cat = load_catalog()
    gf = GF(p)
    sl = slices(cat.tensor_of(name), direction)
    return [[[gf.from_fraction(s[i, j]) for j in range(s.cols)] for i in range(s.rows)] for s in sl]


def bench(fn, sl, p, r, repeat=1):
    best = None
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(sl, p, r)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return value, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7, 11, 13, 17])
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--tensor", default="T_{1,8}")
    args = ap.parse_args()
    print(f"tensor {args.tensor}, direction A, rank threshold {args.r}")
    header = f"{'p':>4} {'count':>10} {'numpy':>10}"
    if HAVE_EXT:
        header += f" {'cython':>10} {'speedup':>8}"
    print(header)
    for p in args.primes:
        sl = int_slices(args.tensor, "A", p)
        n_py, t_py = bench(kernels_py.count_low_rank, sl, p, args.r)
        line = f"{p:>4} {n_py:>10} {t_py:>9.3f}s"
        if HAVE_EXT:
            n_cy, t_cy = bench(_kernels.count_low_rank, sl, p, args.r)
            assert n_cy == n_py, "backends disagree"
            line += f" {t_cy:>9.3f}s {t_py / t_cy:>7.1f}x"
        print(line)
    if not HAVE_EXT:
        print("compiled kernel not available; showing fallback only")


if __name__ == "__main__":
    main()
