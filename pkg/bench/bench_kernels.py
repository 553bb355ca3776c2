"""Timing comparison of the numba and numpy kernel backends.

Run from the repository root:

    python bench/bench_kernels.py [--repeat 7]

Each kernel is timed on a fixed workload with best-of-repeats reported for
both backends regardless of which one the library itself selected.  The
numba figures exclude compilation (a warmup call runs first).
"""

import argparse
import timeit

import numpy as np

from smoothlot import _kernels


def workloads(rng):
    y_wide = rng.standard_normal((2048, 1000))
    y_small = rng.standard_normal((20_000, 50))
    p = np.sort(rng.random(500))
    p = 50.0 * p / p.sum()
    cum = np.concatenate([[0.0], np.cumsum(p)])
    cum[-1] = 50.0
    offsets = rng.random(100_000)
    return [
        ("row_kth_largest (2048x1000, k=100)", "_row_kth_largest", (y_wide, 100)),
        ("topk_counts     (20000x50,  k=10)", "_topk_counts", (y_small, 10)),
        ("systematic      (1e5 draws, n=500)", "_systematic_batch", (cum, offsets, 50)),
    ]


def best_time(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"library backend: {_kernels.BACKEND}")
    header = f"{'kernel':<38} {'numpy':>10} {'numba':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for label, stem, call_args in workloads(rng):
        np_fn = getattr(_kernels, stem + "_np")
        t_np = best_time(np_fn, call_args, args.repeat)
        if _kernels.HAS_NUMBA:
            nb_fn = getattr(_kernels, stem + "_nb")
            nb_fn(*call_args)  # compile outside the timed region
            t_nb = best_time(nb_fn, call_args, args.repeat)
            print(f"{label:<38} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>8.1f}x")
        else:
            print(f"{label:<38} {t_np * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>9}")


if __name__ == "__main__":
    main()
