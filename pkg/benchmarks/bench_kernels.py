"""Compare the numba and numpy kernel paths.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths run on identical inputs; results are checked equal before timing.
"""

import argparse
import time

import numpy as np

from milnor_forge import _kernels
from milnor_forge.groups import group_ring, steinberg_idempotent, _integer_terms
from milnor_forge.module import build_module


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_rref(repeat):
    rng = np.random.default_rng(0)
    cases = [("random 200x200 mod 3", rng.integers(0, 3, (200, 200)), 3),
             ("random 400x300 mod 2", rng.integers(0, 2, (400, 300)), 2)]
    mod = build_module(2, 3)
    cases.append(("Q_1 on L(2,3), 1344x1344", mod.operators[1], 2))
    for name, A, p in cases:
        a = _kernels.rref(A, p, numba=True)
        b = _kernels.rref(A, p, numba=False)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        tn = best_of(lambda: _kernels.rref(A, p, numba=True), repeat)
        tp = best_of(lambda: _kernels.rref(A, p, numba=False), repeat)
        print(f"rref      {name:28s} numba {tn * 1e3:9.2f} ms   numpy {tp * 1e3:9.2f} ms   x{tp / tn:6.1f}")


def bench_convolve(repeat):
    for p, n, k in [(2, 3, 0), (3, 2, 1), (7, 1, 3)]:
        ring = group_ring(p, n)
        e = steinberg_idempotent(p, n, k)
        idx, exp, val, _ = _integer_terms(e)
        terms = (idx, exp, np.array(val, dtype=np.int64))
        args = (terms, terms, ring.table, 2 * ring.m - 1)
        a = _kernels.convolve(*args, numba=True)
        b = _kernels.convolve(*args, numba=False)
        assert np.array_equal(a, b)
        tn = best_of(lambda: _kernels.convolve(*args, numba=True), repeat)
        tp = best_of(lambda: _kernels.convolve(*args, numba=False), repeat)
        name = f"e_{k} * e_{k}, GL_{n}(F_{p})"
        print(f"convolve  {name:28s} numba {tn * 1e3:9.2f} ms   numpy {tp * 1e3:9.2f} ms   x{tp / tn:6.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    bench_rref(args.repeat)
    bench_convolve(args.repeat)


if __name__ == "__main__":
    main()
