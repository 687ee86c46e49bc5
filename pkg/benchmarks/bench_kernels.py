"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--contexts 2000] [--sketches 900] [--codes 1000000]

Both backends are imported directly, so the ``SEMSKETCH_PURE_PYTHON``
switch does not matter here. Results are checked for equality before timing.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from semsketch import _kernels_py
from semsketch.kernels import pack_rows

try:
    from semsketch import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_rows(rng: np.random.Generator, n_rows: int, vocab: int, size: int) -> list[np.ndarray]:
    return [rng.choice(vocab, size=rng.integers(1, size + 1), replace=False) for _ in range(n_rows)]


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--contexts", type=int, default=2000)
    p.add_argument("--sketches", type=int, default=900)
    p.add_argument("--vocab", type=int, default=20000)
    p.add_argument("--codes", type=int, default=1_000_000)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    if _kernels_c is None:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
        return 1

    rng = np.random.default_rng(args.seed)
    a_ptr, a_items = pack_rows(random_rows(rng, args.contexts, args.vocab, 120))
    b_ptr, b_items = pack_rows(random_rows(rng, args.sketches, args.vocab, 80))
    codes = np.sort(rng.integers(0, args.codes // 10, size=args.codes))

    cases = {
        f"intersection_counts {args.contexts}x{args.sketches}": lambda m: m.intersection_counts(a_ptr, a_items, b_ptr, b_items),
        f"segment_counts n={args.codes}": lambda m: m.segment_counts(codes),
    }
    print(f"{'kernel':<36} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, case in cases.items():
        got_c, got_py = case(_kernels_c), case(_kernels_py)
        same = all(np.array_equal(x, y) for x, y in zip(got_c, got_py)) if isinstance(got_c, tuple) else np.array_equal(got_c, got_py)
        if not same:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        t_c = best_of(lambda: case(_kernels_c), args.repeat)
        t_py = best_of(lambda: case(_kernels_py), args.repeat)
        print(f"{name:<36} {t_c:>10.4f} {t_py:>10.4f} {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
