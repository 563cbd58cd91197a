"""Time the compiled cycle kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from coolbound import _backend, _kernels_py


def _cases(rng):
    p = rng.dirichlet(np.ones(5))
    up, down = np.zeros(5), np.zeros(5)
    up[1:], down[1:] = 0.45, 0.05
    q = rng.dirichlet(np.ones(8))
    star = np.cumsum(np.sort(p)[::-1])
    vals = rng.dirichlet(np.ones(8))
    levels = np.repeat(np.arange(4), 2).astype(np.int64)
    return {
        "run_swap (d=5, to fixed point)":
            lambda k: k.run_swap(p.copy(), up, down, True, 1e-300, 2000, star),
        "run_optimal (d=5x8, to fixed point)":
            lambda k: k.run_optimal(p.copy(), q, up, down, 1e-300, 500, star),
        "perm_max_prefix (8! placements)":
            lambda k: k.perm_max_prefix(vals, levels, 4),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not _backend.COMPILED:
        raise SystemExit("compiled kernels are not built; reinstall with a C compiler available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'compiled':>12s} {'python':>12s} {'speedup':>9s}")
    for name, fn in _cases(rng).items():
        fast = min(timeit.repeat(lambda: fn(_backend.kernels), number=1, repeat=args.repeat))
        slow = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        print(f"{name:34s} {fast * 1e3:10.3f}ms {slow * 1e3:10.3f}ms {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
