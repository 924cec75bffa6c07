"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from mibc import _kernels_py

try:
    from mibc import _kernels
except ImportError:
    _kernels = None


def cases(n, rng):
    x = rng.uniform(0.0, 60.0, n)
    r1 = rng.normal(size=n) + 1j * rng.normal(size=n)
    r2 = rng.normal(size=n) + 1j * rng.normal(size=n)
    sent = rng.integers(0, 4, n)
    det = rng.integers(0, 4, n)
    return {
        "bessel_j01y01": lambda k: k.bessel_j01y01(x),
        "dpsk_decide": lambda k: k.dpsk_decide(r1, r2, 4),
        "count_errors": lambda k: k.count_errors(sent, det, 4),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, call in cases(args.size, rng).items():
        t_py = min(timeit.repeat(lambda: call(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<16}{t_py * 1e3:>12.2f}{'n/a':>12}{'':>10}")
            continue
        t_c = min(timeit.repeat(lambda: call(_kernels), number=1, repeat=args.repeat))
        print(f"{name:<16}{t_py * 1e3:>12.2f}{t_c * 1e3:>12.2f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
