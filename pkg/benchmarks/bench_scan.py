"""Compare the numba and numpy wavelength-scan kernels.

    python benchmarks/bench_scan.py [--points 3500] [--steps 2000] [--repeat 5]

The numba timing excludes the first (compiling) call, which is reported
separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from keiperli import _kernels


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=3500)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(12345)
    u = np.linspace(np.log(500), np.log(4000), args.points)
    y = np.cos(2 * np.pi * u / 0.44452) + 0.1 * rng.standard_normal(u.size)
    ls = np.geomspace(0.02, 2.0, args.steps)

    t_numpy = _best(lambda: _kernels.scan_rss(u, y, ls, "numpy"), args.repeat)
    print(f"numpy : {t_numpy * 1e3:9.2f} ms  ({args.points} points x {args.steps} wavelengths)")

    if _kernels._rss_numba is None:
        print("numba : unavailable or disabled (KEIPERLI_NUMBA=0)")
        return
    start = time.perf_counter()
    ref = _kernels.scan_rss(u, y, ls, "numba")
    print(f"numba : first call incl. compile {(time.perf_counter() - start) * 1e3:9.2f} ms")
    t_numba = _best(lambda: _kernels.scan_rss(u, y, ls, "numba"), args.repeat)
    print(f"numba : {t_numba * 1e3:9.2f} ms  speedup x{t_numpy / t_numba:.2f}")
    diff = np.max(np.abs(ref - _kernels.scan_rss(u, y, ls, "numpy")) / np.max(np.abs(ref)))
    print(f"max relative difference between backends: {diff:.2e}")


if __name__ == "__main__":
    main()
