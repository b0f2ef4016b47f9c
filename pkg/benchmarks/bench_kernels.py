"""Compare the compiled and pure-numpy Bessel and Chebyshev kernels.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Reports the best-of-``repeat`` wall time per call and the largest
relative disagreement between the two backends.
"""

import argparse
import json
import time

import numpy as np

from dunklrad.kernels import numba_backend, numpy_backend
from dunklrad.kernels import _cheb_numpy

try:
    from dunklrad.kernels import _cheb_numba
except ImportError:
    _cheb_numba = None


def best_time(func, repeat):
    func()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        times.append(time.perf_counter() - t0)
    return min(times)


def rel_diff(a, b):
    scale = np.maximum(np.abs(a), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if numba_backend is None:
        raise SystemExit("numba backend unavailable (not installed or DUNKLRAD_DISABLE_NUMBA set)")

    rng = np.random.default_rng(0)
    x = np.sort(rng.uniform(0.0, 200.0, args.n))
    rows = []
    for nu in (-0.5, 0.5, 1.5, 4.0):
        for name in ("besselj", "jnorm"):
            fa, fb = getattr(numba_backend, name), getattr(numpy_backend, name)
            ta = best_time(lambda: fa(nu, x), args.repeat)
            tb = best_time(lambda: fb(nu, x), args.repeat)
            rows.append({"kernel": name, "nu": nu, "numba_s": ta, "numpy_s": tb,
                         "speedup": tb / ta, "max_rel_diff": rel_diff(fa(nu, x), fb(nu, x))})

    if _cheb_numba is not None:
        k, deg = 64, 24
        left = np.linspace(0.0, 1.0, k, endpoint=False)
        right = left + 1.0 / k
        coef = rng.standard_normal((k, deg)) / np.arange(1, deg + 1) ** 2
        xs = rng.uniform(0.0, 1.0, args.n)
        ta = best_time(lambda: _cheb_numba.cheb_eval(left, right, coef, xs), args.repeat)
        tb = best_time(lambda: _cheb_numpy.cheb_eval(left, right, coef, xs), args.repeat)
        diff = float(np.max(np.abs(_cheb_numba.cheb_eval(left, right, coef, xs)
                                   - _cheb_numpy.cheb_eval(left, right, coef, xs))))
        rows.append({"kernel": "cheb_eval", "nu": None, "numba_s": ta, "numpy_s": tb,
                     "speedup": tb / ta, "max_abs_diff": diff})

    print(f"{'kernel':<10} {'nu':>5} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}")
    for r in rows:
        nu = "" if r["nu"] is None else f"{r['nu']:g}"
        print(f"{r['kernel']:<10} {nu:>5} {1e3 * r['numba_s']:11.2f} "
              f"{1e3 * r['numpy_s']:11.2f} {r['speedup']:8.1f}")
    print(json.dumps({"n": args.n, "rows": rows}, sort_keys=True))


if __name__ == "__main__":
    main()
