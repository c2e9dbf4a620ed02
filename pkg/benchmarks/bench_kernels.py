"""Benchmark: compiled kernels against the pure-python (numpy) fallback.

Times the batched bivariate Horner evaluation and the rational box-hit test
on Monte Carlo sized batches, then a full windowed volume estimate with each
backend swapped in.  Run:

    python benchmarks/bench_kernels.py [--samples N]
"""

import argparse
import time

import numpy as np

from bidisc import _kernels_py
from bidisc import carleson as CA
from bidisc import kernels, rif

try:
    from bidisc import _kernels
    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False


def _batch(n, seed=0):
    rng = np.random.default_rng(seed)
    r = 0.97 * np.sqrt(rng.random((n, 2)))
    ang = rng.uniform(0, 2 * np.pi, (n, 2))
    return r[:, 0] * np.exp(1j * ang[:, 0]), r[:, 1] * np.exp(1j * ang[:, 1])


def _time(fn, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(samples):
    amy = rif.amy()
    num = np.asarray(amy.num.coeffs)
    den = np.asarray(amy.den.coeffs)
    z1, z2 = _batch(samples)

    rows = []
    for name, size in (("eval 2x2 grid", (2, 2)), ("eval 8x8 grid", (8, 8))):
        rng = np.random.default_rng(1)
        grid = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        t_py = _time(lambda: _kernels_py.eval_poly2(grid, z1, z2))
        t_cy = _time(lambda: _kernels.eval_poly2(grid, z1, z2)) \
            if HAVE_COMPILED else float("nan")
        rows.append((name, t_py, t_cy))

    t_py = _time(lambda: _kernels_py.box_hits(num, den, num, den, z1, z2,
                                              -1 + 0j, -1 + 0j, 0.1, 0.1))
    t_cy = _time(lambda: _kernels.box_hits(num, den, num, den, z1, z2,
                                           -1 + 0j, -1 + 0j, 0.1, 0.1)) \
        if HAVE_COMPILED else float("nan")
    rows.append(("box_hits (amy pair)", t_py, t_cy))
    return rows


def bench_estimate(samples):
    """One windowed preimage-volume rung under each backend."""
    kappa = rif.Symbol(rif.kappa())
    amy = rif.Symbol(rif.amy())
    box = CA.CarlesonBox((-1.0 + 0.0j, -1.0 + 0.0j), (2.0 ** -6, 2.0 ** -6))
    window = CA.line_window("v", 1.0 + 0.0j)(2.0 ** -6)

    def run():
        return CA.volume_preimage((kappa, amy), box, 0.0, samples, 7,
                                  window=window)

    rows = []
    saved = CA.box_hits
    try:
        CA.box_hits = _kernels_py.box_hits
        t_py = _time(run, repeats=2)
        if HAVE_COMPILED:
            CA.box_hits = _kernels.box_hits
            t_cy = _time(run, repeats=2)
        else:
            t_cy = float("nan")
    finally:
        CA.box_hits = saved
    rows.append((f"volume rung ({samples:.0e} samples)", t_py, t_cy))
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=1_000_000)
    args = parser.parse_args()

    print(f"active backend: {kernels.BACKEND}")
    if not HAVE_COMPILED:
        print("compiled kernels unavailable; showing fallback timings only")
    rows = bench_kernels(args.samples) + bench_estimate(args.samples)
    width = max(len(r[0]) for r in rows)
    print(f"{'benchmark':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, t_py, t_cy in rows:
        speed = t_py / t_cy if t_cy == t_cy and t_cy > 0 else float("nan")
        print(f"{name:<{width}}  {t_py * 1e3:>8.1f}ms  {t_cy * 1e3:>8.1f}ms  "
              f"{speed:>7.1f}x")


if __name__ == "__main__":
    main()
