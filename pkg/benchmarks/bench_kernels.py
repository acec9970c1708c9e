"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on identical inputs under both backends; the table lists
the best wall time of ``repeat`` runs, the speedup and the largest
difference between the two outputs.
"""

import argparse
import time

import numpy as np

from nmlambda.model import PhysicalParams
from nmlambda.numerics._backend import ckernels, pykernels
from nmlambda.oracle import FrequencyGrid


def _best(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def _cases(rng):
    params = PhysicalParams(10.0, 10.0, 1.0, 15.0, -15.0)
    grid = FrequencyGrid()
    rk4_args = (grid.couplings(params), params.delta + grid.x, params.omega_drive,
                params.delta_l, 0j, 1 + 0j, 5e-4, 2000, 200)
    m = rng.normal(size=(20000, 3, 3)) + 1j * rng.normal(size=(20000, 3, 3))
    h = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    h = h + h.conj().T
    return [
        ("rk4_oracle (4001 modes, 2000 steps)", "rk4_oracle", rk4_args, lambda r: r[0]),
        ("batch_pure_negativity (20000 states)", "batch_pure_negativity", (m,), lambda r: r),
        ("jacobi_eigh (9x9, vectors)", "jacobi_eigh", (h,), lambda r: r[0]),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if ckernels is None:
        print("compiled extension not built; only the fallback is available")
        return 1
    rng = np.random.default_rng(7)
    print(f"{'kernel':40s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s} {'max diff':>10s}")
    for label, name, kargs, pick in _cases(rng):
        tc, rc = _best(lambda: getattr(ckernels, name)(*kargs), args.repeat)
        tp, rp = _best(lambda: getattr(pykernels, name)(*kargs), args.repeat)
        diff = float(np.max(np.abs(np.asarray(pick(rc)) - np.asarray(pick(rp)))))
        print(f"{label:40s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f} {diff:10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
