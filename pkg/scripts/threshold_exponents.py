"""Threshold exponents of the N-pair phase-space integral in two and three dimensions.

Fits f(g = sum(radii) - eps) ~ eps^p over a log-spaced window of eps and
compares p with the phase-space count N (D - 1) - (D + 1) / 2, that is
N - 3/2 in 2D and 2N - 2 in 3D.
"""

import argparse
import time

import numpy as np

from bpint import OracleBudget, ScatterSpec, threshold_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-N", type=int, default=3)
    ap.add_argument("--eps-lo", type=float, default=1e-3)
    ap.add_argument("--eps-hi", type=float, default=1e-1)
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--dim", type=int, choices=(2, 3), default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    eps = np.geomspace(args.eps_lo, args.eps_hi, args.points)
    budget = OracleBudget(seed=args.seed)
    print(f"{'N':>2} {'exponent':>10} {'stderr':>8} {'expected':>8} {'time':>6}")
    for N in range(1, args.max_N + 1):
        t0 = time.perf_counter()
        spec = ScatterSpec(args.dim, N, (1.0,) * (2 * N), 2.0 * N)
        fit = threshold_scan(spec, eps, budget)
        expected = N * (args.dim - 1) - 0.5 * (args.dim + 1)
        print(f"{N:>2} {fit.exponent:>10.4f} {fit.exponent_stderr:>8.1g} {expected:>8.1f} "
              f"{time.perf_counter() - t0:>5.1f}s")


if __name__ == "__main__":
    main()
