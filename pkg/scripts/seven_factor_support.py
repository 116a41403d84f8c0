"""Support of int rho^3 J0(rho)^6 J0(c rho) d rho as a function of c.

The integral is non-zero only for c < 6; at c = 2, 4, 6 the tail is not
integrable and those points are reported as divergent.
"""

import argparse
import csv
import math

import numpy as np

from bpint import IntegralSpec, eval_bessel_product, predict_vanishing
from bpint.quadrature import DivergenceError


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=float, default=0.5)
    ap.add_argument("--stop", type=float, default=8.0)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--output", default="seven_factor_support.csv")
    args = ap.parse_args()

    cs = np.round(np.arange(args.start, args.stop + 0.5 * args.step, args.step), 10)
    rows = []
    for c in cs:
        spec = IntegralSpec.from_lists(4, [0] * 7, [1] * 6 + [c])
        # for c <= 1 the largest coefficient is tied and no prediction is made
        predicted = predict_vanishing(spec).predicted_zero if c > 1 else False
        try:
            est = eval_bessel_product(spec, tol=1e-9)
            rows.append((c, est.value, est.error_bound, predicted))
        except DivergenceError:
            rows.append((c, math.inf, 0.0, predicted))
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["c", "value", "error_bound", "predicted_zero"])
        w.writerows((f"{c:.10g}", f"{v:.17g}", f"{e:.3g}", int(p)) for c, v, e, p in rows)

    finite = [(c, v) for c, v, _, _ in rows if math.isfinite(v)]
    last = max(c for c, v in finite if abs(v) > 1e-8)
    print(f"wrote {args.output}")
    print(f"largest c with |value| > 1e-8: {last:.2f}")
    print("divergent at:", [float(c) for c, v, _, _ in rows if not math.isfinite(v)])


if __name__ == "__main__":
    main()
