"""Regenerate tests/data/goldens.json from oracles independent of the quadrature engine.

Densities of states come from the elliptic closed form evaluated with mpmath;
f(c) comes from the angular phase-space oracle with the R1, R2, R3 weights.
"""

import argparse
import json
import math
from pathlib import Path

import mpmath

from bpint.delta_oracle import ScatterSpec, eval_2d_angular

ROOT = Path(__file__).resolve().parents[1]


def dos_square(E: float, printed: bool) -> float:
    k = mpmath.sqrt(1 - (mpmath.mpf(E) / 2) ** 2)
    val = mpmath.ellipk(k**2) / mpmath.pi**2
    return float(val * 2 * mpmath.pi if printed else val)


def f_oracle(c: float, phi: float = 0.0) -> dict:
    parts = {}
    for w in ("R1", "R2", "R3"):
        est = eval_2d_angular(ScatterSpec(2, 2, (1.0, 1.0, 1.0, 1.0), c, w, phi))
        parts[w] = (est.value, est.error_bound)
    value = parts["R1"][0] - 2 * parts["R2"][0] + parts["R3"][0]
    error = parts["R1"][1] + 2 * parts["R2"][1] + parts["R3"][1]
    return {"c": c, "phi_dk": phi, "S1": parts["R1"][0], "S2": parts["R2"][0], "S3": parts["R3"][0],
            "f": value, "error_bound": error}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output", default=str(ROOT / "tests" / "data" / "goldens.json"))
    args = ap.parse_args()
    mpmath.mp.dps = 30
    energies = [0.1, 0.5, 1.0, 1.5, 1.9]
    data = {
        "dos_square": {
            "t": 1.0,
            "corrected": {str(E): dos_square(E, False) for E in energies},
            "printed": {str(E): dos_square(E, True) for E in energies},
        },
        "umklapp_f": [f_oracle(c) for c in (1.5, 2.5, 3.0, 3.5)],
        "triangle_3d": {"[1,1,1]": math.pi / 4, "[1,2,2]": math.pi / 16, "[1,1,2]": math.pi / 16},
    }
    Path(args.output).parent.mkdir(parents=True, exist_ok=True)
    with open(args.output, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
