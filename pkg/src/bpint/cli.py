"""Command-line interface: ``bpint {check,eval,sweep,dos,conductivity,scatter,threshold,kinks}``.

Exit codes: 0 success, 2 usage or configuration error, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bloch import HypercubicLattice, conductivity_jj, dos_hypercubic, kink_scan, umklapp_f
from .closed_form import eval_exton
from .constraints import IntegralSpec, Polygonal, check_convergence, check_polygonal, predict_vanishing
from .delta_oracle import OracleBudget, ScatterSpec, eval_2d_angular, eval_3d_angular, threshold_scan, trig_expansion_3d
from .quadrature import DivergenceError, Estimate, TrigBesselSpec, eval_bessel_product, eval_trig_bessel
from .specfun import DomainError

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4

SUBJECTS = ("integral", "trig", "dos", "conductivity", "scatter2d", "scatter3d", "umklapp_f", "threshold")

# grid parameter and allowed fixed parameters per subject
_SUBJECT_KEYS = {
    "integral": ({"c", "alpha"}, {"alpha", "nu", "c"}),
    "trig": ({"c_trig", "alpha"}, {"A", "B", "alpha", "nu", "c", "c_trig"}),
    "dos": ({"E"}, {"t", "a", "printed"}),
    "conductivity": ({"E_F"}, {"t", "a", "j", "tau"}),
    "scatter2d": ({"g"}, {"N", "radii", "weight", "phi_dk", "qmc_log2_points", "replicates"}),
    "scatter3d": ({"g"}, {"N", "radii"}),
    "umklapp_f": ({"c"}, {"phi_dk"}),
    "threshold": ({"epsilon"}, {"dimension", "N", "radii", "qmc_log2_points", "replicates"}),
}


class ConfigError(ValueError):
    """Malformed sweep configuration (usage error)."""


@dataclass(frozen=True)
class GridSpec:
    param: str
    start: float
    stop: float
    step: float
    scale: str = "linear"

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigError("grid step must be positive")
        if not self.start < self.stop:
            raise ConfigError("grid start must be below stop")
        if self.scale not in ("linear", "log10"):
            raise ConfigError("grid scale must be 'linear' or 'log10'")

    def points(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        raw = [round(self.start + k * self.step, 12) for k in range(n)]
        if self.scale == "log10":
            return [10.0**x for x in raw]
        return raw


@dataclass(frozen=True)
class SweepConfig:
    subject: str
    grid: GridSpec
    parameters: dict = field(default_factory=dict)
    tol: float = 1e-10
    seed: int = 0
    output_path: Optional[str] = None

    _KEYS = ("schema", "subject", "grid", "parameters", "tol", "seed", "output_path")

    def __post_init__(self):
        if self.subject not in SUBJECTS:
            raise ConfigError(f"unknown subject {self.subject!r}; choose from {', '.join(SUBJECTS)}")
        grid_keys, fixed_keys = _SUBJECT_KEYS[self.subject]
        if self.grid.param not in grid_keys:
            raise ConfigError(f"subject {self.subject} sweeps one of {sorted(grid_keys)}, not {self.grid.param!r}")
        unknown = set(self.parameters) - fixed_keys
        if unknown:
            raise ConfigError(f"unknown parameters for {self.subject}: {sorted(unknown)}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if data.get("schema") != 1:
            raise ConfigError('config must declare "schema": 1')
        unknown = set(data) - set(cls._KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            grid = GridSpec(**data["grid"])
            return cls(
                subject=data["subject"],
                grid=grid,
                parameters=dict(data.get("parameters", {})),
                tol=float(data.get("tol", 1e-10)),
                seed=int(data.get("seed", 0)),
                output_path=data.get("output_path"),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed config: {exc}") from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = 1
        return d

    def digest(self) -> str:
        d = self.to_dict()
        d.pop("output_path")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# -- parsing helpers ---------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _spec_from_args(parser, args) -> IntegralSpec:
    if len(args.nu) != len(args.c):
        parser.error(f"--nu has {len(args.nu)} entries but --c has {len(args.c)}")
    try:
        return IntegralSpec.from_lists(args.alpha, args.nu, args.c)
    except DomainError as exc:
        parser.error(str(exc))


# -- evaluation back ends -------------------------------------------------------------------

def _oracle_integral(spec: IntegralSpec, budget: OracleBudget) -> Estimate:
    """Route an integral to a phase-space oracle when one represents it."""
    M = spec.M
    if spec.alpha == 2.0 and all(nu == 0 for nu in spec.orders) and M % 2 == 1:
        cs = spec.coefficients
        return eval_2d_angular(ScatterSpec(2, (M - 1) // 2, cs[:-1], cs[-1]), budget)
    if all(nu == 0.5 for nu in spec.orders) and abs(spec.alpha - (3.0 - M / 2.0)) < 1e-12 and 3 <= M <= 12:
        cs = spec.coefficients
        scale = (2.0 / math.pi) ** (M / 2.0) * math.prod(math.sqrt(c) for c in cs)
        value = scale * trig_expansion_3d(cs)
        return Estimate(value, 1e-13 * abs(value), 1, "trig-expansion")
    raise DomainError("no phase-space oracle for this spec (needs alpha=2, nu=0, odd M; or the 3D half-integer family)")


def evaluate_integral(spec: IntegralSpec, method: str, tol: float, budget: OracleBudget = OracleBudget()) -> Estimate:
    if method == "exton":
        return eval_exton(spec, tol)
    if method == "quad":
        return eval_bessel_product(spec, tol)
    if method == "oracle":
        return _oracle_integral(spec, budget)
    if method == "auto":
        if check_convergence(spec) and check_polygonal(spec) is Polygonal.VIOLATED:
            return eval_exton(spec, tol)
        return eval_bessel_product(spec, tol)
    raise DomainError(f"unknown method {method!r}")


def _budget(params: dict, seed: int) -> OracleBudget:
    kw = {k: int(params[k]) for k in ("qmc_log2_points", "replicates") if k in params}
    return OracleBudget(seed=seed, **kw)


def evaluate_point(subject: str, params: dict, grid_param: str, x: float, tol: float, seed: int):
    """One sweep row: (value, error_bound, method). Divergent points give (inf, 0, 'divergent')."""
    p = dict(params)
    try:
        if subject == "integral":
            c = list(p["c"])
            alpha = float(p.get("alpha", 1.0))
            if grid_param == "c":
                c[-1] = x
            else:
                alpha = x
            spec = IntegralSpec.from_lists(alpha, p["nu"], c)
            est = evaluate_integral(spec, "auto", tol)
        elif subject == "trig":
            if grid_param == "c_trig":
                c_trig, alpha = x, float(p.get("alpha", 1.0))
            else:
                c_trig, alpha = float(p["c_trig"]), x
            spec = TrigBesselSpec(
                float(p.get("A", 1.0)), float(p.get("B", 0.0)), c_trig, tuple(zip(p["nu"], p["c"])), alpha
            )
            est = eval_trig_bessel(spec, tol)
        elif subject == "dos":
            lat = HypercubicLattice(tuple(p["t"]), tuple(p.get("a", [1.0] * len(p["t"]))))
            est = dos_hypercubic(lat, x, tol, printed=bool(p.get("printed", False)))
        elif subject == "conductivity":
            lat = HypercubicLattice(tuple(p["t"]), tuple(p.get("a", [1.0] * len(p["t"]))))
            est = conductivity_jj(lat, int(p.get("j", 0)), x, float(p.get("tau", 1.0)), tol)
        elif subject in ("scatter2d", "scatter3d"):
            dim = 2 if subject == "scatter2d" else 3
            radii = tuple(p["radii"])
            spec = ScatterSpec(dim, int(p.get("N", len(radii) // 2)), radii, x,
                               p.get("weight", "unit"), float(p.get("phi_dk", 0.0)))
            budget = _budget(p, seed)
            est = eval_2d_angular(spec, budget) if dim == 2 else eval_3d_angular(spec, budget, monte_carlo=False)
        elif subject == "umklapp_f":
            if x == 0:
                return math.inf, 0.0, "divergent"
            est = umklapp_f(x, float(p.get("phi_dk", 0.0)), tol)
        elif subject == "threshold":
            radii = tuple(p["radii"])
            dim = int(p.get("dimension", 2))
            spec = ScatterSpec(dim, int(p.get("N", len(radii) // 2)), radii, sum(radii) - x)
            budget = _budget(p, seed)
            est = eval_2d_angular(spec, budget) if dim == 2 else eval_3d_angular(spec, budget, monte_carlo=False)
        else:
            raise ConfigError(subject)
    except DivergenceError:
        return math.inf, 0.0, "divergent"
    if est.divergent or not math.isfinite(est.value):
        return math.inf, 0.0, "divergent"
    return float(est.value), float(est.error_bound), est.method


def _worker_count() -> int:
    """Worker processes for sweeps: BPINT_THREADS if set, else the CPU count."""
    cap = os.environ.get("BPINT_THREADS")
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_sweep(config: SweepConfig) -> str:
    """Evaluate the grid and return the CSV text (rows in grid order)."""
    xs = config.grid.points()
    args = [(config.subject, config.parameters, config.grid.param, x, config.tol, config.seed) for x in xs]
    workers = min(_worker_count(), len(xs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate_point, *zip(*args), chunksize=max(1, len(xs) // (4 * workers))))
    else:
        rows = [evaluate_point(*a) for a in args]

    buf = io.StringIO()
    buf.write(f"# bpint-version={__version__}, config-hash={config.digest()}, seed={config.seed}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "value", "error_bound", "method", "seed"])
    for x, (value, err, method) in zip(xs, rows):
        writer.writerow([_fmt(x), _fmt(value), _fmt(err), method, config.seed])
    if config.subject == "threshold":
        pts = [(x, v) for x, (v, _, _) in zip(xs, rows) if math.isfinite(v) and v > 0]
        if len(pts) >= 5:
            e, f = np.log(np.array(pts)).T
            slope, _ = np.polyfit(e, f, 1)
            resid = f - np.polyval(np.polyfit(e, f, 1), e)
            stderr = math.sqrt(resid @ resid / (len(e) - 2) / ((e - e.mean()) @ (e - e.mean())))
            buf.write(f"exponent,{slope:.6g}±{stderr:.2g}\n")
        else:
            buf.write("exponent,nan\n")
    return buf.getvalue()


# -- commands ---------------------------------------------------------------------------------

def cmd_check(parser, args) -> int:
    spec = _spec_from_args(parser, args)
    report = predict_vanishing(spec)
    m = report.charge_neutral_m
    print(f"convergent: {str(report.convergent).lower()}")
    print(f"polygonal: {report.polygonal.value}")
    print(f"CNC: {'none' if m is None else f'm={m}'}")
    print(f"predicted_zero: {str(report.predicted_zero).lower()}")
    return EXIT_OK


def cmd_eval(parser, args) -> int:
    spec = _spec_from_args(parser, args)
    est = evaluate_integral(spec, args.method, args.tol, OracleBudget(seed=args.seed))
    print(f"{_fmt(est.value)}, {_fmt(est.error_bound)}, {est.method}")
    return EXIT_OK


def _config_from_args(parser, args) -> SweepConfig:
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
            if not isinstance(data, dict):
                raise ConfigError("config must be a JSON object")
            cfg = SweepConfig.from_dict(data)
        else:
            if not (args.subject and args.param and args.start is not None and args.stop is not None and args.step):
                parser.error("either --config or --subject/--param/--start/--stop/--step is required")
            params = {}
            for item in args.set or []:
                key, _, val = item.partition("=")
                params[key] = json.loads(val)
            cfg = SweepConfig(
                subject=args.subject,
                grid=GridSpec(args.param, args.start, args.stop, args.step, args.scale),
                parameters=params,
                tol=args.tol,
                seed=0,
                output_path=args.output,
            )
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.output:
        updates["output_path"] = args.output
    if updates:
        cfg = SweepConfig(**{**cfg.__dict__, **updates})
    return cfg


def cmd_sweep(parser, args) -> int:
    cfg = _config_from_args(parser, args)
    if cfg.output_path in (None, "-"):
        sys.stdout.write(run_sweep(cfg))
        return EXIT_OK
    # open first so an unwritable path fails before any work is done
    with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(run_sweep(cfg))
    return EXIT_OK


def _lattice(parser, args) -> HypercubicLattice:
    a = args.a if args.a else [1.0] * len(args.t)
    if len(a) != len(args.t):
        parser.error("--t and --a must have the same length")
    return HypercubicLattice(tuple(args.t), tuple(a))


def cmd_dos(parser, args) -> int:
    est = dos_hypercubic(_lattice(parser, args), args.E, args.tol, printed=args.printed)
    flags = f", {'|'.join(est.flags)}" if est.flags else ""
    print(f"{_fmt(est.value)}, {_fmt(est.error_bound)}, {est.method}{flags}")
    return EXIT_OK


def cmd_conductivity(parser, args) -> int:
    est = conductivity_jj(_lattice(parser, args), args.j, args.E_F, args.tau, args.tol)
    print(f"{_fmt(est.value)}, {_fmt(est.error_bound)}, {est.method}")
    return EXIT_OK


def cmd_scatter(parser, args) -> int:
    N = len(args.radii) // 2
    spec = ScatterSpec(args.dim, N, tuple(args.radii), args.g, args.weight, args.phi)
    budget = OracleBudget(seed=args.seed)
    est = eval_2d_angular(spec, budget) if args.dim == 2 else eval_3d_angular(spec, budget)
    print(f"{_fmt(est.value)}, {_fmt(est.error_bound)}, {est.method}")
    if "mc_value" in est.info:
        print(f"monte-carlo check: {_fmt(est.info['mc_value'])}")
    return EXIT_OK


def cmd_threshold(parser, args) -> int:
    N = len(args.radii) // 2
    spec = ScatterSpec(args.dim, N, tuple(args.radii), sum(args.radii) / 2.0)
    eps = np.geomspace(args.eps_lo, args.eps_hi, args.points)
    fit = threshold_scan(spec, eps, OracleBudget(seed=args.seed))
    print(f"exponent: {fit.exponent:.6g} ± {fit.exponent_stderr:.2g} "
          f"(window {fit.epsilon_window[0]:.3g}..{fit.epsilon_window[1]:.3g}, {fit.points} points)")
    return EXIT_OK


def cmd_kinks(parser, args) -> int:
    samples = []
    with open(args.input, encoding="utf-8") as fh:
        rows = [line for line in fh if not line.startswith(("#", "exponent"))]
    for row in csv.DictReader(rows):
        samples.append((float(row["param"]), float(row["value"])))
    for k in kink_scan(samples, args.threshold):
        print(f"kink at {k.location:.6g} ± {k.uncertainty:.2g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpint", description="Integrals of products of Bessel functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def integral_flags(p):
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--nu", type=_floats, required=True, help="comma-separated orders")
        p.add_argument("--c", type=_floats, required=True, help="comma-separated coefficients")

    p = sub.add_parser("check", help="convergence, polygon and order conditions")
    integral_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="evaluate one integral")
    integral_flags(p)
    p.add_argument("--method", choices=("quad", "exton", "oracle", "auto"), default="auto")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate over a grid and write CSV")
    p.add_argument("--config", help="JSON sweep configuration")
    p.add_argument("--subject", choices=SUBJECTS)
    p.add_argument("--param")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--scale", choices=("linear", "log10"), default="linear")
    p.add_argument("--set", action="append", metavar="KEY=JSON", help="fixed parameter")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sweep)

    for name, func in (("dos", cmd_dos), ("conductivity", cmd_conductivity)):
        p = sub.add_parser(name)
        p.add_argument("--t", type=_floats, required=True)
        p.add_argument("--a", type=_floats)
        p.add_argument("--tol", type=float, default=1e-10)
        if name == "dos":
            p.add_argument("--E", type=float, required=True)
            p.add_argument("--printed", action="store_true", help="delta normalization without 1/(2 pi)")
        else:
            p.add_argument("--E-F", dest="E_F", type=float, required=True)
            p.add_argument("--j", type=int, default=0)
            p.add_argument("--tau", type=float, default=1.0)
        p.set_defaults(func=func)

    p = sub.add_parser("scatter", help="phase-space oracle")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--radii", type=_floats, required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--weight", choices=("unit", "R1", "R2", "R3"), default="unit")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("threshold", help="fit the threshold exponent")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--radii", type=_floats, required=True)
    p.add_argument("--eps-lo", type=float, default=1e-3)
    p.add_argument("--eps-hi", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("kinks", help="locate kinks in a sweep CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--threshold", type=float, default=10.0)
    p.set_defaults(func=cmd_kinks)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except ConfigError as exc:
        print(f"bpint: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"bpint: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"bpint: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
