"""Tight-binding densities of states, conductivity, and the graphene umklapp rate.

Conventions: e = hbar = k_B = 1, and delta(x) = (1/2 pi) int exp(i x rho) d rho,
which makes the hypercubic density of states

    nu(E) = (1/pi) prod a_n^-1 int_0^inf cos(E rho) prod J_0(t_n rho) d rho

integrate to prod a_n^-1 over the band |E| < sum t_n. ``printed=True`` returns
values 2 pi times larger, the convention without the 1/(2 pi) in the delta
function.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constraints import IntegralSpec, Polygonal, check_polygonal, predict_vanishing
from .quadrature import Estimate, TrigBesselSpec, eval_bessel_product, eval_trig_bessel
from .specfun import DomainError, SingularityError, elliptic_k

__all__ = [
    "HypercubicLattice",
    "HoneycombModel",
    "Kink",
    "InsufficientDataError",
    "dos_hypercubic",
    "dos_square_closed",
    "dos_sum_rule",
    "critical_energies",
    "conductivity_jj",
    "honeycomb_dispersion",
    "dirac_point",
    "fermi_velocity",
    "s_functions",
    "umklapp_f",
    "umklapp_rate",
    "kink_scan",
]

log = logging.getLogger(__name__)

VAN_HOVE_WINDOW = 1e-3
_ZETA_HALF = -1.4603545088095868


class InsufficientDataError(DomainError):
    """Too few samples for the requested analysis."""


@dataclass(frozen=True)
class HypercubicLattice:
    """Nearest-neighbour hoppings t_n and lattice constants a_n, one per axis."""

    hoppings: tuple[float, ...]
    lattice_constants: tuple[float, ...]

    def __post_init__(self):
        t = tuple(float(x) for x in self.hoppings)
        a = tuple(float(x) for x in self.lattice_constants)
        object.__setattr__(self, "hoppings", t)
        object.__setattr__(self, "lattice_constants", a)
        if len(t) != len(a) or not t:
            raise DomainError("need one hopping and one lattice constant per axis")
        if any(not x > 0 for x in t + a):
            raise DomainError("hoppings and lattice constants must be positive")

    @classmethod
    def uniform(cls, D: int, t: float = 1.0, a: float = 1.0) -> "HypercubicLattice":
        return cls((t,) * D, (a,) * D)

    @property
    def D(self) -> int:
        return len(self.hoppings)

    @property
    def half_bandwidth(self) -> float:
        return sum(self.hoppings)

    @property
    def inverse_volume(self) -> float:
        return math.prod(1.0 / a for a in self.lattice_constants)


@dataclass(frozen=True)
class HoneycombModel:
    """Two-valley Dirac model; c = Delta K / k_F."""

    c: float
    phi_dk: float = 0.0
    coupling: float = 1.0
    T: float = 0.01
    E_F: float = 1.0
    t: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError("c must be positive")
        if not (self.T >= 0 and self.E_F > 0 and self.t > 0 and self.d > 0):
            raise DomainError("T >= 0 and positive E_F, t, d required")

    @property
    def valleys_disjoint(self) -> bool:
        return self.c > 2.0

    @property
    def umklapp_open(self) -> bool:
        return self.c <= 4.0

    @property
    def degenerate(self) -> bool:
        return self.T < self.E_F

    @property
    def fermi_velocity(self) -> float:
        return fermi_velocity(self.t, self.d)

    @property
    def k_F(self) -> float:
        return self.E_F / self.fermi_velocity


@dataclass(frozen=True)
class Kink:
    location: float
    uncertainty: float


# -- densities of states -------------------------------------------------------------

def critical_energies(lattice: HypercubicLattice) -> list[tuple[float, str]]:
    """Band-edge and saddle energies sum(sigma_n t_n) with their singularity type.

    Types: ``invsqrt`` (D = 1 edges), ``log`` (D = 2 saddles), ``step`` (D = 2
    edges), ``kink`` (D >= 3, finite).
    """
    t = lattice.hoppings
    D = lattice.D
    seen: dict[float, str] = {}
    for signs in itertools.product((1, -1), repeat=D):
        e = sum(s * x for s, x in zip(signs, t))
        e = round(e, 12)
        if D == 1:
            kind = "invsqrt"
        elif D == 2:
            kind = "step" if signs[0] == signs[1] else "log"
        else:
            kind = "kink"
        if seen.get(e) != "log":
            seen[e] = kind
    return sorted(seen.items())


def _divergent_energies(lattice: HypercubicLattice) -> list[float]:
    return [e for e, kind in critical_energies(lattice) if kind in ("invsqrt", "log")]


def dos_hypercubic(
    lattice: HypercubicLattice,
    E: float,
    tol: float = 1e-10,
    printed: bool = False,
) -> Estimate:
    """Density of states per unit volume at energy E.

    Exactly zero outside the band. At a divergent van Hove energy the value is
    infinite and flagged; within ``1e-3 * sum(t)`` of one the finite value is
    returned with a ``van-hove`` flag.
    """
    W = lattice.half_bandwidth
    scale = (2.0 * math.pi if printed else 1.0) * lattice.inverse_volume / math.pi
    if abs(E) > W:
        return Estimate(0.0, 0.0, 1, "support")
    flags = []
    for e_star in _divergent_energies(lattice):
        if abs(E - e_star) <= 1e-12 * W:
            return Estimate(math.inf, 0.0, 1, "divergent", flags=("van-hove", "divergent"))
        if abs(E - e_star) <= VAN_HOVE_WINDOW * W:
            flags.append("van-hove")
    est = eval_trig_bessel(
        TrigBesselSpec(1.0, 0.0, abs(E), tuple((0.0, t) for t in lattice.hoppings), 1.0), tol
    )
    return Estimate(
        scale * est.value,
        scale * est.error_bound,
        est.intervals_used,
        est.method,
        tuple(flags) + est.flags,
    )


def dos_square_closed(E: float, t: float = 1.0, printed: bool = False) -> float:
    """Square-lattice density of states K(sqrt(1 - (E/2t)^2)) / (pi^2 t).

    Raises SingularityError at the van Hove energy E = 0. At the band edges
    |E| = 2t the interior limit 1/(2 pi t) is returned.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    x = abs(E) / (2.0 * t)
    if x > 1.0:
        return 0.0
    if x == 0.0:
        raise SingularityError("logarithmic van Hove singularity at E = 0")
    if x == 1.0:
        log.warning("band edge |E| = 2t: returning the interior limit")
    k = math.sqrt((1.0 - x) * (1.0 + x))
    value = elliptic_k(k) / (math.pi**2 * t)
    return 2.0 * math.pi * value if printed else value


def _edge_correction(kind: str, h: float, f1: float, f2: float) -> float:
    """Correction to a trapezoid sum that omits a singular endpoint.

    ``f1`` and ``f2`` are samples at distance h and 2h from the singularity;
    they fix the local model whose endpoint terms are added back.
    """
    if kind == "invsqrt":
        # f = x^-1/2 (A + C x): generalized Euler-Maclaurin term -zeta(1/2) A sqrt(h)
        A = 2.0 * f1 * math.sqrt(h) - f2 * math.sqrt(2.0 * h)
        return -_ZETA_HALF * A * math.sqrt(h)
    if kind == "log":
        # f = A ln x + B: omitted endpoint weight and the log term
        A = (f2 - f1) / math.log(2.0)
        B = f1 - A * math.log(h)
        return A * 0.5 * h * math.log(h / (2.0 * math.pi)) + 0.5 * h * B
    raise ValueError(kind)


def dos_sum_rule(lattice: HypercubicLattice, cells_per_bandwidth: int = 800, tol: float = 1e-10) -> float:
    """Trapezoidal integral of the density of states over the whole band.

    The band is split at the critical energies; divergent endpoints are left
    out of the trapezoid sum and replaced by a fitted local model (inverse
    square root in 1D, logarithm at 2D saddles); step edges use the
    extrapolated one-sided limit.
    """
    W = lattice.half_bandwidth
    crit = critical_energies(lattice)
    kinds = dict(crit)
    pts = sorted(set([e for e, _ in crit] + [-W, W]))
    target_h = 2.0 * W / cells_per_bandwidth
    total = 0.0

    def nu(E):
        return dos_hypercubic(lattice, E, tol).value

    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 1e-12 * W:
            continue
        n = max(4, int(math.ceil((b - a) / target_h)))
        h = (b - a) / n
        x = a + h * np.arange(n + 1)
        f = np.array([nu(v) if 0 < k < n else math.nan for k, v in enumerate(x)])
        seg = h * (f[1:-1].sum())
        for end, inner, inner2 in ((0, 1, 2), (n, n - 1, n - 2)):
            kind = kinds.get(round(float(x[end]), 12), "kink")
            if kind in ("invsqrt", "log"):
                seg += _edge_correction(kind, h, f[inner], f[inner2])
            elif kind == "step":
                seg += 0.5 * h * (2.0 * f[inner] - f[inner2])
            else:
                seg += 0.5 * h * nu(float(x[end]))
        total += seg
    return total


def conductivity_jj(
    lattice: HypercubicLattice,
    j: int,
    E_F: float,
    tau_d: float = 1.0,
    tol: float = 1e-10,
) -> Estimate:
    """sigma_jj = tau (t_j a_j)^2 [nu(E_F) + 2 I(E_F)], with

    I(E) = (1 / 2 pi) prod a_n^-1 int cos(E rho) J_2(t_j rho) prod_{n != j} J_0(t_n rho) d rho.
    """
    if not 0 <= j < lattice.D:
        raise DomainError(f"axis index {j} out of range for D = {lattice.D}")
    if not tau_d > 0:
        raise DomainError("tau_d must be positive")
    if abs(E_F) > lattice.half_bandwidth:
        return Estimate(0.0, 0.0, 1, "support")
    dos = dos_hypercubic(lattice, E_F, tol)
    if dos.divergent:
        return Estimate(math.inf, 0.0, 1, "divergent", flags=dos.flags)
    factors = tuple((2.0 if n == j else 0.0, t) for n, t in enumerate(lattice.hoppings))
    corr = eval_trig_bessel(TrigBesselSpec(1.0, 0.0, abs(E_F), factors, 1.0), tol)
    if corr.divergent:
        return Estimate(math.inf, 0.0, 1, "divergent", flags=corr.flags)
    pref = lattice.inverse_volume / (2.0 * math.pi)
    amp = tau_d * (lattice.hoppings[j] * lattice.lattice_constants[j]) ** 2
    value = amp * (dos.value + 2.0 * pref * corr.value)
    err = amp * (dos.error_bound + 2.0 * pref * corr.error_bound)
    return Estimate(value, err, dos.intervals_used + corr.intervals_used, corr.method, dos.flags + corr.flags)


# -- honeycomb -------------------------------------------------------------------------------

def honeycomb_dispersion(kx, ky, t: float = 1.0, d: float = 1.0):
    """Upper and lower nearest-neighbour graphene bands (d: carbon-carbon distance)."""
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    cx = np.cos(0.5 * math.sqrt(3.0) * kx * d)
    arg = 1.0 + 4.0 * cx * (cx + np.cos(1.5 * ky * d))
    e = t * np.sqrt(np.maximum(arg, 0.0))
    if e.ndim == 0:
        return float(e), float(-e)
    return e, -e


def dirac_point(d: float = 1.0) -> tuple[float, float]:
    return 4.0 * math.pi / (3.0 * math.sqrt(3.0) * d), 0.0


def fermi_velocity(t: float = 1.0, d: float = 1.0) -> float:
    return 1.5 * d * t


# -- umklapp rate ----------------------------------------------------------------------------

_S_TERMS = {
    "S1": ((0, 0, 0, 0), 0),
    "S2": ((0, 0, 1, 1), 2),
    "S3a": ((1, 1, 1, 1), 4),
    "S3b": ((1, 1, 1, 1), 0),
}


def _s_integral(key: str, c: float, tol: float) -> Estimate:
    orders, nu_c = _S_TERMS[key]
    spec = IntegralSpec.from_lists(2.0, list(orders) + [nu_c], [1.0, 1.0, 1.0, 1.0, c])
    if check_polygonal(spec) is Polygonal.VIOLATED and predict_vanishing(spec).predicted_zero:
        return Estimate(0.0, 0.0, 1, "vanishing")
    return eval_bessel_product(spec, tol)


def s_functions(c: float, phi_dk: float = 0.0, tol: float = 1e-10) -> tuple[Estimate, Estimate, Estimate]:
    """S1 = int rho J0^4 J0(c rho),  S2 = -cos(2 phi) int rho J0^2 J1^2 J2(c rho),
    S3 = cos(4 phi)/2 int rho J1^4 J4(c rho) + 1/2 int rho J1^4 J0(c rho)."""
    if not c > 0:
        raise DomainError("c must be positive: the integrals diverge logarithmically at c = 0")
    s1 = _s_integral("S1", c, tol)
    c2 = -math.cos(2.0 * phi_dk)
    s2 = _s_integral("S2", c, tol)
    c4 = 0.5 * math.cos(4.0 * phi_dk)
    s3a = _s_integral("S3a", c, tol)
    s3b = _s_integral("S3b", c, tol)

    def combine(parts, method):
        value = sum(w * e.value for w, e in parts)
        err = sum(abs(w) * e.error_bound for w, e in parts)
        used = sum(e.intervals_used for _, e in parts)
        flags = tuple(sorted({f for _, e in parts for f in e.flags}))
        return Estimate(value, err, used, method, flags)

    return (
        combine([(1.0, s1)], s1.method),
        combine([(c2, s2)], s2.method),
        combine([(c4, s3a), (0.5, s3b)], s3a.method),
    )


def umklapp_f(c: float, phi_dk: float = 0.0, tol: float = 1e-10) -> Estimate:
    """f(c) = S1 - 2 S2 + S3, extended to c < 0 as an even function."""
    if c == 0:
        raise DomainError("f(c) diverges logarithmically at c = 0")
    s1, s2, s3 = s_functions(abs(c), phi_dk, tol)
    value = s1.value - 2.0 * s2.value + s3.value
    err = s1.error_bound + 2.0 * s2.error_bound + s3.error_bound
    method = "vanishing" if {s1.method, s2.method, s3.method} == {"vanishing"} else "partition-asymptotic"
    flags = tuple(sorted(set(s1.flags + s2.flags + s3.flags)))
    return Estimate(value, err, s1.intervals_used + s2.intervals_used + s3.intervals_used, method, flags)


def umklapp_rate(model: HoneycombModel, tol: float = 1e-10) -> Estimate:
    """Fermi-surface averaged rate (pi/2) lambda^2 (T^2 / E_F) f(c)."""
    flags = []
    if not model.valleys_disjoint:
        flags.append("valleys-overlap")
    if not model.degenerate:
        flags.append("non-degenerate")
    pref = 0.5 * math.pi * model.coupling**2 * model.T**2 / model.E_F
    if not model.umklapp_open:
        return Estimate(0.0, 0.0, 1, "vanishing", tuple(flags))
    f = umklapp_f(model.c, model.phi_dk, tol)
    return Estimate(pref * f.value, abs(pref) * f.error_bound, f.intervals_used, f.method, tuple(flags) + f.flags)


# -- kinks -------------------------------------------------------------------------------------

def kink_scan(samples: Sequence[tuple[float, float]], threshold: float = 10.0) -> list[Kink]:
    """Locate derivative discontinuities in uniformly gridded samples.

    A grid point is flagged when its second central difference exceeds
    median + ``threshold`` * robust scale (1.4826 MAD, floored at a tenth of
    the median and at roundoff level). Non-finite samples always count as
    flagged. Each contiguous flagged run yields one kink, located at a
    non-finite sample if the run has one and at the largest |d2| otherwise.
    """
    if len(samples) < 9:
        raise InsufficientDataError(f"kink_scan needs at least 9 samples, got {len(samples)}")
    arr = np.array(sorted(samples), dtype=float)
    x, f = arr[:, 0], arr[:, 1]
    steps = np.diff(x)
    h = float(np.median(steps))
    if not h > 0 or np.max(np.abs(steps - h)) > 1e-6 * max(h, abs(x).max() * 1e-9):
        raise DomainError("samples must lie on a uniform grid")
    with np.errstate(invalid="ignore"):
        d2 = np.abs(f[:-2] - 2.0 * f[1:-1] + f[2:])
    bad = ~np.isfinite(d2)
    good = d2[~bad]
    if good.size == 0:
        raise InsufficientDataError("no finite second differences")
    med = float(np.median(good))
    mad = float(np.median(np.abs(good - med)))
    fin = f[np.isfinite(f)]
    floor = 64.0 * np.finfo(float).eps * (np.abs(fin).max() if fin.size else 1.0)
    scale = max(1.4826 * mad, 0.1 * med, floor)
    flagged = bad | (d2 > med + threshold * scale)
    idx = np.flatnonzero(flagged)
    if idx.size == 0:
        return []
    runs = np.split(idx, np.flatnonzero(np.diff(idx) != 1) + 1)
    kinks = []
    for run in runs:
        centres = run + 1
        nonfinite = [i for i in centres if not math.isfinite(f[i])]
        if nonfinite:
            loc = x[nonfinite[len(nonfinite) // 2]]
        else:
            loc = x[centres[np.argmax(d2[run])]]
        kinks.append(Kink(float(loc), h))
    return kinks
