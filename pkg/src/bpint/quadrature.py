"""Numerical evaluation of half-line integrals of Bessel products.

Two integrand families are handled:

    int_0^inf rho^(alpha-1) prod_n J_{nu_n}(c_n rho) d rho
    int_0^inf rho^(alpha-1) [A cos(c rho) + B sin(c rho)] prod_n J_{nu_n}(c_n rho) d rho

Default strategy ("partition-asymptotic"): the finite range [0, R] is split at
the zeros of the fastest factor and integrated with Gauss rules (Gauss-Jacobi on
the first panel to absorb the rho^beta behaviour at the origin), and the tail
[R, inf) is integrated term by term from the Hankel expansion of every factor.
After multiplying out, the tail is a finite sum of rho^s exp(i w rho) moments,
each of which is an incomplete gamma function, so slowly decaying and
near-resonant (w -> 0) tails are handled exactly rather than extrapolated.

The alternative "partition-extrapolation" accelerates the sequence of panel
partial sums with Wynn's epsilon algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import special as sc

from .constraints import IntegralSpec, check_convergence
from .specfun import DomainError, expint_e, hankel_coefficients

__all__ = [
    "Estimate",
    "TrigBesselSpec",
    "DivergenceError",
    "eval_bessel_product",
    "eval_trig_bessel",
    "eval_exp_bessel",
    "ZERO_ATOL",
    "is_zero_consistent",
]

ZERO_ATOL = 1e-9
_TAIL_TERMS = 16
# relative accuracy of one Bessel evaluation; sets the roundoff floor
_BESSEL_RTOL = 1e-15
_X_ASYMPTOTIC = 30.0
_MAX_POINTS_PER_CHUNK = 2_000_000


class DivergenceError(DomainError):
    """The integral does not converge (non-oscillatory, slowly decaying tail)."""


@dataclass(frozen=True)
class Estimate:
    """A numerical value with an error bound and provenance."""

    value: float
    error_bound: float
    intervals_used: int = 1
    method: str = "partition-asymptotic"
    flags: tuple[str, ...] = ()
    seed: Optional[int] = None
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "error_bound", float(self.error_bound))
        if not isinstance(self.value, complex):
            object.__setattr__(self, "value", float(self.value))
        if not (self.error_bound >= 0 and math.isfinite(self.error_bound)):
            raise ValueError(f"error bound must be finite and non-negative, got {self.error_bound}")
        if self.intervals_used < 1:
            raise ValueError("intervals_used must be >= 1")

    @property
    def divergent(self) -> bool:
        return "divergent" in self.flags


def is_zero_consistent(est: Estimate, atol: float = ZERO_ATOL) -> bool:
    """|value| <= max(atol, 10 * error_bound)."""
    return abs(est.value) <= max(atol, 10.0 * est.error_bound)


@dataclass(frozen=True)
class TrigBesselSpec:
    """rho^(alpha-1) [A cos(c rho) + B sin(c rho)] prod J_{nu_n}(c_n rho)."""

    A: float
    B: float
    c_trig: float
    factors: tuple[tuple[float, float], ...]
    alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((float(nu), float(c)) for nu, c in self.factors))
        if self.A == 0 and self.B == 0:
            raise DomainError("at least one of A, B must be non-zero")
        if self.c_trig < 0:
            raise DomainError("trigonometric coefficient must be non-negative")
        if not self.factors:
            raise DomainError("need at least one Bessel factor")
        for _, c in self.factors:
            if not c > 0:
                raise DomainError("Bessel coefficients must be positive")


# -- integrand description --------------------------------------------------------

@dataclass(frozen=True)
class _Integrand:
    alpha: float
    bessel: tuple[tuple[float, float], ...]
    # (amplitude, sigma) pairs: sum_k amp_k exp(i sigma_k c_trig rho); empty -> no trig factor
    trig: tuple[tuple[complex, int], ...] = ()
    c_trig: float = 0.0
    sign: float = 1.0
    real: bool = True

    @property
    def beta(self) -> float:
        return self.alpha - 1.0 + sum(nu for nu, _ in self.bessel)

    @property
    def total_frequency(self) -> float:
        return sum(c for _, c in self.bessel) + (self.c_trig if self.trig else 0.0)

    @property
    def fastest(self) -> float:
        cmax = max(c for _, c in self.bessel)
        return max(cmax, self.c_trig) if self.trig else cmax

    def regular(self, rho: np.ndarray) -> np.ndarray:
        """Integrand divided by rho^beta (smooth at the origin)."""
        out = np.full(rho.shape, self.sign, dtype=complex if not self.real else float)
        for nu, c in self.bessel:
            x = c * rho
            if nu == 0:
                out = out * sc.j0(x)
            else:
                out = out * (sc.jv(nu, x) / rho**nu)
        rho_pow = self.alpha - 1.0 - self.beta + sum(nu for nu, _ in self.bessel)
        if rho_pow != 0:
            out = out * rho**rho_pow
        if self.trig:
            out = out * self._trig(rho)
        return out

    def full(self, rho: np.ndarray) -> np.ndarray:
        out = np.full(rho.shape, self.sign, dtype=complex if not self.real else float)
        for nu, c in self.bessel:
            x = c * rho
            out = out * (sc.j0(x) if nu == 0 else sc.jv(nu, x))
        if self.alpha != 1.0:
            out = out * rho ** (self.alpha - 1.0)
        if self.trig:
            out = out * self._trig(rho)
        return out

    def _trig(self, rho):
        val = np.zeros(rho.shape, dtype=complex)
        for amp, sigma in self.trig:
            val = val + amp * np.exp(1j * sigma * self.c_trig * rho)
        return val.real if self.real else val


def _normalize_bessel(factors):
    """Map negative integer orders onto positive ones: J_{-n} = (-1)^n J_n."""
    sign = 1.0
    out = []
    for nu, c in factors:
        if nu < 0 and abs(nu - round(nu)) < 1e-12:
            n = int(round(-nu))
            sign *= (-1.0) ** n
            nu = float(n)
        out.append((float(nu), float(c)))
    return tuple(out), sign


# -- asymptotic tail ----------------------------------------------------------------

@lru_cache(maxsize=4096)
def _bessel_branches(nu: float, c: float, kmax: int):
    """Hankel expansion of J_nu(c rho) as sum_sigma exp(i sigma c rho) * poly(1/rho).

    Returns ((sigma, coeffs), ...) with the rho^(-1/2) prefactor stripped.
    """
    a = hankel_coefficients(nu, kmax)
    amp = 1.0 / math.sqrt(2.0 * math.pi * c)
    phase = -nu * math.pi / 2.0 - math.pi / 4.0
    out = []
    for sigma in (1, -1):
        k = np.arange(kmax + 1)
        coeffs = amp * np.exp(1j * sigma * phase) * (sigma * 1j) ** k * a / c**k
        out.append((sigma, coeffs))
    return tuple(out)


def _tail_expansion(f: _Integrand, kmax: int):
    """Multiply out the factor expansions; dict keyed by frequency."""
    scale = max(f.total_frequency, 1.0)
    terms: dict[int, tuple[float, np.ndarray]] = {0: (0.0, np.zeros(kmax + 1, dtype=complex))}
    terms[0][1][0] = f.sign

    def key(w):
        return int(round(w / scale * 1e11))

    def multiply(branches):
        new: dict[int, tuple[float, np.ndarray]] = {}
        for w, poly in terms.values():
            for dw, fpoly in branches:
                prod = np.convolve(poly, fpoly)[: kmax + 1]
                w2 = w + dw
                kk = key(w2)
                if kk in new:
                    new[kk] = (new[kk][0], new[kk][1] + prod)
                else:
                    new[kk] = (w2, prod)
        return new

    for nu, c in f.bessel:
        terms = multiply([(sigma * c, coeffs) for sigma, coeffs in _bessel_branches(nu, c, kmax)])
    if f.trig:
        unit = np.zeros(kmax + 1, dtype=complex)
        branches = []
        for amp, sigma in f.trig:
            p = unit.copy()
            p[0] = amp
            branches.append((sigma * f.c_trig, p))
        terms = multiply(branches)
    s0 = f.alpha - 1.0 - 0.5 * len(f.bessel)
    return list(terms.values()), s0, scale


def _tail(f: _Integrand, R: float, kmax: int = _TAIL_TERMS):
    """Integral of the asymptotic expansion over [R, inf).

    Returns (value, truncation_error, magnitude, divergent_frequencies).
    """
    terms, s0, scale = _tail_expansion(f, kmax)
    j = np.arange(kmax + 1)
    s = s0 - j
    res_tol = 1e-12 * scale
    total = 0j
    err = 0.0
    magnitude = 0.0
    divergent = []
    pending_p, pending_z, pending_c = [], [], []
    for w, poly in terms:
        if abs(w) <= res_tol:
            for jj in range(kmax + 1):
                coef = poly[jj]
                size = abs(coef.real) if f.real else abs(coef)
                if s[jj] >= -1.0:
                    if size > 1e-13 * max(1.0, np.max(np.abs(poly))):
                        divergent.append(w)
                    continue
                contrib = coef * R ** (s[jj] + 1.0) / (-s[jj] - 1.0)
                total += contrib
                magnitude += abs(contrib)
            err += abs(poly[kmax]) * R ** (s[kmax] + 1.0)
            continue
        pending_p.append(-s)
        pending_z.append(np.full(kmax + 1, -1j * w * R))
        pending_c.append(poly)
        err += abs(poly[kmax]) * R ** (s[kmax] + 1.0) / max(1.0, abs(w) * R)
    if pending_p:
        P = np.concatenate(pending_p)
        Z = np.concatenate(pending_z)
        C = np.concatenate(pending_c)
        S = -P
        mom = R ** (S + 1.0) * expint_e(P, Z)
        contrib = C * mom
        total += contrib.sum()
        magnitude += float(np.abs(contrib).sum())
    return total, err, magnitude, divergent


# -- finite part --------------------------------------------------------------------

@lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=256)
def _gauss_jacobi_01(n: int, beta: float):
    """Nodes/weights on [0, 1] for weight x^beta."""
    x, w = sc.roots_jacobi(n, 0.0, beta)
    return 0.5 * (x + 1.0), w / 2.0 ** (beta + 1.0)


def _mcmahon_zeros(nu: float, count: int) -> np.ndarray:
    """Approximate positive zeros of J_nu (McMahon's expansion)."""
    s = np.arange(1, count + 1, dtype=float)
    b = (s + nu / 2.0 - 0.25) * math.pi
    mu = 4.0 * nu * nu
    return b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * b) ** 3)


def _breakpoints(f: _Integrand, R: float) -> np.ndarray:
    """Panel edges on (0, R]: zeros of the fastest factor, uniform before its turning point."""
    cfast = f.fastest
    spacing = math.pi / cfast
    fast_bessel = [(nu, c) for nu, c in f.bessel if c == max(cc for _, cc in f.bessel)]
    nu_f, c_f = max(fast_bessel)
    edges = []
    if not f.trig or c_f >= f.c_trig:
        count = int(R * c_f / math.pi) + 4
        z = _mcmahon_zeros(nu_f, count) / c_f
        start = (nu_f + 2.0) / c_f
        z = z[(z > start) & (z < R - 0.25 * spacing)]
        lead = np.arange(1, int(min(start, R) / spacing) + 1) * spacing
        if z.size:
            lead = lead[lead < z[0] - 0.25 * spacing]
        edges = np.concatenate([lead, z])
    else:
        edges = np.arange(1, int(R / spacing) + 1) * spacing
        edges = edges[edges < R - 0.25 * spacing]
    if len(edges) == 0 or edges[0] > 1.5 * spacing:
        edges = np.concatenate([[min(spacing, R)], edges])
    edges = np.unique(np.concatenate([edges, [R]]))
    return edges[edges <= R]


def _panel_sums(f: _Integrand, edges: np.ndarray, n: int) -> tuple[np.ndarray, float]:
    """Integral over each panel [edges[k], edges[k+1]] with n-point Gauss-Legendre.

    Also returns the L1 mass int |f|, which sets the roundoff floor.
    """
    x, w = _gauss_legendre(n)
    a, b = edges[:-1], edges[1:]
    out = []
    mass = 0.0
    per = max(1, _MAX_POINTS_PER_CHUNK // (n * max(1, len(f.bessel))))
    for lo in range(0, len(a), per):
        aa, bb = a[lo:lo + per], b[lo:lo + per]
        half = 0.5 * (bb - aa)
        nodes = (0.5 * (aa + bb))[:, None] + half[:, None] * x[None, :]
        vals = f.full(nodes) * w[None, :]
        out.append(vals.sum(axis=1) * half)
        mass += float((np.abs(vals).sum(axis=1) * half).sum())
    return (np.concatenate(out) if out else np.zeros(0)), mass


def _first_panel(f: _Integrand, rho0: float, n: int):
    x, w = _gauss_jacobi_01(n, f.beta)
    return rho0 ** (f.beta + 1.0) * np.dot(w, f.regular(rho0 * x))


def _nodes_per_panel(f: _Integrand) -> int:
    return 16 + int(math.ceil(2.0 * f.total_frequency / f.fastest))


def _cutoff(f: _Integrand) -> float:
    cmin = min(c for _, c in f.bessel)
    numax = max(abs(nu) for nu, _ in f.bessel)
    return max(_X_ASYMPTOTIC, 1.5 * numax**2) / cmin


def _evaluate(f: _Integrand, tol: float, method: str) -> Estimate:
    if method == "partition-extrapolation":
        return _evaluate_extrapolated(f, tol)
    if method != "partition-asymptotic":
        raise DomainError(f"unknown quadrature method {method!r}")
    R = _cutoff(f)
    n = _nodes_per_panel(f)
    flags: list[str] = []
    for attempt in range(4):
        edges = _breakpoints(f, R)
        rho0 = edges[0]
        nj = 40
        first = _first_panel(f, rho0, nj)
        first_chk = _first_panel(f, rho0, nj + 12)
        panels, _ = _panel_sums(f, edges, n)
        panels_chk, mass = _panel_sums(f, edges, n + 8)
        finite = first_chk + panels_chk.sum()
        finite_err = abs(first_chk - first) + abs(panels_chk.sum() - panels.sum())
        tail, tail_err, tail_mag, divergent = _tail(f, R)
        if divergent:
            return _divergent_estimate(f, R, len(edges), divergent)
        mass += abs(first_chk) + tail_mag
        total = finite + tail
        err = finite_err + tail_err + _BESSEL_RTOL * (len(f.bessel) + 1) * mass
        if err <= tol or attempt == 3:
            break
        R *= 1.6
        n += 8
    if err > tol:
        flags.append("tol-not-met")
    value = total.real if f.real else total
    return Estimate(
        value=value,
        error_bound=float(err),
        intervals_used=len(edges),
        method="partition-asymptotic",
        flags=tuple(flags),
        info={"cutoff": R},
    )


def _divergent_estimate(f, R, cells, freqs):
    # sign of the leading non-oscillatory term
    terms, s0, scale = _tail_expansion(f, 2)
    lead = 0.0
    for w, poly in terms:
        if abs(w) <= 1e-12 * scale:
            lead = poly[0].real
    value = math.copysign(math.inf, lead) if lead != 0 else math.inf
    return Estimate(
        value=value,
        error_bound=0.0,
        intervals_used=max(1, cells),
        method="partition-asymptotic",
        flags=("divergent",),
        info={"resonant_frequencies": freqs, "cutoff": R},
    )


def _wynn_epsilon(seq: np.ndarray):
    """Wynn epsilon table; returns (best estimate, error estimate)."""
    s = [complex(v) for v in seq]
    n = len(s)
    prev = [0j] * (n + 1)
    cur = list(s)
    estimates = [s[-1]]
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0:
                nxt.append(complex(1e300))
            else:
                nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            estimates.append(cur[-1])
        if len(cur) < 2:
            break
    if len(estimates) >= 2:
        return estimates[-1], abs(estimates[-1] - estimates[-2])
    return estimates[-1], abs(s[-1] - s[-2])


def _evaluate_extrapolated(f: _Integrand, tol: float) -> Estimate:
    n = _nodes_per_panel(f)
    R = _cutoff(f)
    edges = _breakpoints(f, R * 1.5)
    first = _first_panel(f, edges[0], 40)
    panels, _ = _panel_sums(f, edges, n)
    partial = first + np.cumsum(panels)
    tail_seq = partial[-41:]
    value, err = _wynn_epsilon(tail_seq)
    value2, _ = _wynn_epsilon(tail_seq[:-2])
    err = max(err, abs(value - value2))
    flags = ("tol-not-met",) if err > tol else ()
    val = value.real if f.real else value
    return Estimate(
        value=val,
        error_bound=float(err) if math.isfinite(err) else 1e300,
        intervals_used=len(edges),
        method="partition-extrapolation",
        flags=flags,
    )


# -- public operations ------------------------------------------------------------------

def eval_bessel_product(spec: IntegralSpec, tol: float = 1e-10, method: str = "partition-asymptotic") -> Estimate:
    """int_0^inf rho^(alpha-1) prod J_{nu_n}(c_n rho) d rho."""
    if not check_convergence(spec):
        raise DomainError(
            f"integral diverges: need -sum(nu) < alpha < M/2 + 1, got alpha={spec.alpha}, M={spec.M}"
        )
    bessel, sign = _normalize_bessel(spec.factors)
    f = _Integrand(alpha=spec.alpha, bessel=bessel, sign=sign)
    est = _evaluate(f, tol, method)
    if est.divergent:
        raise DivergenceError(f"non-oscillatory tail at frequencies {est.info['resonant_frequencies']}")
    return est


def _trig_integrand(spec: TrigBesselSpec, trig, real: bool) -> _Integrand:
    bessel, sign = _normalize_bessel(spec.factors)
    s0 = spec.alpha - 1.0 - 0.5 * len(bessel)
    if s0 >= 0:
        raise DomainError("integrand does not decay: need alpha - 1 - (M-1)/2 < 0")
    if spec.alpha + sum(nu for nu, _ in bessel) <= 0:
        raise DomainError("integrand not integrable at the origin")
    return _Integrand(alpha=spec.alpha, bessel=bessel, trig=trig, c_trig=spec.c_trig, sign=sign, real=real)


def eval_trig_bessel(spec: TrigBesselSpec, tol: float = 1e-10, method: str = "partition-asymptotic") -> Estimate:
    """int_0^inf rho^(alpha-1) [A cos + B sin](c rho) prod J d rho.

    A non-convergent tail (non-oscillatory term decaying no faster than 1/rho)
    yields an Estimate flagged ``divergent`` with an infinite value.
    """
    A, B = spec.A, spec.B
    trig = ((0.5 * A - 0.5j * B, 1), (0.5 * A + 0.5j * B, -1))
    f = _trig_integrand(spec, trig, real=True)
    return _evaluate(f, tol, method)


def eval_exp_bessel(spec: TrigBesselSpec, sign: int, tol: float = 1e-10) -> tuple[complex, float]:
    """Complex integral with exp(sign * i c rho) in place of the trig bracket.

    Only the Bessel factors, alpha and c_trig of ``spec`` are used.
    """
    f = _trig_integrand(spec, ((1.0 + 0j, 1 if sign > 0 else -1),), real=False)
    est = _evaluate(f, tol, "partition-asymptotic")
    if est.divergent:
        raise DivergenceError("non-oscillatory tail")
    return complex(est.value), est.error_bound
