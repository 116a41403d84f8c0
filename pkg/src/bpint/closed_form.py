"""Closed form of the Bessel-product integral when the largest coefficient dominates.

For c_M > sum_{n<M} c_n the integral equals

    2^(alpha-1) c_M^(nu_M - mu) Gamma(mu/2) / Gamma(nu_M - mu/2 + 1)
        * prod_{n<M} c_n^nu_n / Gamma(nu_n + 1)
        * F_C(mu/2, mu/2 - nu_M; nu_1 + 1, ..., nu_{M-1} + 1; c_1^2/c_M^2, ...)

with mu = alpha + sum(nu) and F_C the Lauricella function of type C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .constraints import IntegralSpec, Polygonal, check_convergence, check_polygonal, predict_vanishing
from .quadrature import Estimate, _normalize_bessel
from .specfun import DomainError, log_pochhammer, reciprocal_gamma

__all__ = ["LauricellaParams", "PoleError", "lauricella_fc", "eval_exton", "MAX_ORDER"]

MAX_ORDER = 400
_NEAR_BOUNDARY = 0.95
_RATIO_WINDOW = 8


class PoleError(DomainError):
    """A lower parameter sits at a non-positive integer."""


@dataclass(frozen=True)
class LauricellaParams:
    a: float
    b: float
    denominators: tuple[float, ...]
    variables: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "denominators", tuple(float(d) for d in self.denominators))
        object.__setattr__(self, "variables", tuple(float(x) for x in self.variables))
        if len(self.denominators) != len(self.variables):
            raise DomainError("one denominator per variable required")
        if any(not 0 <= x < 1 for x in self.variables):
            raise DomainError("variables must lie in [0, 1)")
        if self.radius >= 1:
            raise DomainError(f"outside the convergence domain: sum sqrt(x) = {self.radius:.6g} >= 1")
        for d in self.denominators:
            if d <= 0 and d == math.floor(d):
                raise PoleError(f"denominator {d} is a non-positive integer")

    @property
    def radius(self) -> float:
        return sum(math.sqrt(x) for x in self.variables)


def _log_0f1_coefficients(d: float, x: float, n: int):
    """log|x^k / ((d)_k k!)| and signs, k = 0..n."""
    lp, sp = log_pochhammer(d, n)
    k = np.arange(n + 1)
    with np.errstate(divide="ignore"):
        lx = k * math.log(x) if x > 0 else np.where(k == 0, 0.0, -np.inf)
    return lx - lp - sc.gammaln(k + 1.0), sp.copy()


def _log_cauchy(la, sa, lb, sb):
    n = len(la)
    lout = np.full(n, -np.inf)
    sout = np.zeros(n)
    for m in range(n):
        vals = la[: m + 1] + lb[m::-1]
        sig = sa[: m + 1] * sb[m::-1]
        ok = np.isfinite(vals) & (sig != 0)
        if not ok.any():
            continue
        v, s = vals[ok], sig[ok]
        top = v.max()
        tot = np.dot(s, np.exp(v - top))
        if tot != 0:
            lout[m] = top + math.log(abs(tot))
            sout[m] = math.copysign(1.0, tot)
    return lout, sout


def _graded_terms(params: LauricellaParams, n: int):
    """log|T_k| and sign(T_k), where T_k collects all multi-indices of total order k."""
    le = np.full(n + 1, -np.inf)
    le[0] = 0.0
    se = np.zeros(n + 1)
    se[0] = 1.0
    for d, x in zip(params.denominators, params.variables):
        lc, scf = _log_0f1_coefficients(d, x, n)
        le, se = _log_cauchy(le, se, lc, scf)
    la, sa = log_pochhammer(params.a, n)
    lb, sb = log_pochhammer(params.b, n)
    return le + la + lb, se * sa * sb


def lauricella_fc(params: LauricellaParams, tol: float = 1e-12) -> Estimate:
    """Lauricella F_C, summed in order of total degree |k|.

    ``tol`` is relative to the value. Terms are built in log space, so orders
    up to ``MAX_ORDER`` neither overflow nor underflow. When the sum of
    square roots of the variables exceeds 0.95 the result carries the flag
    ``near-boundary`` and whatever error bound the truncated tail allows.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    n = 32
    while True:
        logt, sign = _graded_terms(params, n)
        terms = np.where(sign != 0, sign * np.exp(np.minimum(logt, 700.0)), 0.0)
        partial = math.fsum(terms)
        scale = max(abs(partial), 1e-300)
        nz = np.flatnonzero(sign != 0)
        last = nz[-1]
        if last < n - 1:
            tail = 0.0  # terminating series
        else:
            tail_logs = logt[-_RATIO_WINDOW:]
            r = float(np.exp(np.max(np.diff(tail_logs))))
            tail = abs(terms[-1]) * r / (1.0 - r) if r < 1 else math.inf
        if tail <= tol * scale or n >= MAX_ORDER:
            break
        n = min(2 * n, MAX_ORDER)
    roundoff = 4e-16 * math.fsum(np.abs(terms)) + 2e-16 * abs(partial)
    flags = []
    if params.radius > _NEAR_BOUNDARY:
        flags.append("near-boundary")
    if not math.isfinite(tail):
        tail = abs(partial)
        flags.append("tail-divergent")
    if tail > tol * scale:
        flags.append("tol-not-met")
    return Estimate(
        value=partial,
        error_bound=tail + roundoff,
        intervals_used=n + 1,
        method="lauricella-series",
        flags=tuple(flags),
    )


def eval_exton(spec: IntegralSpec, tol: float = 1e-12) -> Estimate:
    """Closed-form value for a strictly dominant largest coefficient.

    Returns exactly 0.0 with zero error when the order condition for
    vanishing holds (a reciprocal-gamma zero of the prefactor).
    """
    if not check_convergence(spec):
        raise DomainError("integral does not converge for these parameters")
    if check_polygonal(spec) is not Polygonal.VIOLATED:
        raise DomainError("closed form requires the largest coefficient to exceed the sum of the others")
    report = predict_vanishing(spec)
    if report.predicted_zero:
        return Estimate(0.0, 0.0, 1, "exton-zero")

    factors, sign = _normalize_bessel(spec.factors)
    imax = spec.max_index
    nu_m, c_m = factors[imax]
    rest = [f for i, f in enumerate(factors) if i != imax]
    mu = spec.alpha + sum(nu for nu, _ in factors)

    rg = reciprocal_gamma(nu_m - mu / 2.0 + 1.0)
    if rg == 0.0:
        return Estimate(0.0, 0.0, 1, "exton-zero")
    log_pref = (spec.alpha - 1.0) * math.log(2.0) + (nu_m - mu) * math.log(c_m) + sc.gammaln(mu / 2.0)
    pref = sign * rg * sc.gammasgn(mu / 2.0)
    for nu, c in rest:
        log_pref += nu * math.log(c)
        pref *= reciprocal_gamma(nu + 1.0)
    pref *= math.exp(log_pref)

    params = LauricellaParams(
        a=mu / 2.0,
        b=mu / 2.0 - nu_m,
        denominators=tuple(nu + 1.0 for nu, _ in rest),
        variables=tuple((c / c_m) ** 2 for _, c in rest),
    )
    fc = lauricella_fc(params, tol)
    return Estimate(
        value=pref * fc.value,
        error_bound=abs(pref) * fc.error_bound,
        intervals_used=fc.intervals_used,
        method="exton",
        flags=fc.flags,
    )
