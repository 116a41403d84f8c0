"""Phase-space (delta-function) evaluation of umklapp-type integrals.

In two dimensions, with 2N radii c_n, signs s_n = (-1)^(n-1) and a target
vector G = g (cos phi, sin phi),

    f = (2 pi)^(1-2N) int prod_n d theta_n  delta^2(sum_n s_n c_n u(theta_n) - G) W

equals int_0^inf rho J_0(g rho) prod_n J_0(c_n rho) d rho for W = 1.

Evaluation strategy, from the inside out:

* the last two angles are fixed by the two delta constraints (two-circle
  intersection, Jacobian 2 * triangle area);
* the angle before them is integrated in u = r^2, the squared residual. For
  unit weight the integrand is 1/sqrt(quartic in u) and the integral is a
  complete elliptic integral; other weights use Gauss-Chebyshev nodes after
  subtracting the weight's endpoint value;
* the remaining outer angles are integrated adaptively (N = 2) or by scrambled
  Sobol quasi-Monte Carlo restricted to kinematically feasible arcs (N >= 3).

In three dimensions the same quantity reduces to int r^2 prod j_0(c_n r) dr,
which is evaluated exactly by a product-to-sum expansion and cross-checked by a
Gaussian-smeared Monte Carlo estimate.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import integrate, stats
from scipy import special as sc
from scipy.stats import qmc

from .quadrature import Estimate
from .specfun import DomainError

__all__ = [
    "ScatterSpec",
    "OracleBudget",
    "ThresholdFit",
    "eval_2d_angular",
    "eval_3d_angular",
    "trig_expansion_3d",
    "threshold_scan",
    "triangle_area",
]

log = logging.getLogger(__name__)

WEIGHTS = ("unit", "R1", "R2", "R3")
EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ScatterSpec:
    """Radii c_1..c_2N (odd index: final states), target length g, weight tag."""

    dimension: int
    N: int
    radii: tuple[float, ...]
    g: float
    weight: str = "unit"
    phi_dk: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if self.dimension not in (2, 3):
            raise DomainError("dimension must be 2 or 3")
        if self.N < 1:
            raise DomainError("N must be a positive integer")
        if len(self.radii) != 2 * self.N:
            raise DomainError(f"expected {2 * self.N} radii, got {len(self.radii)}")
        if any(not (r > 0 and math.isfinite(r)) for r in self.radii):
            raise DomainError("radii must be positive and finite")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise DomainError("g must be positive")
        if self.weight not in WEIGHTS:
            raise DomainError(f"weight must be one of {WEIGHTS}")
        if self.weight in ("R2", "R3") and (self.dimension != 2 or self.N != 2):
            raise DomainError("R2/R3 weights are defined for dimension 2, N = 2 only")
        if self.dimension == 3 and self.weight not in ("unit", "R1"):
            raise DomainError("3D evaluation supports the unit weight only")

    def with_g(self, g: float) -> "ScatterSpec":
        return replace(self, g=g)

    @property
    def feasible(self) -> bool:
        lo, hi = _reach(self.radii)
        return lo <= self.g <= hi


@dataclass(frozen=True)
class OracleBudget:
    """Resolution knobs for the angular oracles."""

    qmc_log2_points: int = 13
    replicates: int = 8
    inner_nodes: int = 32
    epsrel: float = 1e-10
    epsabs: float = 1e-13
    quad_limit: int = 400
    mc_log2_points: int = 15
    seed: int = 0

    def __post_init__(self):
        if self.qmc_log2_points < 4 or self.replicates < 2 or self.inner_nodes < 4:
            raise DomainError("inconsistent oracle budget")
        if self.mc_log2_points < 0:
            raise DomainError("inconsistent oracle budget")


@dataclass(frozen=True)
class ThresholdFit:
    exponent: float
    exponent_stderr: float
    epsilon_window: tuple[float, float]
    points: int
    samples: tuple[tuple[float, float], ...] = field(default=(), compare=False)

    def __post_init__(self):
        lo, hi = self.epsilon_window
        if not 0 < lo < hi:
            raise ValueError("epsilon window must satisfy 0 < lo < hi")
        if self.points < 5:
            raise ValueError("a threshold fit needs at least 5 points")
        if self.exponent_stderr < 0:
            raise ValueError("stderr must be non-negative")


# -- geometry helpers ----------------------------------------------------------------

def triangle_area(a, b, c):
    """Heron's formula, vectorized; degenerate or impossible triangles give 0."""
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c)))
    q = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
    out = 0.25 * np.sqrt(np.maximum(q, 0.0))
    return float(out) if out.ndim == 0 else out


def _reach(radii: Sequence[float]) -> tuple[float, float]:
    """Range of |sum of vectors| with the given lengths and free directions."""
    s = float(sum(radii))
    m = float(max(radii))
    return max(0.0, 2.0 * m - s), s


def _unit(theta):
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _pair_branches(Q: np.ndarray, ca: float, cb: float):
    """Solve ca u(ta) - cb u(tb) = Q; returns angles (..., 2) for both branches."""
    r = np.linalg.norm(Q, axis=-1)
    phi = np.arctan2(Q[..., 1], Q[..., 0])
    with np.errstate(invalid="ignore", divide="ignore"):
        cosb = np.clip((ca * ca + r * r - cb * cb) / (2.0 * ca * r), -1.0, 1.0)
    beta = np.arccos(cosb)
    ta = np.stack([phi + beta, phi - beta], axis=-1)
    va = ca * _unit(ta)
    vb = (va - Q[..., None, :]) / cb
    tb = np.arctan2(vb[..., 1], vb[..., 0])
    return ta, tb


def _elliptic_span_gaps(d21, d43, d42, d31):
    """int_{r2}^{r3} du / sqrt(|(u-r1)(u-r2)(u-r3)(u-r4)|) from the root gaps d_ij = r_i - r_j."""
    p = d21 * d43 / (d42 * d31)
    return 2.0 * sc.ellipkm1(np.maximum(p, 1e-300)) / np.sqrt(d42 * d31)


def _weight(spec: ScatterSpec, t1, t2, t3, t4):
    if spec.weight in ("unit", "R1"):
        return np.ones(np.broadcast(t1, t2, t3, t4).shape)
    r2 = np.cos(t1 + t2)
    if spec.weight == "R2":
        return np.broadcast_to(r2, np.broadcast(t1, t2, t3, t4).shape)
    return r2 * np.cos(t3 + t4)


@functools.lru_cache(maxsize=8)
def _legendre(n: int):
    x, w = sc.roots_legendre(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _span_rule(r1, lo, hi, r4, g_lo, g_hi, n: int):
    """Nodes and weights for int_lo^hi F(u) du / sqrt(|(u-r1)(u-lo)(u-hi)(u-r4)|).

    ``g_lo = lo - r1`` and ``g_hi = r4 - hi`` are passed in accurately. Each
    half of [lo, hi] is mapped by u - r1 = g_lo cosh^2(t) (lower half) or
    r4 - u = g_hi cosh^2(t) (upper half), which turns the endpoint root and the
    nearby outer root into a constant 2 dt; the rest is smooth, so plain
    Gauss-Legendre converges uniformly as either gap closes.
    """
    x, w = _legendre(n)
    half = 0.5 * (hi - lo)
    d1 = np.maximum(g_lo, 1e-300)
    d4 = np.maximum(g_hi, 1e-300)
    T1 = np.arccosh(np.sqrt((d1 + half) / d1))
    T4 = np.arccosh(np.sqrt((d4 + half) / d4))
    t1 = T1[:, None] * x[None, :]
    t4 = T4[:, None] * x[None, :]
    # offsets from lo and hi: g (cosh^2 - 1) = g sinh^2
    e_lo = d1[:, None] * np.sinh(t1) ** 2
    e_hi = d4[:, None] * np.sinh(t4) ** 2
    u_lo = lo[:, None] + e_lo
    u_hi = hi[:, None] - e_hi
    w_lo = 2.0 * T1[:, None] * w[None, :] / np.sqrt((2 * half[:, None] - e_lo) * (g_hi[:, None] + 2 * half[:, None] - e_lo))
    w_hi = 2.0 * T4[:, None] * w[None, :] / np.sqrt((g_lo[:, None] + 2 * half[:, None] - e_hi) * (2 * half[:, None] - e_hi))
    return np.concatenate([u_lo, u_hi], axis=1), np.concatenate([w_lo, w_hi], axis=1)


def _middle_and_pair(spec: ScatterSpec, P: np.ndarray, p: np.ndarray, outer_angles: np.ndarray,
                     budget: "OracleBudget"):
    """Integral over the last three angles for residual vectors P (batch, 2) of length p.

    Returns (values, error) arrays over the batch.
    """
    c = spec.radii
    cm, ca, cb = c[-3], c[-2], c[-1]
    # roots of the quartic in u = |Q|^2 are squared lengths; gaps between them
    # are formed as (x - y)(x + y) from the lengths to avoid cancellation
    d1, s1 = np.abs(p - cm), p + cm
    d2, s2 = np.full(p.shape, abs(ca - cb)), np.full(p.shape, ca + cb)
    dmin, dmax = np.minimum(d1, d2), np.maximum(d1, d2)
    smin, smax = np.minimum(s1, s2), np.maximum(s1, s2)
    ok = smin > dmax
    out = np.zeros(p.shape)
    err = np.zeros(p.shape)
    if not ok.any():
        return out, err
    dmin, dmax, smin, smax = dmin[ok], dmax[ok], smin[ok], smax[ok]
    r1, lo, hi, r4 = dmin**2, dmax**2, smin**2, smax**2
    g_lo = (dmax - dmin) * (dmax + dmin)
    g_hi = (smax - smin) * (smax + smin)
    if spec.weight in ("unit", "R1"):
        d42 = (smax - dmax) * (smax + dmax)
        d31 = (smin - dmin) * (smin + dmin)
        out[ok] = 8.0 * _elliptic_span_gaps(g_lo, g_hi, d42, d31)
        return out, err

    Pk = P[ok]
    pk = p[ok]
    phiP = np.arctan2(Pk[:, 1], Pk[:, 0])
    t1 = outer_angles[ok, 0]

    def weight_sum(u):
        # u: (batch, n) -> sum of W over the 2 x 2 branches
        with np.errstate(invalid="ignore", divide="ignore"):
            cpsi = np.clip((u - pk[:, None] ** 2 - cm * cm) / (2.0 * pk[:, None] * cm), -1.0, 1.0)
        psi = np.arccos(cpsi)
        total = np.zeros(u.shape)
        for sgn in (1.0, -1.0):
            t2 = phiP[:, None] + sgn * psi
            Q = Pk[:, None, :] + cm * _unit(t2)
            t3, t4 = _pair_branches(Q, ca, cb)
            w = _weight(spec, t1[:, None, None], t2[..., None], t3, t4)
            total += w.sum(axis=-1)
        return total

    n = budget.inner_nodes
    u, w = _span_rule(r1, lo, hi, r4, g_lo, g_hi, n)
    coarse = (weight_sum(u) * w).sum(axis=1)
    u, w = _span_rule(r1, lo, hi, r4, g_lo, g_hi, 2 * n)
    fine = (weight_sum(u) * w).sum(axis=1)
    out[ok] = 2.0 * fine
    err[ok] = 2.0 * np.abs(fine - coarse)
    return out, err


def _stage(P, p, c, s, lo_rem, hi_rem, v, branch):
    """Sample the next angle in residual-length space.

    ``v`` in [0, 1] places the new residual length r along the feasible range
    by an arcsine map; ``branch`` (+1 or -1) picks the mirror solution.
    Returns (new residual vectors, their lengths r, angles, Jacobian weights).
    The distances from r to both ends are carried explicitly so the triangle
    area stays accurate where it vanishes.
    """
    L = np.maximum(np.abs(p - c), lo_rem)
    H = np.minimum(p + c, hi_rem)
    feasible = H > L
    span = np.where(feasible, H - L, 0.0)
    d_lo = span * np.sin(0.5 * math.pi * v) ** 2
    d_hi = span * np.cos(0.5 * math.pi * v) ** 2
    r = np.where(d_lo <= d_hi, L + d_lo, H - d_hi)
    # 16 A^2 = (p + c + r)(p + c - r)(r - |p - c|)(r + |p - c|)
    q = (p + c + r) * (d_hi + (p + c - H)) * (d_lo + (L - np.abs(p - c))) * (r + np.abs(p - c))
    area = 0.25 * np.sqrt(np.maximum(q, 0.0))
    with np.errstate(invalid="ignore", divide="ignore"):
        jac = np.where(
            feasible & (area > 0),
            2.0 * r * span * 0.5 * math.pi * np.sin(math.pi * v) / (2.0 * area),
            0.0,
        )
    psi = np.arctan2(4.0 * area, s * (p * p + c * c - r * r))
    phiP = np.arctan2(P[:, 1], P[:, 0])
    theta = phiP + branch * psi
    Pn = P - s * c * _unit(theta)
    return Pn, r, theta, jac


# -- 2D oracle --------------------------------------------------------------------------

def _eval_n1(spec: ScatterSpec) -> Estimate:
    ca, cb = spec.radii
    area = triangle_area(ca, cb, spec.g)
    if area == 0:
        raise DomainError("degenerate (tangent) configuration: the integral diverges")
    G = spec.g * _unit(np.array([spec.phi_dk]))
    ta, tb = _pair_branches(G, ca, cb)
    w = _weight(spec, ta, tb, ta, tb).sum()
    value = w / (2.0 * area) / (2.0 * math.pi)
    return Estimate(value, 4e-16 * abs(value), 1, "angular-closed")


def _eval_n2(spec: ScatterSpec, budget: OracleBudget) -> Estimate:
    c1, c2, c3, c4 = spec.radii
    g = spec.g
    lo_rem, hi_rem = _reach((c2, c3, c4))
    L = max(abs(g - c1), lo_rem)
    H = min(g + c1, hi_rem)
    if not H > L:
        return Estimate(0.0, 0.0, 1, "angular-grid")
    G = g * np.array([math.cos(spec.phi_dk), math.sin(spec.phi_dk)])

    # residual lengths where two roots of the inner quartic meet (log singularities)
    d34, s34 = abs(c3 - c4), c3 + c4
    special = [c2 + d34, c2 - d34, d34 - c2, s34 - c2, c2, 0.0]
    brk = sorted({
        float(np.arccos(1.0 - 2.0 * (q - L) / (H - L)) / math.pi)
        for q in special
        if L < q < H
    })

    inner_err = [0.0]

    def integrand(v, branch):
        Pn, r, theta, jac = _stage(G[None, :], np.array([g]), c1, 1.0, lo_rem, hi_rem, np.array([v]), branch)
        if jac[0] == 0:
            return 0.0
        val, err = _middle_and_pair(spec, Pn, r, theta[:, None], budget)
        inner_err[0] = max(inner_err[0], float(jac[0] * err[0]))
        # the stage Jacobian already carries the factor 2 for the mirror branch
        return float(0.5 * jac[0] * val[0])

    total = 0.0
    qerr = 0.0
    evals = 0
    for branch in (1, -1):
        val, err, info = integrate.quad(
            integrand, 0.0, 1.0, args=(branch,), points=brk or None,
            epsabs=budget.epsabs, epsrel=budget.epsrel, limit=budget.quad_limit, full_output=1,
        )[:3]
        total += val
        qerr += err
        evals += int(info["neval"])
    norm = (2.0 * math.pi) ** -3
    value = norm * total
    error = norm * (qerr + inner_err[0]) + 64 * EPS * abs(value)
    return Estimate(value, error, max(1, evals), "angular-grid")


def _eval_qmc(spec: ScatterSpec, budget: OracleBudget) -> Estimate:
    N = spec.N
    c = spec.radii
    dims = 2 * N - 3
    G = spec.g * np.array([math.cos(spec.phi_dk), math.sin(spec.phi_dk)])
    n = 2 ** budget.qmc_log2_points
    reach = [_reach(c[k + 1:]) for k in range(dims)]
    seeds = np.random.SeedSequence(budget.seed).spawn(budget.replicates)
    means = []
    for ss in seeds:
        rng = np.random.Generator(np.random.Philox(ss))
        u = qmc.Sobol(dims, scramble=True, seed=rng).random_base2(budget.qmc_log2_points)
        P = np.broadcast_to(G, (n, 2)).copy()
        p = np.full(n, spec.g)
        weight = np.ones(n)
        angles = np.zeros((n, dims))
        for k in range(dims):
            s = 1.0 if k % 2 == 0 else -1.0
            branch = np.where(u[:, k] < 0.5, 1.0, -1.0)
            v = np.where(u[:, k] < 0.5, 2.0 * u[:, k], 2.0 * u[:, k] - 1.0)
            P, p, theta, jac = _stage(P, p, c[k], s, reach[k][0], reach[k][1], v, branch)
            weight = weight * jac
            angles[:, k] = theta
        live = weight > 0
        vals = np.zeros(n)
        if live.any():
            inner, _ = _middle_and_pair(spec, P[live], p[live], angles[live], budget)
            vals[live] = weight[live] * inner
        means.append(math.fsum(vals) / n)
    means = np.array(means)
    norm = (2.0 * math.pi) ** (1 - 2 * N)
    value = norm * float(means.mean())
    stderr = norm * float(means.std(ddof=1)) / math.sqrt(len(means))
    return Estimate(
        value,
        4.0 * stderr + 64 * EPS * abs(value),
        n * budget.replicates,
        "angular-qmc",
        seed=budget.seed,
        info={"stderr": stderr, "replicate_means": (norm * means).tolist()},
    )


def eval_2d_angular(spec: ScatterSpec, budget: OracleBudget = OracleBudget()) -> Estimate:
    """Two-dimensional phase-space integral with the chosen angular weight.

    Exact zero (with zero error) when the target cannot be reached by any
    arrangement of the radii.
    """
    if spec.dimension != 2:
        raise DomainError("eval_2d_angular needs dimension 2")
    if not spec.feasible:
        return Estimate(0.0, 0.0, 1, "angular-infeasible")
    if spec.N == 1:
        return _eval_n1(spec)
    if spec.N == 2:
        return _eval_n2(spec, budget)
    return _eval_qmc(spec, budget)


# -- 3D -----------------------------------------------------------------------------------

_RESONANCE_RTOL = 1e-12


def trig_expansion_3d(coefficients: Sequence[float]) -> float:
    """int_0^inf r^2 prod_n j_0(c_n r) dr, exactly, by product-to-sum expansion.

    prod sin(c_n r) is expanded into 2^(M-1) sines (M odd) or cosines (M even)
    of frequency w = c_1 + sum_{n>1} sigma_n c_n, and each term is integrated
    against r^(2-M) using the finite-part values

        int r^-(2m+1) sin(w r) dr = (-1)^m (pi/2) sgn(w) |w|^(2m) / (2m)!
        int r^-(2m)   cos(w r) dr = (-1)^m  pi |w|^(2m-1) / (2 (2m-1)!)

    whose singular parts cancel in the sum. A vanishing frequency in the odd
    case contributes sgn(0) = 0 (the principal value).
    """
    cs = [float(x) for x in coefficients]
    M = len(cs)
    if not 3 <= M <= 12:
        raise DomainError("trig_expansion_3d supports 3 to 12 coefficients")
    if any(not x > 0 for x in cs):
        raise DomainError("coefficients must be positive")
    scale = sum(cs)
    if 2.0 * max(cs) > scale * (1.0 + _RESONANCE_RTOL):
        return 0.0
    terms = []
    resonant = False
    for signs in itertools.product((1.0, -1.0), repeat=M - 1):
        w = cs[0] + sum(s * x for s, x in zip(signs, cs[1:]))
        if abs(w) <= _RESONANCE_RTOL * scale:
            w = 0.0
        sgn = math.prod(signs)
        if M % 2 == 1:
            m = (M - 3) // 2
            if w == 0.0:
                resonant = True
                if m == 0:
                    continue
            term = (-1) ** m * 0.5 * math.pi * math.copysign(1.0, w) * abs(w) ** (2 * m) / math.factorial(2 * m)
            if w == 0.0:
                term = 0.0
        else:
            m = (M - 2) // 2
            term = (-1) ** m * math.pi * abs(w) ** (2 * m - 1) / (2.0 * math.factorial(2 * m - 1))
        terms.append(sgn * term)
    if resonant:
        log.info("resonant frequency in a 1/r^odd kernel; principal value taken")
    lead = 2.0 ** (1 - M) * (-1.0) ** ((M - 1) // 2 if M % 2 else M // 2)
    return lead * math.fsum(terms) / math.prod(cs)


def _smeared_mc(spec: ScatterSpec, budget: OracleBudget, sigmas=(0.08, 0.04, 0.02)):
    """Gaussian-smeared delta^3 averaged over random directions; last one analytic."""
    c = spec.radii
    N = spec.N
    free = 2 * N - 1
    n = 2 ** budget.mc_log2_points
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(budget.seed)))
    u = qmc.Sobol(2 * free, scramble=True, seed=rng).random_base2(budget.mc_log2_points)
    W = np.zeros((n, 3))
    W[:, 0] = spec.g
    for k in range(free):
        ct = 1.0 - 2.0 * u[:, 2 * k]
        st = np.sqrt(np.maximum(0.0, 1.0 - ct * ct))
        ph = 2.0 * math.pi * u[:, 2 * k + 1]
        d = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1)
        s = 1.0 if k % 2 == 0 else -1.0
        W -= s * c[k] * d
    w = np.maximum(np.linalg.norm(W, axis=-1), 1e-300)
    cl = c[-1]
    vals = []
    for sig in sigmas:
        s2 = sig * sig
        avg = (2.0 * math.pi * s2) ** -1.5 * (s2 / (2.0 * w * cl)) * (
            np.exp(-((w - cl) ** 2) / (2.0 * s2)) - np.exp(-((w + cl) ** 2) / (2.0 * s2))
        )
        vals.append(2.0 * math.pi**2 * float(avg.mean()))
    richardson = (4.0 * vals[-1] - vals[-2]) / 3.0
    return richardson, dict(zip(sigmas, vals))


def eval_3d_angular(spec: ScatterSpec, budget: OracleBudget = OracleBudget(), monte_carlo: bool = True) -> Estimate:
    """int_0^inf r^2 j_0(g r) prod j_0(c_n r) dr with a smeared-MC cross-check."""
    if spec.dimension != 3:
        raise DomainError("eval_3d_angular needs dimension 3")
    coeffs = list(spec.radii) + [spec.g]
    value = trig_expansion_3d(coeffs)
    info = {}
    if monte_carlo and budget.mc_log2_points > 0:
        mc, per_sigma = _smeared_mc(spec, budget)
        info = {"mc_value": mc, "mc_by_sigma": per_sigma}
    return Estimate(value, 1e-13 * max(abs(value), 1e-300), 1, "trig-expansion", seed=budget.seed, info=info)


# -- threshold behaviour ----------------------------------------------------------------

def threshold_scan(
    spec: ScatterSpec,
    epsilon_grid: Sequence[float],
    budget: OracleBudget = OracleBudget(),
) -> ThresholdFit:
    """Fit f ~ eps^p with g = sum(radii) - eps, by least squares in log-log.

    Points with f <= 0 are dropped from the ends of the window; fewer than 5
    surviving points is an error.
    """
    eps = np.sort(np.asarray(epsilon_grid, dtype=float))
    if np.any(eps <= 0):
        raise DomainError("epsilon values must be positive")
    total = sum(spec.radii)
    if np.any(eps >= total):
        raise DomainError("epsilon must be smaller than the sum of the radii")
    evaluate = eval_2d_angular if spec.dimension == 2 else (lambda s, b: eval_3d_angular(s, b, monte_carlo=False))
    f = np.array([evaluate(spec.with_g(total - e), budget).value for e in eps])
    pos = f > 0
    if not pos.all():
        idx = np.flatnonzero(pos)
        if idx.size == 0:
            raise DomainError("no positive values in the epsilon window")
        # longest run of positive values
        runs = np.split(idx, np.flatnonzero(np.diff(idx) != 1) + 1)
        keep = max(runs, key=len)
        eps, f = eps[keep], f[keep]
    if len(eps) < 5:
        raise DomainError(f"only {len(eps)} usable points in the threshold window")
    fit = stats.linregress(np.log(eps), np.log(f))
    return ThresholdFit(
        exponent=float(fit.slope),
        exponent_stderr=float(fit.stderr),
        epsilon_window=(float(eps[0]), float(eps[-1])),
        points=len(eps),
        samples=tuple(zip(eps.tolist(), f.tolist())),
    )
