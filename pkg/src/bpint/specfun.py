"""Special-function kernels shared by the quadrature, closed-form and physics layers.

Bessel, spherical Bessel and reciprocal gamma values come from ``scipy.special``
(Amos / Cephes) behind the domain checks below; the complete elliptic integral,
the Hankel asymptotic coefficients, signed log-Pochhammer tables and the
generalized exponential integral for complex argument are computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

__all__ = [
    "DomainError",
    "SingularityError",
    "Order",
    "bessel_j",
    "spherical_j",
    "elliptic_k",
    "reciprocal_gamma",
    "binomial",
    "hankel_coefficients",
    "log_pochhammer",
    "expint_e",
]

_CLASSIFY_TOL = 1e-12


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Argument at a point where the function diverges."""


@dataclass(frozen=True)
class Order:
    """Real Bessel order with integer / half-integer classification."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"Bessel order must be finite, got {self.value!r}")
        object.__setattr__(self, "value", float(self.value))

    @property
    def is_integer(self) -> bool:
        return abs(self.value - round(self.value)) <= _CLASSIFY_TOL

    @property
    def is_half_integer(self) -> bool:
        shifted = self.value - 0.5
        return abs(shifted - round(shifted)) <= _CLASSIFY_TOL

    def __float__(self) -> float:
        return self.value


def _order_value(nu) -> float:
    return nu.value if isinstance(nu, Order) else Order(float(nu)).value


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    if np.any(arr < 0):
        raise DomainError("argument must be non-negative")
    return arr


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for real order and x >= 0.

    Accepts scalars or arrays for ``x``; returns a float for scalar input.
    """
    v = _order_value(nu)
    arr = _check_x(x)
    out = sc.jv(v, arr)
    return float(out) if np.ndim(out) == 0 else out


def spherical_j(n: int, x):
    """Spherical Bessel function j_n(x) = sqrt(pi / 2x) J_{n+1/2}(x)."""
    if int(n) != n or n < 0:
        raise DomainError(f"spherical order must be a non-negative integer, got {n!r}")
    arr = _check_x(x)
    out = sc.spherical_jn(int(n), arr)
    return float(out) if np.ndim(out) == 0 else out


def elliptic_k(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention K(k).

    Arithmetic-geometric mean: K(k) = pi / (2 AGM(1, sqrt(1 - k^2))).
    """
    if not math.isfinite(k):
        raise DomainError("modulus must be finite")
    if k < 0:
        raise DomainError(f"modulus must be in [0, 1), got {k}")
    if k >= 1:
        raise SingularityError(f"K(k) diverges logarithmically as k -> 1 (k={k})")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def reciprocal_gamma(x: float) -> float:
    """1 / Gamma(x); exactly 0.0 at the non-positive integers."""
    if not math.isfinite(x):
        raise DomainError("argument must be finite")
    if x <= 0 and x == math.floor(x):
        return 0.0
    return float(sc.rgamma(x))


def binomial(n: int, l: int) -> int:
    if n < 0 or not 0 <= l <= n:
        raise DomainError(f"binomial({n}, {l}) requires 0 <= l <= n")
    return math.comb(n, l)


def hankel_coefficients(nu: float, kmax: int) -> np.ndarray:
    """Coefficients a_k(nu), k = 0..kmax, of the Hankel large-argument expansion.

    a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j - 1)^2) / (k! 8^k).
    """
    mu = 4.0 * nu * nu
    out = np.empty(kmax + 1)
    out[0] = 1.0
    for k in range(1, kmax + 1):
        out[k] = out[k - 1] * (mu - (2 * k - 1) ** 2) / (8.0 * k)
    return out


def log_pochhammer(x: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """log|(x)_k| and sign((x)_k) for k = 0..n.

    A zero factor (x a non-positive integer) gives sign 0 and log -inf from
    that index onward.
    """
    factors = x + np.arange(n, dtype=float)
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(factors))
    logabs = np.concatenate(([0.0], np.cumsum(logs)))
    signs = np.concatenate(([1.0], np.cumprod(np.sign(factors))))
    logabs[signs == 0] = -np.inf
    return logabs, signs


_EULER_GAMMA = 0.5772156649015329
_SERIES_RADIUS = 2.0
_SERIES_TERMS = 48


def _expint_series(p: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.zeros(z.shape, dtype=complex)
    pint = np.round(p)
    is_int = np.abs(p - pint) < 1e-9
    k = np.arange(_SERIES_TERMS)
    logfact = sc.gammaln(k + 1.0)
    mz = -z[:, None]
    # (-z)^k / k!
    with np.errstate(divide="ignore", invalid="ignore"):
        powers = np.where(k[None, :] == 0, 1.0 + 0j, mz ** k[None, :]) * np.exp(-logfact)[None, :]
        denom = 1.0 - p[:, None] + k[None, :]
    ni = ~is_int
    if np.any(ni):
        terms = powers[ni] / denom[ni]
        out[ni] = sc.gamma(1.0 - p[ni]) * z[ni] ** (p[ni] - 1.0) - terms.sum(axis=1)
    nonpos = is_int & (pint <= 0)
    if np.any(nonpos):
        # E_{-m}(z) = m! e^-z z^(-m-1) sum_{j<=m} z^j / j!
        for i in np.flatnonzero(nonpos):
            m = int(-pint[i])
            zi = z[i]
            partial = sum(zi**j / math.factorial(j) for j in range(m + 1))
            out[i] = math.factorial(m) * np.exp(-zi) * zi ** (-m - 1) * partial
        is_int = is_int & ~nonpos
    if np.any(is_int):
        n = pint[is_int].astype(int)
        zi = z[is_int]
        pw = powers[is_int]
        dn = denom[is_int]
        special = k[None, :] == (n[:, None] - 1)
        safe = np.where(special, 1.0, dn)
        regular = np.where(special, 0.0, pw / safe).sum(axis=1)
        psi = -_EULER_GAMMA + np.array([math.fsum(1.0 / j for j in range(1, m)) for m in n])
        lead = (-zi) ** (n - 1) / np.array([math.factorial(m - 1) for m in n])
        out[is_int] = lead * (-np.log(zi) + psi) - regular
    return out


def _expint_cf(p: np.ndarray, z: np.ndarray) -> np.ndarray:
    tiny = 1e-300
    b = z + p
    c = np.full(z.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(z.shape, dtype=bool)
    for i in range(1, 5000):
        an = -i * (p[active] - 1.0 + i)
        b[active] += 2.0
        dd = an * d[active] + b[active]
        dd = np.where(dd == 0, tiny, dd)
        d[active] = 1.0 / dd
        cc = b[active] + an / c[active]
        cc = np.where(cc == 0, tiny, cc)
        c[active] = cc
        delta = cc * d[active]
        h[active] *= delta
        done = np.abs(delta - 1.0) < 1e-16
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    return h * np.exp(-z)


def expint_e(p, z):
    """Generalized exponential integral E_p(z) = int_1^inf exp(-z t) t^-p dt.

    Real order ``p`` and complex ``z`` off the negative real axis; vectorized
    over broadcast inputs. Power series for |z| <= 2, continued fraction
    (modified Lentz) beyond.
    """
    p_arr, z_arr = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(z, dtype=complex))
    shape = z_arr.shape
    pf = p_arr.ravel().copy()
    zf = z_arr.ravel().copy()
    if np.any(zf == 0):
        raise SingularityError("E_p(0) handled by the caller (diverges for p <= 1)")
    out = np.empty(zf.shape, dtype=complex)
    small = np.abs(zf) <= _SERIES_RADIUS
    if np.any(small):
        out[small] = _expint_series(pf[small], zf[small])
    if np.any(~small):
        out[~small] = _expint_cf(pf[~small], zf[~small])
    out = out.reshape(shape)
    return complex(out) if out.ndim == 0 else out
