"""Parameter sets for Bessel-product integrals and the vanishing predicates.

The integral is

    f = int_0^inf rho^(alpha - 1) prod_n J_{nu_n}(c_n rho) d rho,

and it vanishes identically when it converges, the largest coefficient exceeds
the sum of the others, and the orders satisfy
``nu_max = sum(other nu) + alpha - 2m`` for a positive integer m.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .specfun import DomainError

__all__ = [
    "IntegralSpec",
    "Polygonal",
    "ConstraintReport",
    "IndeterminateMaximumError",
    "check_convergence",
    "check_polygonal",
    "check_charge_neutrality",
    "predict_vanishing",
]

DEFAULT_TOL = 1e-9
_TIE_RTOL = 1e-12


class IndeterminateMaximumError(DomainError):
    """Several coefficients tie for the maximum; the order condition is ill-posed."""


class Polygonal(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class IntegralSpec:
    """Dimensionality ``alpha`` and ordered (order, coefficient) factors."""

    alpha: float
    factors: tuple[tuple[float, float], ...]

    def __post_init__(self):
        factors = tuple((float(nu), float(c)) for nu, c in self.factors)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "alpha", float(self.alpha))
        if len(factors) < 2:
            raise DomainError("need at least two Bessel factors")
        if not math.isfinite(self.alpha):
            raise DomainError("alpha must be finite")
        for nu, c in factors:
            if not math.isfinite(nu):
                raise DomainError("orders must be finite")
            if not (c > 0 and math.isfinite(c)):
                raise DomainError(f"coefficients must be positive, got {c}")

    @classmethod
    def from_lists(cls, alpha: float, orders: Sequence[float], coefficients: Sequence[float]) -> "IntegralSpec":
        if len(orders) != len(coefficients):
            raise DomainError(f"{len(orders)} orders but {len(coefficients)} coefficients")
        return cls(alpha, tuple(zip(orders, coefficients)))

    @property
    def M(self) -> int:
        return len(self.factors)

    @property
    def orders(self) -> tuple[float, ...]:
        return tuple(nu for nu, _ in self.factors)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(c for _, c in self.factors)

    @property
    def mu(self) -> float:
        return self.alpha + sum(self.orders)

    @property
    def max_index(self) -> int:
        cs = self.coefficients
        return max(range(len(cs)), key=cs.__getitem__)

    @property
    def max_unique(self) -> bool:
        cs = sorted(self.coefficients)
        return cs[-1] - cs[-2] > _TIE_RTOL * cs[-1]

    def scaled(self, s: float) -> "IntegralSpec":
        return IntegralSpec(self.alpha, tuple((nu, s * c) for nu, c in self.factors))

    def permuted(self, order: Iterable[int]) -> "IntegralSpec":
        return IntegralSpec(self.alpha, tuple(self.factors[i] for i in order))


@dataclass(frozen=True)
class ConstraintReport:
    convergent: bool
    polygonal: Polygonal
    charge_neutral_m: Optional[int]
    predicted_zero: bool
    max_unique: bool

    def __post_init__(self):
        if self.predicted_zero and not (
            self.convergent
            and self.polygonal is Polygonal.VIOLATED
            and self.charge_neutral_m is not None
            and self.max_unique
        ):
            raise ValueError("inconsistent report: predicted_zero without its preconditions")


def check_convergence(spec: IntegralSpec) -> bool:
    """-sum(nu) < alpha < M/2 + 1, strictly."""
    return -sum(spec.orders) < spec.alpha < spec.M / 2 + 1


def check_polygonal(spec: IntegralSpec, tol: float = DEFAULT_TOL) -> Polygonal:
    cs = spec.coefficients
    cmax = max(cs)
    others = sum(cs) - cmax
    if cmax < others - tol:
        return Polygonal.SATISFIED
    if cmax > others + tol:
        return Polygonal.VIOLATED
    return Polygonal.BOUNDARY


def check_charge_neutrality(spec: IntegralSpec, tol: float = DEFAULT_TOL) -> Optional[int]:
    """Positive integer m with nu_max = sum(other nu) + alpha - 2m, or None."""
    if not spec.max_unique:
        raise IndeterminateMaximumError("largest coefficient is not unique")
    imax = spec.max_index
    nu_max = spec.orders[imax]
    others = sum(spec.orders) - nu_max
    m = (others + spec.alpha - nu_max) / 2.0
    m_int = round(m)
    if m_int >= 1 and abs(2.0 * (m - m_int)) <= tol:
        return int(m_int)
    return None


def predict_vanishing(spec: IntegralSpec, tol: float = DEFAULT_TOL) -> ConstraintReport:
    convergent = check_convergence(spec)
    polygonal = check_polygonal(spec, tol)
    m = check_charge_neutrality(spec, tol)
    zero = convergent and polygonal is Polygonal.VIOLATED and m is not None
    return ConstraintReport(convergent, polygonal, m, zero, spec.max_unique)
