import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bpint.constraints import IntegralSpec
from bpint.quadrature import (
    Estimate,
    TrigBesselSpec,
    eval_bessel_product,
    eval_exp_bessel,
    eval_trig_bessel,
    is_zero_consistent,
)
from bpint.specfun import DomainError, elliptic_k


def spec(alpha, nu, c):
    return IntegralSpec.from_lists(alpha, nu, c)


def stable_area(a, b, c):
    a, b, c = sorted((a, b, c), reverse=True)
    return 0.25 * math.sqrt((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)))


def test_examples():
    est = eval_bessel_product(spec(2, [0] * 5, [1, 1, 1, 1, 5]))
    assert abs(est.value) <= 1e-6
    est = eval_bessel_product(spec(1, [1, 0], [1, 0.5]), tol=1e-10)
    assert est.value == pytest.approx(1.0, abs=1e-8)
    assert est.error_bound <= 1e-8
    est = eval_bessel_product(spec(1, [0, 1], [1, 2]))
    assert est.value == pytest.approx(0.5, abs=1e-8)


def test_estimate_metadata():
    est = eval_bessel_product(spec(1, [0, 0], [1, 2]))
    assert isinstance(est, Estimate)
    assert est.method == "partition-asymptotic"
    assert est.intervals_used > 0
    assert isinstance(est.value, float) and isinstance(est.error_bound, float)


def test_divergent_spec_rejected():
    with pytest.raises(DomainError):
        eval_bessel_product(spec(4, [0] * 6, [1] * 6))


@pytest.mark.parametrize("c", [0.3, 1.0, 1.7, 1.9999999])
def test_three_j0_triangle_identity(c):
    # int rho J0(a rho) J0(b rho) J0(c rho) = 1 / (2 pi Area)
    a, b = 1.0, 1.0
    area = stable_area(a, b, c)
    est = eval_bessel_product(spec(2, [0, 0, 0], [a, b, c]))
    assert est.value == pytest.approx(1 / (2 * math.pi * area), rel=1e-9)


def test_two_j0_elliptic():
    # int J0(rho) J0(2 rho) = K(1/2) / pi
    est = eval_bessel_product(spec(1, [0, 0], [1, 2]))
    assert est.value == pytest.approx(elliptic_k(0.5) / math.pi, rel=1e-10)


def test_extrapolation_method_agrees():
    s = spec(1, [0, 0, 0], [1, 1.3, 0.9])
    a = eval_bessel_product(s)
    b = eval_bessel_product(s, tol=1e-8, method="partition-extrapolation")
    assert b.method == "partition-extrapolation"
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-7


@given(
    st.lists(st.floats(0.3, 3.0), min_size=3, max_size=4),
    st.sampled_from([0.5, 2.0]),
)
def test_scaling(c, s):
    sp = spec(1.5, [0] * len(c), c)
    a = eval_bessel_product(sp, tol=1e-9)
    b = eval_bessel_product(sp.scaled(s), tol=1e-9)
    assert b.value == pytest.approx(s ** (-1.5) * a.value, abs=20 * (a.error_bound + b.error_bound) + 1e-9)


@given(st.lists(st.floats(0.3, 3.0), min_size=3, max_size=5), st.randoms())
def test_permutation_invariance(c, rnd):
    nu = [0, 1, 0, 2, 0][: len(c)]
    sp = spec(1.5, nu, c)
    perm = list(range(len(c)))
    rnd.shuffle(perm)
    a = eval_bessel_product(sp, tol=1e-9)
    b = eval_bessel_product(sp.permuted(perm), tol=1e-9)
    assert abs(a.value - b.value) <= 20 * (a.error_bound + b.error_bound) + 1e-9


def test_trig_examples():
    f = ((0.0, 1.0), (0.0, 1.0))
    out = eval_trig_bessel(TrigBesselSpec(1, 0, 3.0, f, 1.0))
    assert is_zero_consistent(out, 1e-6)
    inside = eval_trig_bessel(TrigBesselSpec(1, 0, 1.0, f, 1.0))
    # corrected normalization: (1/pi) * int cos J0 J0 = K(sqrt(3)/2) / pi^2
    assert inside.value / math.pi == pytest.approx(elliptic_k(math.sqrt(3) / 2) / math.pi**2, rel=1e-9)
    div = eval_trig_bessel(TrigBesselSpec(1, 0, 0.0, f, 1.0))
    assert div.divergent and "divergent" in div.flags


@pytest.mark.parametrize("c", [0.2, 0.6, 0.95])
def test_trig_single_factor(c):
    # int cos(c r) J0(r) = 1/sqrt(1-c^2) ; int sin(c r) J0(r) = 0 for c < 1
    cos_est = eval_trig_bessel(TrigBesselSpec(1, 0, c, ((0.0, 1.0),), 1.0))
    sin_est = eval_trig_bessel(TrigBesselSpec(0, 1, c, ((0.0, 1.0),), 1.0))
    assert cos_est.value == pytest.approx(1 / math.sqrt(1 - c * c), rel=1e-9)
    assert abs(sin_est.value) <= 1e-9


def test_trig_resonance_is_divergent():
    est = eval_trig_bessel(TrigBesselSpec(1, 0, 1.0, ((0.0, 1.0),), 1.0))
    assert est.divergent


@pytest.mark.parametrize("c", [0.4, 1.7, 2.7])
def test_trig_reduces_to_exponentials(c):
    f = ((0.0, 1.0), (1.0, 0.8), (0.0, 1.3))
    cos_est = eval_trig_bessel(TrigBesselSpec(1, 0, c, f, 1.5))
    sin_est = eval_trig_bessel(TrigBesselSpec(0, 1, c, f, 1.5))
    ep, _ = eval_exp_bessel(TrigBesselSpec(1, 0, c, f, 1.5), +1)
    em, _ = eval_exp_bessel(TrigBesselSpec(1, 0, c, f, 1.5), -1)
    assert cos_est.value == pytest.approx(0.5 * (ep + em).real, abs=1e-9)
    assert sin_est.value == pytest.approx((0.5 * (ep - em) / 1j).real, abs=1e-9)


def test_trig_spec_validation():
    with pytest.raises(DomainError):
        TrigBesselSpec(0, 0, 1.0, ((0.0, 1.0),))
    with pytest.raises(DomainError):
        TrigBesselSpec(1, 0, -1.0, ((0.0, 1.0),))
    with pytest.raises(DomainError):
        TrigBesselSpec(1, 0, 1.0, ())
