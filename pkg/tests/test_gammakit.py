import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riesztransfer.gammakit import (
    LogValue,
    gamma_ratio,
    gegenbauer_measure_constant,
    log_beta,
    log_gamma,
    log_gamma_ratio,
    log_gamma_signed,
    pochhammer_log,
)

mp.mp.dps = 40


def _mp_log_ratio(a, b):
    return float(mp.loggamma(mp.mpf(a)) - mp.loggamma(mp.mpf(b)))


@pytest.mark.parametrize("x", [1e-3, 0.5, 1.0, 3.7, 25.0, 171.5, 1e5])
def test_log_gamma_matches_mpmath(x):
    assert log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("x", [-0.5, -1.5, -2.25, 0.3])
def test_log_gamma_signed_sign_and_magnitude(x):
    v = log_gamma_signed(x)
    ref = mp.gamma(x)
    assert v.sign == int(mp.sign(ref))
    assert float(v) == pytest.approx(float(ref), rel=1e-13)


def test_log_gamma_signed_rejects_poles():
    with pytest.raises(ValueError):
        log_gamma_signed(-2.0)


@pytest.mark.parametrize(
    "a,b",
    [(0.5, 1.5), (10.0, 10.5), (1e8 + 0.5, 1e8), (1e8 + 3.0, 1e8 + 1.25), (2.0 * 86, 86.5), (40.0, 3.0)],
)
def test_log_gamma_ratio_against_mpmath(a, b):
    ref = _mp_log_ratio(a, b)
    assert log_gamma_ratio(a, b) == pytest.approx(ref, rel=1e-13, abs=1e-13)


def test_large_shift_ratio_keeps_digits():
    # Gamma(x + 1/2) / Gamma(x) ~ sqrt(x); naive gammaln differences lose ~8 digits at 1e8
    x = 1e8
    r = float(gamma_ratio(x + 0.5, x))
    ref = float(mp.gamma(mp.mpf(x) + 0.5) / mp.gamma(mp.mpf(x)))
    assert r == pytest.approx(ref, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 300.0), st.floats(0.05, 300.0), st.floats(0.05, 300.0))
def test_ratio_chain_rule(a, b, c):
    lhs = log_gamma_ratio(a, b) + log_gamma_ratio(b, c)
    assert lhs == pytest.approx(log_gamma_ratio(a, c), abs=1e-10 * (1 + abs(lhs)))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 500.0))
def test_recurrence_gamma_x_plus_one(x):
    assert log_gamma_ratio(x + 1, x) == pytest.approx(math.log(x), abs=1e-12 * max(1.0, abs(math.log(x))))


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (2.0, 3.5), (100.0, 0.25), (1e4, 1e4)])
def test_log_beta(a, b):
    assert log_beta(a, b) == pytest.approx(float(mp.log(mp.beta(a, b))), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("a,k", [(0.5, 0), (0.5, 7), (-0.4, 5), (-3.0, 2), (2.5, 40), (-2.5, 6)])
def test_pochhammer_against_mpmath(a, k):
    v = float(pochhammer_log(a, k))
    assert v == pytest.approx(float(mp.rf(a, k)), rel=1e-13)


def test_pochhammer_hits_zero():
    v = pochhammer_log(-2.0, 4)
    assert v.sign == 0 and float(v) == 0.0


@pytest.mark.parametrize("lam", [-0.4, 0.0, 0.5, 1.0, 2.0, 86.0, 1e4, 1e6])
def test_gegenbauer_constant_normalises(lam):
    # int_{-1}^{1} (1 - x^2)^(lam - 1/2) dx = B(1/2, lam + 1/2)
    c = gegenbauer_measure_constant(lam)
    ref = -mp.log(mp.beta(mp.mpf(1) / 2, mp.mpf(lam) + mp.mpf(1) / 2))
    assert c.log_abs == pytest.approx(float(ref), abs=1e-14 * (1 + abs(float(ref))))


def test_gegenbauer_constant_quadrature_oracle():
    c = float(gegenbauer_measure_constant(2.0))
    integral = mp.quad(lambda x: (1 - x * x) ** mp.mpf(1.5), [-1, 0, 1])
    assert c * float(integral) == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("lam", [-0.4, 0.6, 1.0, 9.7, 10.0, 1e3, 1e6])
def test_gegenbauer_constant_forms_agree(lam):
    vals = [float(gegenbauer_measure_constant(lam, f)) for f in ("direct", "duplication", "reduced")]
    assert vals[1] == pytest.approx(vals[0], rel=1e-12)
    assert vals[2] == pytest.approx(vals[0], rel=1e-12)
    ref = float(mp.gamma(mp.mpf(lam) + 1) / (mp.sqrt(mp.pi) * mp.gamma(mp.mpf(lam) + 0.5)))
    assert vals[0] == pytest.approx(ref, rel=1e-13)


def test_duplication_form_singular_at_zero():
    with pytest.raises(ValueError):
        gegenbauer_measure_constant(0.0, "duplication")


def test_logvalue_arithmetic():
    a = LogValue.from_float(-3.0)
    b = LogValue.from_float(0.5)
    assert float(a * b) == pytest.approx(-1.5)
    assert float(a / b) == pytest.approx(-6.0)
    assert float(b ** 3) == pytest.approx(0.125)
    assert float((-a).sqrt()) == pytest.approx(math.sqrt(3.0))
    assert float(LogValue.from_float(0.0)) == 0.0
    with pytest.raises(ValueError):
        LogValue(0.0, 2)


def test_huge_values_stay_finite_in_log_domain():
    v = gamma_ratio(2 * 500.0, 500.0)
    assert math.isfinite(v.log_abs)
    assert v.log_abs > math.log(np.finfo(float).max)


def test_gamma_ratio_large_shift_value():
    # Gamma(beta + alpha + 2) / Gamma(beta) with alpha = 0.5, beta = 1e6: the ratio
    # is beta^(alpha+2) (1 + (alpha+2)(alpha+1)/(2 beta) + ...), i.e. 1.875e-6 above
    # beta^2.5, so it cannot sit within 1e-9 of 1e15; the leading correction is checked.
    r = float(gamma_ratio(1e6 + 2.5, 1e6))
    assert r / 1e15 - 1 == pytest.approx(2.5 * 1.5 / 2e6, rel=1e-5)
