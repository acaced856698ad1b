import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riesztransfer.orthopoly import FamilySpec, eval_all, norm_sq, richardson_derivative
from riesztransfer.quadrature import build_rule, expand
from riesztransfer.riesz_spectral import (
    SpectralMultiplier,
    apply_semigroup,
    eigenvalues,
    riesz_apply,
    riesz_l2_norm_sq,
    riesz_potential,
    subordination_residual,
    subordination_terms,
)

FAMILIES = [
    FamilySpec.jacobi(0.5, 1.5),
    FamilySpec.jacobi(-0.5, 3.0),
    FamilySpec.gegenbauer(-0.4),
    FamilySpec.gegenbauer(2.0),
    FamilySpec.hermite(),
    FamilySpec.laguerre(-0.4),
    FamilySpec.laguerre(2.0),
]


def _expansion_of(fam, values_fn, K, N=None):
    rule = build_rule(fam, N or K + 4)
    return expand(values_fn, fam, K, rule)


def _basis(fam, n):
    return lambda x: eval_all(fam, n, x)[n]


def test_hermite_example():
    fam = FamilySpec.hermite()
    img = riesz_apply(_expansion_of(fam, _basis(fam, 1), 3))
    np.testing.assert_allclose(img.evaluate(np.linspace(-3, 3, 7)), math.sqrt(2), rtol=1e-14)


@pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.5, 1.5), (-0.4, 2.0)])
def test_jacobi_first_degree_example(a, b):
    fam = FamilySpec.jacobi(a, b)
    img = riesz_apply(_expansion_of(fam, _basis(fam, 1), 3))
    x = np.linspace(-0.99, 0.99, 9)
    np.testing.assert_allclose(img.evaluate(x), math.sqrt(a + b + 2) / 2 * np.sqrt(1 - x * x), rtol=1e-13)


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.label)
def test_constant_has_zero_image(fam):
    e = _expansion_of(fam, np.cos, 4).with_coeffs([3.0, 0, 0, 0, 0])
    assert np.all(riesz_apply(e).image_coeffs == 0)
    # a quadrature-expanded constant leaves only rounding
    img = riesz_apply(_expansion_of(fam, lambda x: np.full_like(x, 3.0), 4))
    assert img.quadrature_norm_sq() <= 1e-24


def test_image_families_and_weights():
    assert riesz_apply(_expansion_of(FamilySpec.jacobi(0.5, 1.5), np.sin, 4)).image_family == FamilySpec.jacobi(1.5, 2.5)
    assert riesz_apply(_expansion_of(FamilySpec.gegenbauer(1.0), np.sin, 4)).image_family == FamilySpec.gegenbauer(2.0)
    assert riesz_apply(_expansion_of(FamilySpec.laguerre(0.5), np.sin, 4)).weight_kind == "sqrt_x"
    assert riesz_apply(_expansion_of(FamilySpec.hermite(), np.sin, 4)).weight_kind == "constant_one"


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.label)
def test_image_matches_derivative_of_inverse_root(fam):
    """R f = weight * c * d/dx (-L)^(-1/2) f with c = 1/sqrt(2) for Hermite, 1 otherwise."""
    rng = np.random.default_rng(3)
    K = 6
    rule = build_rule(fam, K + 4)
    a = rng.standard_normal(K + 1)
    f = lambda x: np.tensordot(a, eval_all(fam, K, x), axes=1)  # noqa: E731
    e = expand(f, fam, K, rule)
    lam = eigenvalues(fam, K)
    m = np.zeros(K + 1)
    m[1:] = lam[1:] ** -0.5
    g = e.with_coeffs(e.raw_coeffs * m)
    if fam.kind == "hermite":
        x = np.linspace(-2, 2, 9)
    elif fam.kind == "laguerre":
        x = np.linspace(0.5, 6, 9)
    else:
        x = np.linspace(-0.9, 0.9, 9)
    dg = richardson_derivative(g.evaluate, x)
    img = riesz_apply(e)
    c = 1 / math.sqrt(2) if fam.kind == "hermite" else 1.0
    ref = img.weight(x) * c * dg
    np.testing.assert_allclose(img.evaluate(x), ref, rtol=1e-7, atol=1e-7 * np.abs(ref).max())


def _random_poly_expansion(fam, deg, rng, mean_zero=True):
    a = rng.standard_normal(deg + 1)
    if mean_zero:
        a[0] = 0.0
    rule = build_rule(fam, deg + 4)
    e = expand(lambda x: np.tensordot(a, eval_all(fam, deg, x), axes=1), fam, deg, rule)
    return e, rule


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["jacobi", "gegenbauer", "hermite", "laguerre"]),
    st.floats(-0.5, 3.0),
    st.floats(-0.5, 3.0),
    st.integers(1, 20),
    st.integers(0, 2**31 - 1),
)
def test_isometry_property(kind, p1, p2, deg, seed):
    if kind == "jacobi":
        fam = FamilySpec.jacobi(max(p1, -0.5), max(p2, -0.5))
    elif kind == "gegenbauer":
        lam = p1 if abs(p1) > 1e-3 and p1 > -0.49 else 0.7
        fam = FamilySpec.gegenbauer(lam)
    elif kind == "hermite":
        fam = FamilySpec.hermite()
    else:
        fam = FamilySpec.laguerre(max(p1, -0.5))
    rng = np.random.default_rng(seed)
    e, rule = _random_poly_expansion(fam, deg, rng)
    f_norm_sq = rule.integrate(e.evaluate(rule.nodes) ** 2)
    img = riesz_apply(e)
    quad = img.quadrature_norm_sq()
    canon = riesz_l2_norm_sq(e, "canonical")
    assert quad == pytest.approx(f_norm_sq, rel=1e-9)
    assert canon == pytest.approx(quad, rel=1e-9)
    if fam.kind != "hermite":
        assert riesz_l2_norm_sq(e, "paper_formula") == pytest.approx(quad, rel=1e-9)


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.label)
def test_contractivity_with_constant_term(fam):
    rng = np.random.default_rng(11)
    e, rule = _random_poly_expansion(fam, 10, rng, mean_zero=False)
    f_norm_sq = rule.integrate(e.evaluate(rule.nodes) ** 2)
    assert riesz_l2_norm_sq(e) < f_norm_sq
    assert riesz_l2_norm_sq(e) == pytest.approx(f_norm_sq - e.raw_coeffs[0] ** 2, rel=1e-10)


def test_parseval_examples():
    fam = FamilySpec.jacobi(0.5, 1.5)
    e = _expansion_of(fam, _basis(fam, 3), 5)
    assert riesz_l2_norm_sq(e) == pytest.approx(norm_sq(fam, 3), rel=1e-12)
    for lam in (0.3, 1.0, 4.0):
        g = FamilySpec.gegenbauer(lam)
        e = _expansion_of(g, _basis(g, 2), 4)
        assert riesz_l2_norm_sq(e, "paper_formula") == pytest.approx(riesz_l2_norm_sq(e), rel=1e-11)


def test_hermite_paper_formula_ratio():
    fam = FamilySpec.hermite()
    for k in range(1, 12):
        e = _expansion_of(fam, _basis(fam, k), k + 1)
        ratio = riesz_l2_norm_sq(e, "paper_formula") / riesz_l2_norm_sq(e)
        assert ratio == pytest.approx(1 / math.sqrt(math.pi), rel=1e-12)


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        riesz_l2_norm_sq(_expansion_of(FamilySpec.hermite(), np.sin, 3), "other")


def test_gegenbauer_lambda_zero_rejected():
    e = _expansion_of(FamilySpec.gegenbauer(0.0), lambda x: x, 3).with_coeffs([0.0, 1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        riesz_apply(e)


# -- multipliers -------------------------------------------------------------

def test_riesz_potential_examples():
    a, b = 0.5, 1.5
    fam = FamilySpec.jacobi(a, b)
    e = _expansion_of(fam, _basis(fam, 1), 3)
    out = riesz_potential(e, 2.0)
    assert out.raw_coeffs[1] == pytest.approx(e.raw_coeffs[1] / (a + b + 2), rel=1e-14)
    e = _expansion_of(fam, np.cos, 8)
    np.testing.assert_allclose(riesz_potential(riesz_potential(e, 1.0), 1.0).raw_coeffs, riesz_potential(e, 2.0).raw_coeffs, rtol=1e-14)
    const = e.with_coeffs([1.0, 0, 0, 0])
    assert np.all(riesz_potential(const, 1.0).raw_coeffs == 0)
    with pytest.raises(ValueError):
        riesz_potential(e, 0.0)


def test_semigroup_examples():
    fam = FamilySpec.jacobi(0.0, 0.0)
    e = _expansion_of(fam, np.exp, 8)
    np.testing.assert_array_equal(apply_semigroup(e, 0.0).raw_coeffs, e.raw_coeffs)
    e2 = _expansion_of(fam, _basis(fam, 2), 4)
    assert apply_semigroup(e2, 0.1).raw_coeffs[2] == pytest.approx(e2.raw_coeffs[2] * math.exp(-0.6), rel=1e-14)
    e0 = e.with_coeffs([1.0, 0, 0, 0])
    np.testing.assert_array_equal(apply_semigroup(e0, 5.0, "poisson").raw_coeffs, e0.raw_coeffs)
    with pytest.raises(ValueError):
        apply_semigroup(e, -1.0)
    with pytest.raises(ValueError):
        apply_semigroup(e, 1.0, "wave")


@pytest.mark.parametrize("kind", ["heat", "poisson"])
@pytest.mark.parametrize("fam", FAMILIES[:1] + FAMILIES[4:5], ids=lambda f: f.label)
def test_semigroup_property(fam, kind):
    e = _expansion_of(fam, np.cos, 10)
    a = apply_semigroup(apply_semigroup(e, 0.3, kind), 0.45, kind).raw_coeffs
    b = apply_semigroup(e, 0.75, kind).raw_coeffs
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-300)


def test_spectral_multiplier_from_function():
    fam = FamilySpec.laguerre(0.5)
    m = SpectralMultiplier.from_function(fam, 6, lambda lam: np.exp(-lam))
    e = _expansion_of(fam, np.cos, 6)
    np.testing.assert_allclose(m.apply(e).raw_coeffs, apply_semigroup(e, 1.0).raw_coeffs, rtol=1e-15)


def test_eigenvalues():
    np.testing.assert_array_equal(eigenvalues(FamilySpec.jacobi(0.5, 1.5), 3), [0, 4, 10, 18])
    np.testing.assert_array_equal(eigenvalues(FamilySpec.gegenbauer(1.0), 2), [0, 3, 8])
    np.testing.assert_array_equal(eigenvalues(FamilySpec.hermite(), 2), [0, 1, 2])


# -- subordination -----------------------------------------------------------

@pytest.mark.parametrize("lam,t", [(2.0, 1.0), (8.0, 0.5), (440.0, 2.0)])
def test_subordination_identity_holds_exactly(lam, t):
    # the identity itself, with the integral done in extended precision
    mp.mp.dps = 30
    integral = mp.quad(lambda u: u ** -0.5 * mp.e ** (-u - lam * t * t / (4 * u)), [0, lam * t * t / 4, mp.inf])
    assert float(integral / mp.sqrt(mp.pi)) == pytest.approx(math.exp(-math.sqrt(lam) * t), rel=1e-14)


def test_subordination_zero_eigenvalue():
    assert subordination_terms(np.array([0.0]), 1.0, 64)[0] <= 1e-15


def test_subordination_decreases_in_M():
    r = [subordination_terms(np.array([2.0]), 1.0, M)[0] for M in (16, 32, 64)]
    assert r[0] > r[1] > r[2]


def test_subordination_example_t1_lambda2_M64():
    # stated target; the generalized Gauss-Laguerre rule converges only
    # sub-exponentially for e^{-a/u}, which is smooth but not analytic at 0
    assert subordination_terms(np.array([2.0]), 1.0, 64)[0] <= 1e-6


def test_subordination_residual_rejects_bad_t():
    e = _expansion_of(FamilySpec.gegenbauer(1.0), np.cos, 4)
    with pytest.raises(ValueError):
        subordination_residual(e, 0.0, 16)
