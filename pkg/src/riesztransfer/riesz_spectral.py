"""Riesz transforms, Riesz potentials and semigroups as coefficient maps.

Every operator here acts on an ``Expansion`` (raw coefficients
c_k = <f, phi_k>) through the eigenvalues of the family's diffusion
operator:

    Jacobi      k (k + a + b + 1)
    Gegenbauer  k (k + 2 lam)
    Hermite     k
    Laguerre    k

A Riesz transform lowers the degree by one and lands in the shifted family,
multiplied by a fixed weight: sqrt(1 - x^2) on [-1, 1], sqrt(x) on (0, inf),
and 1 on R.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gammakit import LogValue, gamma_ratio, log_gamma, pochhammer_log
from .orthopoly import FamilySpec, eval_all, norm_sq
from .quadrature import Expansion, QuadratureRule, build_rule

__all__ = [
    "RieszImage",
    "SpectralMultiplier",
    "eigenvalues",
    "riesz_apply",
    "riesz_l2_norm_sq",
    "riesz_potential",
    "apply_semigroup",
    "subordination_residual",
]

_WEIGHT = {
    "jacobi": "sqrt_one_minus_x_sq",
    "gegenbauer": "sqrt_one_minus_x_sq",
    "hermite": "constant_one",
    "laguerre": "sqrt_x",
}


def eigenvalues(family: FamilySpec, K: int) -> np.ndarray:
    """Eigenvalues lambda_0..lambda_K of minus the diffusion operator."""
    k = np.arange(K + 1, dtype=float)
    if family.kind == "jacobi":
        return k * (k + family.alpha + family.beta + 1.0)
    if family.kind == "gegenbauer":
        return k * (k + 2.0 * family.lam)
    return k


@dataclass(frozen=True)
class SpectralMultiplier:
    """A degree-wise multiplier m_k applied to raw coefficients."""

    family: FamilySpec
    symbol: tuple

    def apply(self, e: Expansion) -> Expansion:
        m = np.asarray(self.symbol[: len(e.raw_coeffs)], dtype=float)
        return e.with_coeffs(e.raw_coeffs * m)

    @classmethod
    def from_function(cls, family: FamilySpec, K: int, fn) -> "SpectralMultiplier":
        lam = eigenvalues(family, K)
        return cls(family, tuple(float(v) for v in fn(lam)))


@dataclass(frozen=True, eq=False)
class RieszImage:
    """weight(x) * sum_{k>=1} image_coeffs[k-1] * psi_{k-1}(x), psi in image_family."""

    weight_kind: str
    image_family: FamilySpec
    image_coeffs: np.ndarray
    source_family: FamilySpec

    def weight(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.weight_kind == "sqrt_one_minus_x_sq":
            return np.sqrt(np.maximum(1.0 - x * x, 0.0))
        if self.weight_kind == "sqrt_x":
            return np.sqrt(x)
        return np.ones_like(x)

    def polynomial_part(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if len(self.image_coeffs) == 0:
            return np.zeros_like(x)
        psi = eval_all(self.image_family, len(self.image_coeffs) - 1, x)
        return np.tensordot(self.image_coeffs, psi, axes=1)

    def evaluate(self, x) -> np.ndarray:
        return self.weight(x) * self.polynomial_part(x)

    def quadrature_norm_sq(self, rule: QuadratureRule | None = None) -> float:
        """||R f||^2 against the source family's measure, by Gauss quadrature.

        The integrand is weight^2 times a polynomial square, which is itself a
        polynomial, so a rule of len(image_coeffs) + 1 nodes is exact.
        """
        if rule is None:
            rule = build_rule(self.source_family, len(self.image_coeffs) + 2)
        v = self.evaluate(rule.nodes)
        return float(np.dot(rule.weights, v * v))


def _gegenbauer_d(lam: float, k: int) -> LogValue:
    # d_k = 4 Gamma(2 lam) (k + lam) k! / Gamma(k + 2 lam + 1)
    #     = 4 (k + lam) k! / (2 lam)_{k+1}
    if lam == 0:
        raise ValueError("Gegenbauer Riesz transform is degenerate at lam = 0 (C_k^0 vanishes)")
    return LogValue.from_float(4.0 * (k + lam)) * LogValue(math.lgamma(k + 1.0), 1) / pochhammer_log(2.0 * lam, k + 1)


def riesz_apply(e: Expansion) -> RieszImage:
    """Riesz transform of the expanded function, as an image expansion."""
    fam = e.family
    c = np.asarray(e.raw_coeffs, dtype=float)
    K = len(c) - 1
    out = np.zeros(max(K, 0))
    for k in range(1, K + 1):
        ck = c[k]
        if ck == 0:
            continue
        if fam.kind == "jacobi":
            cc = fam.alpha + fam.beta
            out[k - 1] = ck / norm_sq(fam, k) * 0.5 * math.sqrt((k + cc + 1.0) / k)
        elif fam.kind == "gegenbauer":
            lam = fam.lam
            out[k - 1] = 0.5 * ck * float(_gegenbauer_d(lam, k)) * math.sqrt((k + 2.0 * lam) / k)
        elif fam.kind == "hermite":
            out[k - 1] = ck / norm_sq(fam, k) * math.sqrt(2.0 * k)
        else:
            out[k - 1] = -ck / norm_sq(fam, k) / math.sqrt(k)
    return RieszImage(_WEIGHT[fam.kind], fam.shifted(), out, fam)


def _paper_weight(fam: FamilySpec, k: int) -> float:
    # Literal per-degree weights of the Parseval sums, each in log domain.
    if fam.kind == "jacobi":
        a, b = fam.alpha, fam.beta
        cc = a + b
        w = (
            LogValue.from_float(2 * k + cc + 1)
            * gamma_ratio(a + 1, k + a + 1)
            * gamma_ratio(b + 1, cc + 2)
            * LogValue(log_gamma(k + 1), 1)
            * gamma_ratio(k + cc + 1, k + b + 1)
        )
        return float(w)
    if fam.kind == "gegenbauer":
        lam = fam.lam
        w = LogValue.from_float(k + lam) * LogValue(log_gamma(k + 1), 1) / (
            LogValue.from_float(lam) * pochhammer_log(2 * lam, k)
        )
        return float(w)
    if fam.kind == "hermite":
        return math.exp(-log_gamma(k + 1) - k * math.log(2.0) - 0.5 * math.log(math.pi))
    a = fam.alpha
    return float(gamma_ratio(a + 1, k + a + 1) * LogValue(log_gamma(k + 1), 1))


def riesz_l2_norm_sq(e: Expansion, mode: str = "canonical") -> float:
    """Squared L^2 norm of the Riesz transform from the coefficients alone.

    ``mode="canonical"`` is sum_{k>=1} c_k^2 / ||phi_k||^2.  ``mode="paper_formula"``
    evaluates the per-family weighted sums term by term as written, including
    the extra 1/sqrt(pi) in the Hermite sum.
    """
    c = np.asarray(e.raw_coeffs, dtype=float)
    total = 0.0
    for k in range(1, len(c)):
        if c[k] == 0:
            continue
        if mode == "canonical":
            total += c[k] ** 2 / norm_sq(e.family, k)
        elif mode == "paper_formula":
            total += c[k] ** 2 * _paper_weight(e.family, k)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return total


def riesz_potential(e: Expansion, nu: float) -> Expansion:
    """Multiply c_k by lambda_k^(-nu/2) for k >= 1; drop the constant term."""
    if not nu > 0:
        raise ValueError("nu must be positive")
    lam = eigenvalues(e.family, e.degree)
    m = np.zeros_like(lam)
    m[1:] = lam[1:] ** (-0.5 * nu)
    return e.with_coeffs(e.raw_coeffs * m)


def apply_semigroup(e: Expansion, t: float, kind: str = "heat") -> Expansion:
    """Heat (exp(-lambda_k t)) or Poisson (exp(-sqrt(lambda_k) t)) semigroup."""
    if t < 0:
        raise ValueError("t must be non-negative")
    lam = eigenvalues(e.family, e.degree)
    if kind == "heat":
        m = np.exp(-lam * t)
    elif kind == "poisson":
        m = np.exp(-np.sqrt(lam) * t)
    else:
        raise ValueError(f"unknown semigroup kind {kind!r}")
    return e.with_coeffs(e.raw_coeffs * m)


def subordination_terms(lam: np.ndarray, t: float, M: int) -> np.ndarray:
    """|exp(-sqrt(lam) t) - (1/sqrt(pi)) int u^(-1/2) e^(-u) e^(-lam t^2/(4u)) du|,
    with the integral done by the M-point Gauss rule for u^(-1/2) e^(-u)."""
    rule = build_rule(FamilySpec.laguerre(-0.5), M)
    lam = np.asarray(lam, dtype=float)
    approx = np.exp(-np.outer(lam, t * t / (4.0 * rule.nodes))) @ rule.weights
    return np.abs(np.exp(-np.sqrt(lam) * t) - approx)


def subordination_residual(e: Expansion, t: float, M: int) -> float:
    """Worst subordination error over the eigenvalues lambda_0..lambda_K of e."""
    if not t > 0:
        raise ValueError("t must be positive")
    return float(subordination_terms(eigenvalues(e.family, e.degree), t, M).max())
