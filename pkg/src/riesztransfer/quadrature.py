"""Gauss rules for the four normalised measures, plus integrals built on them.

Rules come from the Golub-Welsch eigenproblem on the Jacobi matrix of the
monic recurrence.  Besides the native variable, two pushed-forward rules are
provided for the scaling maps used throughout the transference experiments:

* ``gauss_scaled_rule``: the symmetric Jacobi measure of parameter lam
  pushed forward by ``y = sqrt(lam) x``;
* ``laguerre_scaled_rule``: the Jacobi measure pushed forward by
  ``y = beta (1 - x) / 2``.

Both are built directly from rescaled recurrence coefficients, so no node is
ever computed as a difference of nearly equal numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .orthopoly import FamilySpec, eval_all, norm_sq

__all__ = [
    "QuadratureError",
    "QuadratureRule",
    "Expansion",
    "recurrence_coefficients",
    "build_rule",
    "gauss_scaled_rule",
    "laguerre_scaled_rule",
    "scaled_recurrence",
    "orthonormal_all",
    "inner_product",
    "lp_norm",
    "expand",
]

Evaluator = Callable[[np.ndarray], np.ndarray]


class QuadratureError(RuntimeError):
    """Raised when a rule cannot be built or a sample is unusable."""


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes (ascending) and positive weights summing to one.

    ``variable`` records which coordinate the nodes live in: ``"x"`` for the
    family's own variable, ``"sqrt_lam_x"`` or ``"beta_half_1mx"`` for the
    pushed-forward rules.
    """

    family: FamilySpec
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    variable: str = "x"

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True, eq=False)
class Expansion:
    """Raw coefficients c_k = <f, phi_k> against the normalised measure."""

    family: FamilySpec
    raw_coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.raw_coeffs) - 1

    def norms_sq(self) -> np.ndarray:
        return np.array([norm_sq(self.family, k) for k in range(len(self.raw_coeffs))])

    def normalized(self) -> np.ndarray:
        """c_k / ||phi_k||^2, the coefficients of the orthogonal expansion.

        Degrees whose polynomial vanishes identically (Gegenbauer lam = 0,
        k >= 1) get coefficient 0.
        """
        h = self.norms_sq()
        out = np.zeros_like(self.raw_coeffs, dtype=float)
        nz = h != 0
        out[nz] = self.raw_coeffs[nz] / h[nz]
        return out

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        phi = eval_all(self.family, self.degree, x)
        return np.tensordot(self.normalized(), phi, axes=1)

    def with_coeffs(self, coeffs) -> "Expansion":
        return Expansion(self.family, np.asarray(coeffs, dtype=float))


def _jacobi_coefficients(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    # Monic Jacobi recurrence; diag[k] = a_k (k < n), off[k] = b_{k+1} (k < n-1).
    c = a + b
    k = np.arange(n, dtype=float)
    diag = np.empty(n)
    diag[0] = (b - a) / (c + 2.0)
    if n > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2 * kk + c) * (2 * kk + c + 2))
    off = _jacobi_offdiag(n, a, b)
    return diag, off


def _jacobi_offdiag(n: int, a: float, b: float) -> np.ndarray:
    c = a + b
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = 4 * (1 + a) * (1 + b) / ((2 + c) ** 2 * (3 + c))
    if n > 2:
        k = np.arange(2, n, dtype=float)
        s = 2 * k + c
        off[1:] = 4 * k * (k + a) * (k + b) * (k + c) / (s * s * (s + 1) * (s - 1))
    return off


def _jacobi_one_minus_diag(n: int, a: float, b: float) -> np.ndarray:
    # 1 - a_k in closed form; avoids cancellation when b >> a.
    c = a + b
    out = np.empty(n)
    out[0] = (2 * a + 2) / (c + 2)
    if n > 1:
        k = np.arange(1, n, dtype=float)
        out[1:] = (c * (2 * a + 4 * k + 2) + 4 * k * (k + 1)) / ((2 * k + c) * (2 * k + c + 2))
    return out


def recurrence_coefficients(family: FamilySpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal a_0..a_{n-1} and squared off-diagonal b_1..b_{n-1} of the monic
    recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1} for the family's measure.
    """
    if n < 1:
        raise ValueError("need at least one coefficient")
    k = np.arange(n, dtype=float)
    if family.kind == "hermite":
        return np.zeros(n), k[1:] / 2.0
    if family.kind == "laguerre":
        a = family.alpha
        return 2 * k + a + 1, k[1:] * (k[1:] + a)
    if family.kind == "gegenbauer":
        lam = family.lam
        off = np.empty(n - 1)
        if n > 1:
            off[0] = 1.0 / (2.0 * (lam + 1.0))
            kk = k[2:]
            off[1:] = kk * (kk + 2 * lam - 1) / (4 * (kk + lam) * (kk + lam - 1))
        return np.zeros(n), off
    return _jacobi_coefficients(n, family.alpha, family.beta)


def _christoffel_weights(diag: np.ndarray, off: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    # w_i = 1 / sum_k phat_k(x_i)^2 over the orthonormal polynomials of
    # degree < n.  Running scale factors keep the sum representable even
    # when the weight itself is far below the double-precision range.
    n = len(diag)
    sq = np.sqrt(off)
    p_prev = np.zeros_like(nodes)
    p_cur = np.ones_like(nodes)
    total = np.ones_like(nodes)
    log_scale = np.zeros_like(nodes)
    for k in range(n - 1):
        nxt = ((nodes - diag[k]) * p_cur - (sq[k - 1] * p_prev if k > 0 else 0.0)) / sq[k]
        p_prev, p_cur = p_cur, nxt
        total = total + p_cur * p_cur
        big = np.abs(p_cur) > 1e100
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p_prev = p_prev * f
            p_cur = p_cur * f
            total = total * f * f
            log_scale = log_scale + np.where(big, 200.0 * math.log(10.0), 0.0)
    log_w = -np.log(total) - log_scale
    log_w -= log_w.max()
    w = np.exp(log_w)
    return w / w.sum()


def _golub_welsch(diag, off, family, variable) -> QuadratureRule:
    n = len(diag)
    if n == 1:
        nodes = np.array([float(diag[0])])
        weights = np.array([1.0])
    else:
        try:
            nodes = eigh_tridiagonal(diag, np.sqrt(off), eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise QuadratureError(f"tridiagonal eigensolver failed for {family.label}, N={n}: {exc}") from exc
        nodes = np.sort(nodes)
        weights = _christoffel_weights(diag, off, nodes)
    if not np.all(np.isfinite(nodes)):
        raise QuadratureError(f"non-finite nodes for {family.label}, N={n}")
    if not np.all(weights > 0):
        raise QuadratureError(
            f"weights of the {n}-point rule for {family.label} underflow double precision; use fewer nodes"
        )
    return QuadratureRule(family, n, nodes, weights, variable)


def build_rule(family: FamilySpec, N: int) -> QuadratureRule:
    """N-point Gauss rule for the family's normalised measure."""
    if N < 1:
        raise ValueError("N must be >= 1")
    diag, off = recurrence_coefficients(family, N)
    rule = _golub_welsch(diag, off, family, "x")
    sup = family.support
    if not np.all(sup.contains(rule.nodes, closed=False)):
        # Nodes on or outside the boundary only happen through rounding for
        # extreme parameters; pull them back rather than sample outside.
        nodes = np.clip(rule.nodes, np.nextafter(sup.lo, 0.0), np.nextafter(sup.hi, 0.0))
        rule = QuadratureRule(family, N, nodes, rule.weights, "x")
    return rule


def scaled_recurrence(family: FamilySpec, n: int, variable: str, scale: float) -> tuple[np.ndarray, np.ndarray]:
    """Monic recurrence coefficients after a change of variable.

    ``variable="sqrt_lam_x"``: y = sqrt(scale) x.
    ``variable="beta_half_1mx"``: y = scale (1 - x) / 2 (Jacobi or Gegenbauer only).
    """
    if variable == "x":
        return recurrence_coefficients(family, n)
    if variable == "sqrt_lam_x":
        diag, off = recurrence_coefficients(family, n)
        return math.sqrt(scale) * diag, scale * off
    if variable == "beta_half_1mx":
        j = family.as_jacobi()
        diag = 0.5 * scale * _jacobi_one_minus_diag(n, j.alpha, j.beta)
        off = 0.25 * scale * scale * _jacobi_offdiag(n, j.alpha, j.beta)
        return diag, off
    raise ValueError(f"unknown variable {variable!r}")


def orthonormal_all(diag: np.ndarray, off: np.ndarray, x) -> np.ndarray:
    """Orthonormal polynomials of degrees 0..len(diag)-1 at ``x``.

    ``diag`` and ``off`` are monic recurrence coefficients as returned by
    ``recurrence_coefficients`` or ``scaled_recurrence``; the measure is a
    probability measure, so the degree-0 polynomial is 1.
    """
    x = np.asarray(x, dtype=float)
    n = len(diag)
    sq = np.sqrt(off)
    out = np.empty((n,) + x.shape)
    out[0] = 1.0
    if n > 1:
        out[1] = (x - diag[0]) / sq[0]
    for k in range(1, n - 1):
        out[k + 1] = ((x - diag[k]) * out[k] - sq[k - 1] * out[k - 1]) / sq[k]
    return out


def gauss_scaled_rule(lam: float, N: int) -> QuadratureRule:
    """Rule for the symmetric Jacobi measure of parameter lam in y = sqrt(lam) x."""
    family = FamilySpec.gegenbauer(lam)
    diag, off = scaled_recurrence(family, N, "sqrt_lam_x", lam)
    rule = _golub_welsch(diag, off, family, "sqrt_lam_x")
    r = math.sqrt(lam)
    return QuadratureRule(family, N, np.clip(rule.nodes, -r, r), rule.weights, rule.variable)


def laguerre_scaled_rule(alpha: float, beta: float, N: int) -> QuadratureRule:
    """Rule for the Jacobi(alpha, beta) measure in y = beta (1 - x) / 2."""
    family = FamilySpec.jacobi(alpha, beta)
    diag, off = scaled_recurrence(family, N, "beta_half_1mx", beta)
    rule = _golub_welsch(diag, off, family, "beta_half_1mx")
    return QuadratureRule(family, N, np.clip(rule.nodes, 0.0, beta), rule.weights, rule.variable)


def _sample(f: Evaluator, rule: QuadratureRule) -> np.ndarray:
    vals = np.asarray(f(rule.nodes), dtype=float)
    vals = np.broadcast_to(vals, rule.nodes.shape)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise QuadratureError(f"non-finite sample {vals[i]!r} at node {i} (x = {rule.nodes[i]!r})")
    return vals


def inner_product(f: Evaluator, g: Evaluator, rule: QuadratureRule) -> float:
    """sum_i w_i f(x_i) g(x_i)."""
    return rule.integrate(_sample(f, rule) * _sample(g, rule))


def lp_norm(f: Evaluator, rule: QuadratureRule, p: float) -> float:
    """(sum_i w_i |f(x_i)|^p)^(1/p); p = inf gives the max over nodes."""
    if not p >= 1:
        raise ValueError("p must be >= 1")
    vals = np.abs(_sample(f, rule))
    if math.isinf(p):
        return float(vals.max())
    return rule.integrate(vals ** p) ** (1.0 / p)


def _same_measure(a: FamilySpec, b: FamilySpec) -> bool:
    if a.kind in ("jacobi", "gegenbauer") and b.kind in ("jacobi", "gegenbauer"):
        ja, jb = a.as_jacobi(), b.as_jacobi()
        return ja.alpha == jb.alpha and ja.beta == jb.beta
    return a == b


def expand(f: Evaluator, family: FamilySpec, K: int, rule: QuadratureRule) -> Expansion:
    """Raw Fourier coefficients <f, phi_k>, k = 0..K.

    Exact for polynomial f of degree <= K when the rule has at least K + 1
    nodes.  With fewer nodes, degrees above 2N - 1 - K alias onto lower ones.
    """
    if rule.variable != "x" or not _same_measure(family, rule.family):
        raise ValueError(f"rule for {rule.family.label} ({rule.variable}) does not match {family.label}")
    fv = _sample(f, rule)
    phi = eval_all(family, K, rule.nodes)
    return Expansion(family, phi @ (rule.weights * fv))
