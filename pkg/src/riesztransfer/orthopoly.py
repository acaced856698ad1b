"""Classical orthogonal polynomials in Szego's normalisation.

Four systems are covered, each orthogonal against a probability measure:

* Jacobi ``P_n^(a,b)`` on [-1, 1], weight ~ (1-x)^a (1+x)^b
* Gegenbauer ``C_n^lam`` on [-1, 1], weight ~ (1-x^2)^(lam-1/2)
* Hermite ``H_n`` on R, weight exp(-x^2)/sqrt(pi)
* Laguerre ``L_n^a`` on (0, inf), weight x^a exp(-x)/Gamma(a+1)

All evaluation goes through three-term recurrences.  Functions named
``*_all`` return every degree ``0..n_max`` stacked along the first axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gammakit import LogValue, gamma_ratio, pochhammer_log

__all__ = [
    "FamilySpec",
    "SupportInterval",
    "eval_all",
    "evaluate",
    "norm_sq",
    "log_norm_sq",
    "derivative_all",
    "jacobi_derivative",
    "rodrigues_residual",
    "ode_residual",
    "gegenbauer_from_jacobi",
    "scaled_gegenbauer_all",
    "scaled_gegenbauer",
    "shifted_jacobi_all",
    "shifted_jacobi",
    "richardson_derivative",
]

KINDS = ("jacobi", "gegenbauer", "hermite", "laguerre")


@dataclass(frozen=True)
class SupportInterval:
    lo: float
    hi: float

    def contains(self, x, closed: bool = True) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if closed:
            return (x >= self.lo) & (x <= self.hi)
        return (x > self.lo) & (x < self.hi)


@dataclass(frozen=True)
class FamilySpec:
    """Which orthogonal system, and its parameters.

    Only the parameters relevant to ``kind`` are meaningful: ``alpha`` and
    ``beta`` for Jacobi, ``lam`` for Gegenbauer, ``alpha`` for Laguerre.
    """

    kind: str
    alpha: float = 0.0
    beta: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "jacobi" and not (self.alpha > -1 and self.beta > -1):
            raise ValueError(
                f"Jacobi needs alpha, beta > -1, got ({self.alpha}, {self.beta})"
            )
        if self.kind == "gegenbauer" and not self.lam > -0.5:
            raise ValueError(f"Gegenbauer needs lam > -1/2, got {self.lam}")
        if self.kind == "laguerre" and not self.alpha > -1:
            raise ValueError(f"Laguerre needs alpha > -1, got {self.alpha}")

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> "FamilySpec":
        return cls("jacobi", alpha=float(alpha), beta=float(beta))

    @classmethod
    def gegenbauer(cls, lam: float) -> "FamilySpec":
        return cls("gegenbauer", lam=float(lam))

    @classmethod
    def hermite(cls) -> "FamilySpec":
        return cls("hermite")

    @classmethod
    def laguerre(cls, alpha: float) -> "FamilySpec":
        return cls("laguerre", alpha=float(alpha))

    @property
    def support(self) -> SupportInterval:
        if self.kind in ("jacobi", "gegenbauer"):
            return SupportInterval(-1.0, 1.0)
        if self.kind == "hermite":
            return SupportInterval(-math.inf, math.inf)
        return SupportInterval(0.0, math.inf)

    def as_jacobi(self) -> "FamilySpec":
        """The Jacobi family sharing this family's measure (Gegenbauer only)."""
        if self.kind == "jacobi":
            return self
        if self.kind == "gegenbauer":
            return FamilySpec.jacobi(self.lam - 0.5, self.lam - 0.5)
        raise ValueError(f"{self.kind} has no Jacobi equivalent")

    def shifted(self) -> "FamilySpec":
        """Family in which the derivative of this family is expanded."""
        if self.kind == "jacobi":
            return FamilySpec.jacobi(self.alpha + 1, self.beta + 1)
        if self.kind == "gegenbauer":
            return FamilySpec.gegenbauer(self.lam + 1)
        if self.kind == "laguerre":
            return FamilySpec.laguerre(self.alpha + 1)
        return self

    @property
    def label(self) -> str:
        if self.kind == "jacobi":
            return f"jacobi({self.alpha:g},{self.beta:g})"
        if self.kind == "gegenbauer":
            return f"gegenbauer({self.lam:g})"
        if self.kind == "laguerre":
            return f"laguerre({self.alpha:g})"
        return "hermite"


def _jacobi_s(n_max: int, a: float, b: float, s) -> np.ndarray:
    # Recurrence in s = 1 - x.  The x-coefficient of the textbook form,
    # (k)(k-2) x + a^2 - b^2 with k = 2n + a + b, is rewritten exactly as
    # c(2a + 4n - 2) + 4n(n-1) - s k (k-2), removing the O(b^2) cancellation
    # that otherwise ruins evaluation near x = 1 for large b.
    s = np.asarray(s, dtype=float)
    c = a + b
    out = np.empty((n_max + 1,) + s.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = (a + 1.0) - 0.5 * (c + 2.0) * s
    for n in range(2, n_max + 1):
        k = 2.0 * n + c
        A = (k - 1.0) * (c * (2.0 * a + 4.0 * n - 2.0) + 4.0 * n * (n - 1.0) - s * k * (k - 2.0))
        B = 2.0 * (n + a - 1.0) * (n + b - 1.0) * k
        D = 2.0 * n * (n + c) * (k - 2.0)
        out[n] = (A * out[n - 1] - B * out[n - 2]) / D
    return out


def _gegenbauer(n_max: int, lam: float, x: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * lam * x
    for n in range(1, n_max):
        out[n + 1] = (2.0 * (n + lam) * x * out[n] - (n + 2.0 * lam - 1.0) * out[n - 1]) / (n + 1.0)
    return out


def _hermite(n_max: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * x
    for n in range(1, n_max):
        out[n + 1] = 2.0 * x * out[n] - 2.0 * n * out[n - 1]
    return out


def _laguerre(n_max: int, a: float, x: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + a - x
    for n in range(1, n_max):
        out[n + 1] = ((2.0 * n + a + 1.0 - x) * out[n] - (n + a) * out[n - 1]) / (n + 1.0)
    return out


def eval_all(family: FamilySpec, n_max: int, x) -> np.ndarray:
    """Values of degrees 0..n_max at ``x``; shape ``(n_max + 1,) + shape(x)``.

    Raises ValueError if any point lies outside the family's closed support.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    x = np.asarray(x, dtype=float)
    inside = family.support.contains(x)
    if not np.all(inside):
        bad = x[~inside].ravel()[0] if x.ndim else float(x)
        raise ValueError(f"point {bad!r} outside the support of {family.label}")
    if family.kind == "jacobi":
        return _jacobi_s(n_max, family.alpha, family.beta, 1.0 - x)
    if family.kind == "gegenbauer":
        return _gegenbauer(n_max, family.lam, x)
    if family.kind == "hermite":
        return _hermite(n_max, x)
    return _laguerre(n_max, family.alpha, x)


def evaluate(family: FamilySpec, n: int, x) -> np.ndarray:
    """Single-degree convenience wrapper around ``eval_all``."""
    return eval_all(family, n, x)[n]


def log_norm_sq(family: FamilySpec, n: int) -> LogValue:
    """||phi_n||^2 against the normalised measure, as a LogValue."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        return LogValue.one()
    if family.kind == "hermite":
        return LogValue(n * math.log(2.0) + math.lgamma(n + 1.0), 1)
    if family.kind == "laguerre":
        return pochhammer_log(family.alpha + 1.0, n) / LogValue(math.lgamma(n + 1.0), 1)
    if family.kind == "gegenbauer":
        lam = family.lam
        # lam (2 lam)_n / ((n + lam) n!)
        return (
            LogValue.from_float(lam)
            * pochhammer_log(2.0 * lam, n)
            / LogValue.from_float(n + lam)
            / LogValue(math.lgamma(n + 1.0), 1)
        )
    a, b = family.alpha, family.beta
    c = a + b
    # Gamma(c+2) Gamma(n+a+1) Gamma(n+b+1)
    #   / ((2n+c+1) Gamma(a+1) Gamma(b+1) Gamma(n+1) Gamma(n+c+1))
    return (
        gamma_ratio(n + a + 1.0, a + 1.0)
        * gamma_ratio(n + b + 1.0, n + c + 1.0)
        * gamma_ratio(c + 2.0, b + 1.0)
        / LogValue.from_float(2.0 * n + c + 1.0)
        / LogValue(math.lgamma(n + 1.0), 1)
    )


def norm_sq(family: FamilySpec, n: int) -> float:
    """||phi_n||^2 against the normalised measure."""
    return float(log_norm_sq(family, n))


def derivative_all(family: FamilySpec, n_max: int, x, order: int = 1) -> np.ndarray:
    """Derivatives of degrees 0..n_max from the closed derivative identities.

    Jacobi: (n+a+b+1)/2 P_{n-1}^(a+1,b+1); Gegenbauer: 2 lam C_{n-1}^(lam+1);
    Hermite: 2n H_{n-1}; Laguerre: -L_{n-1}^(a+1).  ``order`` > 1 applies the
    identity repeatedly.
    """
    x = np.asarray(x, dtype=float)
    if order == 0:
        return eval_all(family, n_max, x)
    out = np.zeros((n_max + 1,) + x.shape)
    if n_max == 0:
        return out
    lower = derivative_all(family.shifted(), n_max - 1, x, order - 1)
    n = np.arange(1, n_max + 1, dtype=float).reshape((-1,) + (1,) * x.ndim)
    if family.kind == "jacobi":
        factor = 0.5 * (n + family.alpha + family.beta + 1.0)
    elif family.kind == "gegenbauer":
        factor = 2.0 * family.lam * np.ones_like(n)
    elif family.kind == "hermite":
        factor = 2.0 * n
    else:
        factor = -np.ones_like(n)
    out[1:] = factor * lower
    return out


def jacobi_derivative(n: int, alpha: float, beta: float, x) -> np.ndarray:
    """d/dx P_n^(alpha,beta)(x) = (n+alpha+beta+1)/2 * P_{n-1}^(alpha+1,beta+1)(x)."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.zeros_like(x)
    fam = FamilySpec.jacobi(alpha + 1.0, beta + 1.0)
    return 0.5 * (n + alpha + beta + 1.0) * evaluate(fam, n - 1, x)


def rodrigues_residual(n: int, alpha: float, beta: float, x) -> np.ndarray:
    """LHS - RHS of the first-order Rodrigues identity.

    d/dx[(1-x)^(a+1) (1+x)^(b+1) P_{n-1}^(a+1,b+1)] = -2n (1-x)^a (1+x)^b P_n^(a,b),
    with the left side differentiated analytically.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.asarray(x, dtype=float)
    w = (1.0 - x) ** alpha * (1.0 + x) ** beta
    q = evaluate(FamilySpec.jacobi(alpha + 1.0, beta + 1.0), n - 1, x)
    dq = jacobi_derivative(n - 1, alpha + 1.0, beta + 1.0, x)
    lhs = w * (((beta + 1.0) * (1.0 - x) - (alpha + 1.0) * (1.0 + x)) * q + (1.0 - x * x) * dq)
    rhs = -2.0 * n * w * evaluate(FamilySpec.jacobi(alpha, beta), n, x)
    return lhs - rhs


def ode_residual(family: FamilySpec, n: int, x) -> tuple[np.ndarray, np.ndarray]:
    """Residual of the family's second-order ODE at ``x`` and a magnitude scale.

    The scale is the sum of the absolute values of the three ODE terms.
    """
    x = np.asarray(x, dtype=float)
    y = evaluate(family, n, x)
    dy = derivative_all(family, n, x, 1)[n]
    d2y = derivative_all(family, n, x, 2)[n]
    if family.kind == "jacobi":
        a, b = family.alpha, family.beta
        terms = ((1 - x * x) * d2y, (b - a - (a + b + 2) * x) * dy, n * (n + a + b + 1) * y)
    elif family.kind == "gegenbauer":
        lam = family.lam
        terms = ((1 - x * x) * d2y, -(2 * lam + 1) * x * dy, n * (n + 2 * lam) * y)
    elif family.kind == "hermite":
        terms = (d2y, -2 * x * dy, 2 * n * y)
    else:
        a = family.alpha
        terms = (x * d2y, (a + 1 - x) * dy, n * y)
    res = terms[0] + terms[1] + terms[2]
    scale = np.abs(terms[0]) + np.abs(terms[1]) + np.abs(terms[2])
    return res, scale


def gegenbauer_from_jacobi(n_max: int, lam: float, x) -> np.ndarray:
    """C_n^lam via the Gamma-ratio conversion from P_n^(lam-1/2, lam-1/2).

    The ratio Gamma(lam+1/2) Gamma(n+2lam) / (Gamma(2lam) Gamma(n+lam+1/2))
    is (2 lam)_n / (lam + 1/2)_n.
    """
    p = eval_all(FamilySpec.jacobi(lam - 0.5, lam - 0.5), n_max, x)
    ratios = [float(pochhammer_log(2 * lam, n) / pochhammer_log(lam + 0.5, n)) for n in range(n_max + 1)]
    r = np.asarray(ratios).reshape((-1,) + (1,) * (p.ndim - 1))
    return r * p


def scaled_gegenbauer_all(n_max: int, lam: float, y, scale: float | None = None) -> np.ndarray:
    """scale^(-n/2) C_n^lam(y / sqrt(scale)) for n = 0..n_max.

    ``scale`` defaults to ``lam``.  The recurrence runs on the rescaled
    values directly, so nothing of size scale^(n/2) is ever formed:

        D_{n+1} = [2(n+lam)/scale * y D_n - (n+2lam-1)/scale * D_{n-1}] / (n+1)
    """
    if scale is None:
        scale = lam
    if not scale > 0:
        raise ValueError("scale must be positive")
    y = np.asarray(y, dtype=float)
    if np.any(y * y > scale):
        raise ValueError("y / sqrt(scale) must lie in [-1, 1]")
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = (2.0 * lam / scale) * y
    for n in range(1, n_max):
        out[n + 1] = ((2.0 * (n + lam) / scale) * y * out[n] - ((n + 2.0 * lam - 1.0) / scale) * out[n - 1]) / (n + 1.0)
    return out


def scaled_gegenbauer(n: int, lam: float, x) -> np.ndarray:
    """lam^(-n/2) C_n^lam(x / sqrt(lam)); tends to H_n(x)/n! as lam grows."""
    return scaled_gegenbauer_all(n, lam, x)[n]


def shifted_jacobi_all(n_max: int, alpha: float, beta: float, t) -> np.ndarray:
    """P_n^(alpha,beta)(1 - 2t/beta) for n = 0..n_max, 0 <= t <= beta."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > beta):
        raise ValueError("t must lie in [0, beta]")
    FamilySpec.jacobi(alpha, beta)
    return _jacobi_s(n_max, alpha, beta, 2.0 * t / beta)


def shifted_jacobi(n: int, alpha: float, beta: float, t) -> np.ndarray:
    """P_n^(alpha,beta)(1 - 2t/beta); tends to L_n^alpha(t) as beta grows."""
    return shifted_jacobi_all(n, alpha, beta, t)[n]


def richardson_derivative(f: Callable, x, h: float = 1e-5) -> np.ndarray:
    """Central difference with one Richardson extrapolation step (O(h^4))."""
    x = np.asarray(x, dtype=float)
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3
