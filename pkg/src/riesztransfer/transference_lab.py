"""Finite-parameter checks of the Jacobi -> Hermite / Laguerre transference.

Two scaling maps move functions from the limit spaces onto [-1, 1]:

* gauss:    f_lam(x)  = f(sqrt(lam) x), against the symmetric Jacobi measure
            of parameter lam; the limit is the Gaussian measure on R.
* laguerre: f_beta(x) = f(beta (1 - x) / 2), against the Jacobi(alpha, beta)
            measure; the limit is the Gamma measure on (0, inf).

All integrals against the scaled measures use Gauss rules built directly in
the limit variable y (see ``quadrature.gauss_scaled_rule`` and
``quadrature.laguerre_scaled_rule``), so nothing is ever sampled at
x = y / sqrt(lam) with lam ~ 1e8.

Riesz images are handled in orthonormal form.  If a_n are the orthonormal
coefficients of the scaled function, the Riesz transform of the n-th
orthonormal polynomial is kappa * w(x) * q_{n-1}(x), where q is orthonormal
for the shifted family and kappa does not depend on n:

    gauss:    kappa^2 = 2 (lam + 1) / (2 lam + 1),                w = sqrt(1 - x^2)
    laguerre: kappa^2 = (c + 2)(c + 3) / (4 (alpha + 1)(beta + 1)), w = sqrt(1 - x^2)

with c = alpha + beta.  Moving back to y and re-weighting onto the limit
measure multiplies by the envelopes (1 - y^2/lam)^(lam/2 - 1/4) e^(y^2/2)
and (1 - y/beta)^(beta/2) e^(y/2) respectively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .gammakit import gegenbauer_measure_constant, log_gamma, log_gamma_ratio
from .orthopoly import (
    FamilySpec,
    eval_all,
    scaled_gegenbauer_all,
    shifted_jacobi_all,
)
from .quadrature import (
    build_rule,
    expand,
    gauss_scaled_rule,
    laguerre_scaled_rule,
    orthonormal_all,
    recurrence_coefficients,
    scaled_recurrence,
)
from .riesz_spectral import riesz_apply, riesz_l2_norm_sq

__all__ = [
    "ScaledFunction",
    "ReportRow",
    "ConvergenceReport",
    "DesigResult",
    "TestFunction",
    "GAUSS_BATTERY",
    "LAGUERRE_BATTERY",
    "norm_relation",
    "inner_product_relation",
    "asymptotic_error",
    "asymptotic_error_profile",
    "desig_check",
    "scaled_riesz_series",
    "limit_riesz_series",
    "tail_energy",
    "tail_mass",
    "tail_bound",
    "gradient_energy",
    "riesz_limit_identity",
    "operator_norm_sweep",
    "omega_gauss",
    "omega_laguerre",
    "omega_gauss_bound",
]

Evaluator = Callable[[np.ndarray], np.ndarray]
DIRECTIONS = ("gauss", "laguerre")


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be 'gauss' or 'laguerre', got {direction!r}")


@dataclass(frozen=True)
class ScaledFunction:
    """f_lam(x) = f(sqrt(lam) x) or f_beta(x) = f(beta (1 - x) / 2) on [-1, 1], 0 outside."""

    base: Evaluator
    direction: str
    parameter: float

    def __post_init__(self):
        _check_direction(self.direction)
        if not self.parameter > 0:
            raise ValueError("scaling parameter must be positive")

    def to_limit_variable(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.direction == "gauss":
            return math.sqrt(self.parameter) * x
        return 0.5 * self.parameter * (1.0 - x)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= 1.0
        y = self.to_limit_variable(np.where(inside, x, 0.0))
        return np.where(inside, self.base(y), 0.0)


@dataclass(frozen=True)
class ReportRow:
    param: float
    value: float
    reference: float
    abs_err: float
    rel_err: float


@dataclass
class ConvergenceReport:
    experiment: str
    function_id: str
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, param: float, value: float, reference: float) -> None:
        err = abs(value - reference)
        rel = err / abs(reference) if reference != 0 else err
        self.rows.append(ReportRow(float(param), float(value), float(reference), float(err), float(rel)))
        self.rows.sort(key=lambda r: r.param)

    @property
    def params(self) -> np.ndarray:
        return np.array([r.param for r in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.abs_err for r in self.rows])

    def strictly_decreasing(self, slack: float = 1e-13) -> bool:
        """Errors decrease along params; an error already at 0 may stay there."""
        e = self.errors
        return all(b < a + slack and (b < a or a <= slack) for a, b in zip(e[:-1], e[1:]))


@dataclass(frozen=True)
class TestFunction:
    """A named test function with its derivative."""

    name: str
    f: Evaluator
    df: Evaluator


def _bump(center: float, radius: float):
    def f(y):
        t = (np.asarray(y, dtype=float) - center) / radius
        inside = np.abs(t) < 1.0
        s = np.where(inside, 1.0 - t * t, 1.0)
        return np.where(inside, np.exp(-1.0 / s), 0.0)

    def df(y):
        t = (np.asarray(y, dtype=float) - center) / radius
        inside = np.abs(t) < 1.0
        s = np.where(inside, 1.0 - t * t, 1.0)
        return np.where(inside, np.exp(-1.0 / s) * (-2.0 * t / (s * s)) / radius, 0.0)

    return f, df


_g_bump = _bump(0.0, 2.0)
_l_bump = _bump(3.0, 2.0)

GAUSS_BATTERY = {
    "y": TestFunction("y", lambda y: np.asarray(y, float), lambda y: np.ones_like(np.asarray(y, float))),
    "y2": TestFunction("y2", lambda y: np.asarray(y, float) ** 2, lambda y: 2 * np.asarray(y, float)),
    "gauss_bump": TestFunction(
        "gauss_bump",
        lambda y: np.exp(-np.asarray(y, float) ** 2 / 4),
        lambda y: -0.5 * np.asarray(y, float) * np.exp(-np.asarray(y, float) ** 2 / 4),
    ),
    "H1": TestFunction("H1", lambda y: 2 * np.asarray(y, float), lambda y: 2 * np.ones_like(np.asarray(y, float))),
    "H2+H1": TestFunction(
        "H2+H1",
        lambda y: 4 * np.asarray(y, float) ** 2 - 2 + 2 * np.asarray(y, float),
        lambda y: 8 * np.asarray(y, float) + 2,
    ),
    "poly4": TestFunction(
        "poly4",
        lambda y: np.asarray(y, float) ** 4 - np.asarray(y, float),
        lambda y: 4 * np.asarray(y, float) ** 3 - 1,
    ),
    "bump": TestFunction("bump", *_g_bump),
}

LAGUERRE_BATTERY = {
    "1-t": TestFunction("1-t", lambda t: 1 - np.asarray(t, float), lambda t: -np.ones_like(np.asarray(t, float))),
    "t": TestFunction("t", lambda t: np.asarray(t, float), lambda t: np.ones_like(np.asarray(t, float))),
    "exp_half": TestFunction(
        "exp_half",
        lambda t: np.exp(-np.asarray(t, float) / 2),
        lambda t: -0.5 * np.exp(-np.asarray(t, float) / 2),
    ),
    "bump": TestFunction("bump", *_l_bump),
}


def _scaled_rule(direction: str, param: float, alpha: float, N: int):
    if direction == "gauss":
        return gauss_scaled_rule(param, N)
    return laguerre_scaled_rule(alpha, param, N)


def _limit_family(direction: str, alpha: float) -> FamilySpec:
    return FamilySpec.hermite() if direction == "gauss" else FamilySpec.laguerre(alpha)


def norm_relation(
    f: Evaluator,
    direction: str,
    p: float = 2.0,
    params: Sequence[float] = (1e2, 1e3, 1e4),
    quad_order: int = 48,
    alpha: float = 0.0,
    function_id: str = "f",
) -> ConvergenceReport:
    """||f_param||_p against the scaled measure vs ||f||_p against the limit measure."""
    _check_direction(direction)
    if not p >= 1:
        raise ValueError("p must be >= 1")
    lim = build_rule(_limit_family(direction, alpha), quad_order)
    ref = lim.integrate(np.abs(f(lim.nodes)) ** p) ** (1.0 / p)
    rep = ConvergenceReport(
        "norm_relation", function_id,
        metadata={"direction": direction, "p": p, "alpha": alpha, "quad_order": quad_order},
    )
    for param in sorted(params):
        rule = _scaled_rule(direction, param, alpha, quad_order)
        val = rule.integrate(np.abs(f(rule.nodes)) ** p) ** (1.0 / p)
        rep.add(param, val, ref)
    return rep


def inner_product_relation(
    f: Evaluator,
    direction: str,
    k: int,
    params: Sequence[float] = (1e2, 1e3, 1e4),
    quad_order: int = 48,
    alpha: float = 0.0,
    function_id: str = "f",
) -> ConvergenceReport:
    """<f_lam, lam^(-k/2) C_k^lam> vs <f, H_k / k!>, or <f_beta, P_k^(alpha,beta)> vs <f, L_k^alpha>."""
    _check_direction(direction)
    fam = _limit_family(direction, alpha)
    lim = build_rule(fam, quad_order)
    ref = lim.integrate(f(lim.nodes) * eval_all(fam, k, lim.nodes)[k])
    if direction == "gauss":
        ref /= math.factorial(k)
    rep = ConvergenceReport(
        "inner_product_relation", function_id,
        metadata={"direction": direction, "k": k, "alpha": alpha, "quad_order": quad_order},
    )
    for param in sorted(params):
        rule = _scaled_rule(direction, param, alpha, quad_order)
        if direction == "gauss":
            phi = scaled_gegenbauer_all(k, param, rule.nodes)[k]
        else:
            phi = shifted_jacobi_all(k, alpha, param, rule.nodes)[k]
        rep.add(param, rule.integrate(f(rule.nodes) * phi), ref)
    return rep


def asymptotic_error_profile(
    target: str, n: int, param: float, grid=(-1.0, 1.0), points: int = 201, alpha: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Grid and signed error of the polynomial limit relation.

    hermite:  lam^(-n/2) C_n^lam(y / sqrt(lam)) - H_n(y) / n!
    laguerre: P_n^(alpha,beta)(1 - 2t/beta) - L_n^alpha(t)
    """
    y = np.linspace(grid[0], grid[1], points)
    if target == "hermite":
        if not math.sqrt(param) > max(abs(grid[0]), abs(grid[1])):
            raise ValueError("need sqrt(lam) beyond the grid")
        approx = scaled_gegenbauer_all(n, param, y)[n]
        exact = eval_all(FamilySpec.hermite(), n, y)[n] / math.factorial(n)
    elif target == "laguerre":
        if grid[0] < 0 or grid[1] > param:
            raise ValueError("grid must lie in [0, beta]")
        approx = shifted_jacobi_all(n, alpha, param, y)[n]
        exact = eval_all(FamilySpec.laguerre(alpha), n, y)[n]
    else:
        raise ValueError(f"unknown target {target!r}")
    return y, approx - exact


def asymptotic_error(
    target: str, n: int, param: float, grid=(-1.0, 1.0), points: int = 201, alpha: float = 0.0
) -> float:
    """Sup over the grid of the limit-relation error."""
    _, err = asymptotic_error_profile(target, n, param, grid, points, alpha)
    return float(np.abs(err).max())


@dataclass(frozen=True)
class DesigResult:
    """Both sides of the Gegenbauer-to-Hermite coefficient inequality.

    ``lhs`` carries the 1/(2 sqrt(pi)) factor literally; ``lhs_sqrt_pi_free``
    drops the sqrt(pi).
    """

    lhs: float
    rhs: float
    lhs_sqrt_pi_free: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else float("nan")


def desig_check(f: Evaluator, lam: float, K: int = 10, quad_order: int | None = None) -> DesigResult:
    """Compare sum_k |<f_lam, lam^(-k/2) C_k^lam>|^2 (k/lam + 1) k! / (2 sqrt(pi) prod_j (2 + j/lam))
    with the Gegenbauer Parseval sum of the Riesz transform of f_lam, both truncated at K."""
    if quad_order is None:
        quad_order = 4 * K + 8
    rule = gauss_scaled_rule(lam, quad_order)
    D = scaled_gegenbauer_all(K, lam, rule.nodes)
    s = D @ (rule.weights * f(rule.nodes))
    lhs_free = 0.0
    for k in range(1, K + 1):
        log_prod = sum(math.log(2.0 + j / lam) for j in range(1, k))
        w = math.exp(math.log(k / lam + 1.0) + log_gamma(k + 1) - math.log(2.0) - log_prod)
        lhs_free += s[k] ** 2 * w
    lhs = lhs_free / math.sqrt(math.pi)
    fam = FamilySpec.gegenbauer(lam)
    e = expand(ScaledFunction(f, "gauss", lam), fam, K, build_rule(fam, quad_order))
    rhs = riesz_l2_norm_sq(e, "paper_formula")
    return DesigResult(lhs, rhs, lhs_free)


def _support_nodes(support, order: int):
    lo, hi = support
    r = build_rule(FamilySpec.jacobi(0.0, 0.0), order)
    return lo + 0.5 * (hi - lo) * (1.0 + r.nodes), r.weights * (hi - lo)


def _scaled_density(direction: str, param: float, alpha: float, y: np.ndarray) -> np.ndarray:
    # Density in y of the scaled Jacobi measure.
    if direction == "gauss":
        lam = param
        log_c = math.log(float(gegenbauer_measure_constant(lam))) - 0.5 * math.log(lam)
        return np.exp(log_c + (lam - 0.5) * np.log1p(-y * y / lam))
    beta = param
    # y^a (1 - y/beta)^b / (beta^(a+1) B(a+1, b+1))
    log_c = -(alpha + 1.0) * math.log(beta) - log_gamma(alpha + 1.0) - log_gamma_ratio(beta + 1.0, alpha + beta + 2.0)
    return np.exp(log_c + alpha * np.log(y) + beta * np.log1p(-y / beta))


def _orthonormal_coeffs(
    phi: Evaluator, direction: str, param: float, M: int, alpha: float, quad_order: int, support=None
):
    if support is None:
        rule = _scaled_rule(direction, param, alpha, quad_order)
        y, w = rule.nodes, rule.weights
    else:
        # phi vanishes off ``support``: integrate against the density there
        y, w = _support_nodes(support, quad_order)
        w = w * _scaled_density(direction, param, alpha, y)
    if direction == "gauss":
        diag, off = scaled_recurrence(FamilySpec.gegenbauer(param), M + 1, "sqrt_lam_x", param)
    else:
        diag, off = scaled_recurrence(FamilySpec.jacobi(alpha, param), M + 1, "beta_half_1mx", param)
    P = orthonormal_all(diag, off, y)
    return P @ (w * phi(y))


def _image_basis(direction: str, param: float, M: int, alpha: float, y: np.ndarray):
    # kappa * envelope(y) * q_{n-1}(y), n = 1..M, q orthonormal for the shifted family
    if direction == "gauss":
        lam = param
        diag, off = scaled_recurrence(FamilySpec.gegenbauer(lam + 1.0), M, "sqrt_lam_x", lam)
        kappa = math.sqrt(2.0 * (lam + 1.0) / (2.0 * lam + 1.0))
        env = np.exp((lam / 2.0 + 0.25) * np.log1p(-y * y / lam) + y * y / 2.0)
        sign = 1.0
    else:
        beta = param
        c = alpha + beta
        diag, off = scaled_recurrence(FamilySpec.jacobi(alpha + 1.0, beta + 1.0), M, "beta_half_1mx", beta)
        kappa = math.sqrt((c + 2.0) * (c + 3.0) / ((alpha + 1.0) * (beta + 1.0) * beta))
        env = np.sqrt(y) * np.exp((0.5 + beta / 2.0) * np.log1p(-y / beta) + y / 2.0)
        # y runs against x, so orthonormal polynomials in y are (-1)^n times
        # those in x; the pair a_n q_{n-1} picks up one sign, cancelling the
        # minus in front of the Laguerre-side series.
        sign = 1.0
    return sign * kappa * env * orthonormal_all(diag, off, y)


def scaled_riesz_series(
    phi: Evaluator,
    direction: str,
    param: float,
    y,
    n_lo: int = 1,
    n_hi: int = 20,
    alpha: float = 0.0,
    quad_order: int = 160,
    support=None,
) -> np.ndarray:
    """Degrees n_lo..n_hi of the re-weighted Riesz image of the scaled phi, at y.

    With n_lo = 1 this is F^N_{param,k}(y) for N = n_hi (without the cut-off
    to [-k, k] / (0, k)); with n_lo = N + 1 and large n_hi it is the tail H^N.
    If phi vanishes outside ``support`` = (lo, hi), its coefficients are
    computed with a Gauss-Legendre rule on that interval instead of the
    scaled Gauss rule.
    """
    _check_direction(direction)
    y = np.asarray(y, dtype=float)
    a = _orthonormal_coeffs(phi, direction, param, n_hi, alpha, quad_order, support)
    B = _image_basis(direction, param, n_hi, alpha, y)
    return np.tensordot(a[n_lo:], B[n_lo - 1:], axes=1)


def limit_riesz_series(
    phi: Evaluator, direction: str, y, N: int, alpha: float = 0.0, quad_order: int = 160
) -> np.ndarray:
    """Partial sum n = 1..N of the Hermite-Riesz or Laguerre-Riesz expansion of phi.

    In orthonormal form the n-th term is a_n h_{n-1}(y) (Hermite) or
    -a_n sqrt(y) l_{n-1}(y) / sqrt(alpha + 1) (Laguerre, l orthonormal for
    alpha + 1), with a_n the orthonormal coefficients of phi.  The monic
    recurrence gives Laguerre orthonormals with positive leading coefficient,
    i.e. (-1)^n times the classical sign, which absorbs that minus.
    """
    _check_direction(direction)
    y = np.asarray(y, dtype=float)
    fam = _limit_family(direction, alpha)
    rule = build_rule(fam, quad_order)
    d, o = recurrence_coefficients(fam, N + 1)
    a = orthonormal_all(d, o, rule.nodes) @ (rule.weights * phi(rule.nodes))
    if direction == "gauss":
        d1, o1 = recurrence_coefficients(fam, N)
        return np.tensordot(a[1:], orthonormal_all(d1, o1, y), axes=1)
    d1, o1 = recurrence_coefficients(FamilySpec.laguerre(alpha + 1.0), N)
    return np.sqrt(y) / math.sqrt(alpha + 1.0) * np.tensordot(a[1:], orthonormal_all(d1, o1, y), axes=1)


def _window_rule(direction: str, k: float, alpha: float, G: int):
    # Nodes/weights for int_{window} g(y) (limit density) dy
    if direction == "gauss":
        r = build_rule(FamilySpec.jacobi(0.0, 0.0), G)
        y = k * r.nodes
        w = r.weights * 2.0 * k * np.exp(-y * y) / math.sqrt(math.pi)
    else:
        r = build_rule(FamilySpec.jacobi(0.0, alpha), G)
        y = 0.5 * k * (1.0 + r.nodes)
        mass = math.exp((alpha + 1.0) * math.log(k) - math.log(alpha + 1.0) - log_gamma(alpha + 1.0))
        w = r.weights * mass * np.exp(-y)
    return y, w


def _check_tail_args(direction: str, param: float, k: float, N: int) -> None:
    _check_direction(direction)
    if N < 1:
        raise ValueError("N must be >= 1")
    if direction == "gauss" and not math.sqrt(param) > k:
        raise ValueError("need sqrt(lam) > k")
    if direction == "laguerre" and not param > k:
        raise ValueError("need beta > k")


def tail_energy(
    direction: str,
    phi: Evaluator,
    param: float,
    k: float,
    N: int,
    quad_order: int = 200,
    alpha: float = 0.0,
    M: int = 120,
    window_order: int = 400,
    support=None,
) -> float:
    """Squared L^2(limit measure) norm of the degree > N tail, cut to the window.

    ``quad_order`` nodes of the scaled measure project phi onto degrees up
    to M; the series is truncated there, which for smooth phi leaves the
    neglected part far below the tail itself.  The window integral uses a
    separate ``window_order``-point Gauss rule.
    """
    _check_tail_args(direction, param, k, N)
    if N >= M:
        return 0.0
    y, w = _window_rule(direction, k, alpha, window_order)
    h = scaled_riesz_series(phi, direction, param, y, N + 1, M, alpha, quad_order, support)
    return float(np.dot(w, h * h))


def _density_ratio(direction: str, param: float, alpha: float) -> float:
    # Z: limit density over scaled density, times the envelope squared, at the
    # constant level (the y-dependence cancels exactly); Z -> 1.
    if direction == "gauss":
        return math.sqrt(param / math.pi) / float(gegenbauer_measure_constant(param))
    beta = param
    return math.exp(log_gamma_ratio(beta + 1.0, alpha + beta + 2.0) + (alpha + 1.0) * math.log(beta))


def tail_mass(
    direction: str,
    phi: Evaluator,
    param: float,
    N: int,
    quad_order: int = 200,
    alpha: float = 0.0,
    support=None,
) -> float:
    """Z * (||phi_param||^2 - sum_{n<=N} a_n^2): Parseval upper bound for ``tail_energy``.

    Needs no truncation degree, so it also bounds the part of the series
    that ``tail_energy`` drops above degree M.
    """
    _check_direction(direction)
    if support is None:
        rule = _scaled_rule(direction, param, alpha, quad_order)
        total = rule.integrate(phi(rule.nodes) ** 2)
    else:
        y, w = _support_nodes(support, quad_order)
        total = float(np.dot(w * _scaled_density(direction, param, alpha, y), phi(y) ** 2))
    a = _orthonormal_coeffs(phi, direction, param, N, alpha, quad_order, support)
    rest = max(total - float(np.dot(a[1:], a[1:])) - a[0] ** 2, 0.0)
    return _density_ratio(direction, param, alpha) * rest


def tail_bound(
    direction: str,
    dphi: Evaluator,
    param: float,
    N: int,
    alpha: float = 0.0,
    quad_order: int = 160,
    support=None,
) -> float:
    """Upper bound for ``tail_mass`` (hence ``tail_energy``) from the eigenvalue gap.

    sum_{n>N} a_n^2 <= E[Gamma(phi)] / lambda_{N+1}, where E[Gamma(phi)] is the
    Dirichlet form of the scaled function:
    gauss    lam  E[(1 - y^2/lam) phi'(y)^2],   lambda_{N+1} = (N+1)(N+1+2 lam)
    laguerre beta E[y (1 - y/beta) phi'(y)^2],  lambda_{N+1} = (N+1)(N+2+alpha+beta)
    Both are about E_limit[...] / (2(N+1)) and E_limit[...] / (N+1) for large
    parameters.
    """
    if support is None:
        rule = _scaled_rule(direction, param, alpha, quad_order)
        y, w = rule.nodes, rule.weights
    else:
        y, w = _support_nodes(support, quad_order)
        w = w * _scaled_density(direction, param, alpha, y)
    d = dphi(y)
    if direction == "gauss":
        lam = param
        dirichlet = lam * float(np.dot(w, (1.0 - y * y / lam) * d * d))
        gap = (N + 1.0) * (N + 1.0 + 2.0 * lam)
    else:
        beta = param
        dirichlet = beta * float(np.dot(w, y * (1.0 - y / beta) * d * d))
        gap = (N + 1.0) * (N + alpha + beta + 2.0)
    return _density_ratio(direction, param, alpha) * dirichlet / gap


def gradient_energy(
    direction: str, dphi: Evaluator, alpha: float = 0.0, quad_order: int = 160, support=None
) -> float:
    """E_gamma[phi'^2] (gauss) or E_{mu_alpha}[y phi'^2] (laguerre): the limit Dirichlet forms."""
    _check_direction(direction)
    if support is None:
        rule = build_rule(_limit_family(direction, alpha), quad_order)
        y, w = rule.nodes, rule.weights
    else:
        y, w = _support_nodes(support, quad_order)
        if direction == "gauss":
            w = w * np.exp(-y * y) / math.sqrt(math.pi)
        else:
            w = w * np.exp(alpha * np.log(y) - y - log_gamma(alpha + 1.0))
    d = dphi(y)
    if direction == "gauss":
        return float(np.dot(w, d * d))
    return float(np.dot(w, y * d * d))


def riesz_limit_identity(
    phi: Evaluator,
    direction: str,
    params: Sequence[float] = (1e2, 1e3, 1e4),
    K: int = 12,
    quad_order: int = 160,
    k: float = 3.0,
    alpha: float = 0.0,
    points: int = 201,
    function_id: str = "phi",
) -> ConvergenceReport:
    """Sup distance on the window between F^K_{param,k} and the limit partial sum."""
    _check_direction(direction)
    if direction == "gauss":
        y = np.linspace(-k, k, points)
    else:
        y = np.linspace(0.0, k, points)
    target = limit_riesz_series(phi, direction, y, K, alpha, quad_order)
    rep = ConvergenceReport(
        "riesz_limit_identity", function_id,
        metadata={"direction": direction, "K": K, "k": k, "alpha": alpha, "quad_order": quad_order},
    )
    for param in sorted(params):
        _check_tail_args(direction, param, k, 1)
        F = scaled_riesz_series(phi, direction, param, y, 1, K, alpha, quad_order)
        rep.add(param, float(np.abs(F - target).max()), 0.0)
    return rep


def operator_norm_sweep(
    families: Sequence[FamilySpec],
    p: float = 2.0,
    degree: int = 12,
    trials: int = 20,
    seed: int = 0,
    mean_zero: bool = False,
    quad_order: int | None = None,
) -> ConvergenceReport:
    """Largest ||R f||_p / ||f||_p over random polynomials, per family.

    Each family gets its own generator seeded from ``seed`` so the result for
    one family does not depend on which others are in the list.  The row
    parameter is the family's scaling parameter (lam, beta, or alpha).
    """
    if not p > 1:
        raise ValueError("p must be > 1")
    if quad_order is None:
        quad_order = max(4 * degree, int(math.ceil(p)) * degree) + 8
    rep = ConvergenceReport(
        "operator_norm_sweep", f"random_degree_{degree}",
        metadata={"p": p, "degree": degree, "trials": trials, "seed": seed, "mean_zero": mean_zero},
    )
    for fam in families:
        rng = np.random.default_rng(seed)
        rule = build_rule(fam, quad_order)
        d, o = recurrence_coefficients(fam, degree + 1)
        P = orthonormal_all(d, o, rule.nodes)
        best = 0.0
        for _ in range(trials):
            a = rng.standard_normal(degree + 1)
            if mean_zero:
                a[0] = 0.0
            fv = a @ P
            e = expand(lambda x, fv=fv: fv, fam, degree, rule)
            img = riesz_apply(e).evaluate(rule.nodes)
            num = rule.integrate(np.abs(img) ** p) ** (1.0 / p)
            den = rule.integrate(np.abs(fv) ** p) ** (1.0 / p)
            best = max(best, num / den)
        param = fam.lam if fam.kind == "gegenbauer" else (fam.beta if fam.kind == "jacobi" else fam.alpha)
        rep.add(param, best, 1.0 if p == 2 else float("nan"))
    return rep


def omega_gauss(y, lam: float, p: float) -> np.ndarray:
    """e^(y^2/2 - y^2/p) (1 - y^2/lam)^(lam/2 - lam/p - 1/4 + 1/(2p))."""
    y = np.asarray(y, dtype=float)
    ex = lam / 2.0 - lam / p - 0.25 + 1.0 / (2.0 * p)
    return np.exp(y * y * (0.5 - 1.0 / p) + ex * np.log1p(-y * y / lam))


def omega_gauss_bound(k: float, lam: float, p: float) -> float:
    """exp(k^2 (1/(4 lam) - 1/(2 p lam))); valid for p >= 2, where the exponent of
    (1 - y^2/lam) is non-negative."""
    return math.exp(k * k * (1.0 / (4.0 * lam) - 1.0 / (2.0 * p * lam)))


def omega_laguerre(y, beta: float, p: float) -> np.ndarray:
    """e^(y/2 - y/p) (1 - y/beta)^(beta/2 - beta/p); at most 1 when p >= 2."""
    y = np.asarray(y, dtype=float)
    return np.exp(y * (0.5 - 1.0 / p) + (beta / 2.0 - beta / p) * np.log1p(-y / beta))
