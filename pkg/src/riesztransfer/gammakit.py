"""Log-domain Gamma arithmetic.

Every normalisation constant in the package (Jacobi and Gegenbauer measure
constants, L2 norms, Riesz multipliers) is a ratio of Gamma functions whose
individual factors overflow long before the ratio does: Gamma(2*lam) is
already out of double range at lam ~ 86.  Values are therefore carried as
``LogValue`` (log|v|, sign) pairs and exponentiated only at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

__all__ = [
    "LogValue",
    "log_gamma",
    "log_gamma_signed",
    "log_gamma_ratio",
    "gamma_ratio",
    "log_beta",
    "pochhammer_log",
    "gegenbauer_measure_constant",
]

# Stirling series for ln Gamma(x) - [(x-1/2) ln x - x + ln(2 pi)/2], x >= 10.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_STIRLING_MIN = 10.0


@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(log_abs)``.

    ``sign == 0`` encodes an exact zero (``log_abs`` is then ``-inf``).
    """

    log_abs: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0 and self.log_abs != -math.inf:
            object.__setattr__(self, "log_abs", -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0.0, 1)

    def __mul__(self, other: "LogValue | float") -> "LogValue":
        other = _as_logvalue(other)
        s = self.sign * other.sign
        if s == 0:
            return LogValue(-math.inf, 0)
        return LogValue(self.log_abs + other.log_abs, s)

    __rmul__ = __mul__

    def __truediv__(self, other: "LogValue | float") -> "LogValue":
        other = _as_logvalue(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero LogValue")
        if self.sign == 0:
            return self
        return LogValue(self.log_abs - other.log_abs, self.sign * other.sign)

    def __rtruediv__(self, other: float) -> "LogValue":
        return _as_logvalue(other) / self

    def __pow__(self, exponent: float) -> "LogValue":
        if self.sign == 0:
            if exponent <= 0:
                raise ZeroDivisionError("zero raised to a non-positive power")
            return self
        if self.sign < 0:
            if float(exponent).is_integer():
                s = -1 if int(exponent) % 2 else 1
                return LogValue(self.log_abs * exponent, s)
            raise ValueError("non-integer power of a negative LogValue")
        return LogValue(self.log_abs * exponent, 1)

    def __neg__(self) -> "LogValue":
        return LogValue(self.log_abs, -self.sign)

    def sqrt(self) -> "LogValue":
        return self ** 0.5

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    value = __float__


def _as_logvalue(x) -> LogValue:
    if isinstance(x, LogValue):
        return x
    return LogValue.from_float(float(x))


def _check_positive(**kwargs):
    for name, v in kwargs.items():
        if not v > 0:
            raise ValueError(f"{name} must be > 0, got {v!r}")


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    _check_positive(x=x)
    return float(special.gammaln(x))


def log_gamma_signed(x: float) -> LogValue:
    """Gamma(x) as a LogValue for any real x that is not a pole."""
    if x <= 0 and float(x).is_integer():
        raise ValueError(f"Gamma has a pole at {x!r}")
    return LogValue(float(special.gammaln(x)), int(special.gammasgn(x)))


def _stirling_tail(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    p = inv
    for c in _STIRLING:
        acc += c * p
        p *= inv2
    return acc


def log_gamma_ratio(a: float, b: float) -> float:
    """ln(Gamma(a) / Gamma(b)) for a, b > 0.

    For large arguments the leading Stirling terms are differenced
    analytically, so common shifts of 1e8 lose no digits to cancellation.
    """
    _check_positive(a=a, b=b)
    if a == b:
        return 0.0
    if min(a, b) < _STIRLING_MIN:
        return float(special.gammaln(a) - special.gammaln(b))
    d = a - b
    lead = (a - 0.5) * math.log1p(d / b) + d * math.log(b) - d
    return lead + _stirling_tail(a) - _stirling_tail(b)


def gamma_ratio(a: float, b: float) -> LogValue:
    """Gamma(a) / Gamma(b) as a LogValue (a, b > 0)."""
    return LogValue(log_gamma_ratio(a, b), 1)


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)."""
    _check_positive(a=a, b=b)
    if a >= b:
        return log_gamma_ratio(a, a + b) + log_gamma(b)
    return log_gamma_ratio(b, a + b) + log_gamma(a)


def pochhammer_log(a: float, k: int) -> LogValue:
    """Rising factorial (a)_k = Gamma(a + k) / Gamma(a) as a LogValue.

    Non-positive ``a`` is accepted: the leading factors are multiplied out
    with their signs until the running argument turns positive.  A zero
    factor gives an exact zero.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    k = int(k)
    out = LogValue.one()
    while k > 0 and a <= 0:
        if a == 0:
            return LogValue(-math.inf, 0)
        out = out * a
        a += 1.0
        k -= 1
    if k == 0:
        return out
    return out * gamma_ratio(a + k, a)


def gegenbauer_measure_constant(lam: float, form: str = "reduced") -> LogValue:
    """Normalising constant of the Gegenbauer measure (1 - x^2)^(lam - 1/2) dx.

    ``form="direct"`` uses Gamma(2 lam + 1) / (2^(2 lam) Gamma(lam + 1/2)^2);
    ``form="duplication"`` uses lam 2^(2 lam) Gamma(lam)^2 / (2 pi Gamma(2 lam)).
    The two agree by Legendre's duplication formula; the second is singular
    at lam = 0.  ``form="reduced"`` (default) is their common value
    Gamma(lam + 1) / (sqrt(pi) Gamma(lam + 1/2)), a single ratio.

    For large lam the literal forms difference logs of size ~lam; there the
    leading Stirling terms are cancelled analytically, leaving
    ln(2 lam + 1)/2 - ln(2 pi)/2 and ln(lam / pi)/2 plus Stirling tails.
    """
    if not lam > -0.5:
        raise ValueError(f"lam must be > -1/2, got {lam!r}")
    ln2 = math.log(2.0)
    if form == "reduced":
        return LogValue(log_gamma_ratio(lam + 1.0, lam + 0.5) - 0.5 * math.log(math.pi), 1)
    if form == "direct":
        if lam + 0.5 >= _STIRLING_MIN:
            lead = 0.5 * math.log(2 * lam + 1) - 0.5 * math.log(2 * math.pi)
            return LogValue(lead + _stirling_tail(2 * lam + 1) - 2 * _stirling_tail(lam + 0.5), 1)
        num = log_gamma_ratio(2 * lam + 1, lam + 0.5)
        return LogValue(num - 2 * lam * ln2 - log_gamma(lam + 0.5), 1)
    if form == "duplication":
        if lam == 0:
            raise ValueError("duplication form is singular at lam = 0")
        if lam >= _STIRLING_MIN:
            lead = 0.5 * math.log(lam / math.pi)
            return LogValue(lead + 2 * _stirling_tail(lam) - _stirling_tail(2 * lam), 1)
        g = log_gamma_signed(lam)
        out = LogValue.from_float(lam) * (g * g) / log_gamma_signed(2 * lam)
        return out * LogValue(2 * lam * ln2 - math.log(2 * math.pi), 1)
    raise ValueError(f"unknown form {form!r}")
