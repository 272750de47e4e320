"""Truncated Taylor-jet arithmetic for scalar functions of the arc parameter.

A jet of order k is the coefficient sequence (e_0, ..., e_k) of the
polynomial e_0 + e_1 s + ... + e_k s^k that represents the function near
s = 0, with e_i the i-th derivative divided by i factorial.  Jets support
ring arithmetic, composition with elementary functions, antiderivatives,
and a sign classification: a jet with vanishing constant term is positive
when its first nonzero coefficient is positive, which guarantees that the
underlying function is increasing on some interval (0, delta).

Arithmetic is written so that ordinary floats and jets can flow through
the same scalar expressions; ``sqrt``, ``exp`` and friends dispatch on the
argument type.  This is how work forms are evaluated both pointwise and
at the jet level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

K_MAX = 8

_EPS = float(np.finfo(float).eps)


class JetSign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Jet:
    """Coefficients (e_0, ..., e_k) of a truncated Taylor expansion at s = 0."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a jet needs at least the constant coefficient")
        if len(self.coeffs) - 1 > K_MAX:
            raise ValueError(f"jet order limited to {K_MAX}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def constant(value: float, order: int) -> "Jet":
        return Jet((float(value),) + (0.0,) * order)

    @staticmethod
    def variable(value: float, order: int) -> "Jet":
        """Jet of s |-> value + s."""
        if order < 1:
            raise ValueError("variable jet needs order >= 1")
        return Jet((float(value), 1.0) + (0.0,) * (order - 1))

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot extend a jet by truncation")
        return Jet(self.coeffs[: order + 1])

    def extend(self, order: int) -> "Jet":
        """Zero-pad to a higher order (valid only when the tail is known to vanish)."""
        if order < self.order:
            raise ValueError("use truncate to lower the order")
        return Jet(self.coeffs + (0.0,) * (order - self.order))

    def __call__(self, s: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    # -- ring operations ----------------------------------------------

    def _match(self, other: "Jet"):
        if self.order != other.order:
            raise ValueError(f"jet order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._match(other)
            return Jet(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))
        if isinstance(other, (int, float)):
            return Jet((self.coeffs[0] + float(other),) + self.coeffs[1:])
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            self._match(other)
            return Jet(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))
        if isinstance(other, (int, float)):
            return Jet((self.coeffs[0] - float(other),) + self.coeffs[1:])
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return Jet((float(other) - self.coeffs[0],) + tuple(-c for c in self.coeffs[1:]))
        return NotImplemented

    def __neg__(self):
        return Jet(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._match(other)
            k = self.order
            out = [0.0] * (k + 1)
            for i, a in enumerate(self.coeffs):
                if a == 0.0:
                    continue
                for j in range(k + 1 - i):
                    out[i + j] += a * other.coeffs[j]
            return Jet(tuple(out))
        if isinstance(other, (int, float)):
            return Jet(tuple(float(other) * c for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / float(other))
        if isinstance(other, Jet):
            return self * compose_elementary("reciprocal", other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return float(other) * compose_elementary("reciprocal", self)
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        acc = Jet.constant(1.0, self.order)
        for _ in range(exponent):
            acc = acc * self
        return acc


def antiderivative(a: Jet) -> Jet:
    """Integrate coefficientwise: an order k-1 integrand gives the order-k jet, vanishing at 0."""
    if a.order + 1 > K_MAX:
        raise ValueError(f"antiderivative exceeds the maximum jet order {K_MAX}")
    return Jet((0.0,) + tuple(c / (i + 1) for i, c in enumerate(a.coeffs)))


def derivative(a: Jet) -> Jet:
    if a.order == 0:
        raise ValueError("cannot differentiate an order-0 jet")
    return Jet(tuple((i + 1) * c for i, c in enumerate(a.coeffs[1:])))


# -- elementary function composition ----------------------------------

def _series_at(fn: str, x0: float, order: int):
    """Taylor coefficients of an elementary function about x0."""
    if fn == "exp":
        e = math.exp(x0)
        return [e / math.factorial(i) for i in range(order + 1)]
    if fn == "sin":
        return [math.sin(x0 + i * math.pi / 2.0) / math.factorial(i) for i in range(order + 1)]
    if fn == "cos":
        return [math.cos(x0 + i * math.pi / 2.0) / math.factorial(i) for i in range(order + 1)]
    if fn == "sqrt":
        if x0 <= 0.0:
            raise ValueError("sqrt of a jet needs a positive constant term")
        root = math.sqrt(x0)
        out = [root]
        binom = 1.0  # binom(1/2, i), built up incrementally
        for i in range(1, order + 1):
            binom *= (0.5 - (i - 1)) / i
            out.append(binom * root / x0**i)
        return out
    if fn == "log":
        if x0 <= 0.0:
            raise ValueError("log of a jet needs a positive constant term")
        out = [math.log(x0)]
        for i in range(1, order + 1):
            out.append((-1.0) ** (i + 1) / (i * x0**i))
        return out
    if fn == "reciprocal":
        if x0 == 0.0:
            raise ValueError("reciprocal of a jet needs a nonzero constant term")
        return [(-1.0) ** i / x0 ** (i + 1) for i in range(order + 1)]
    raise ValueError(f"unknown elementary function {fn!r}")


def compose_elementary(fn: str, a: Jet) -> Jet:
    """Jet of fn composed with a, truncated at the order of a."""
    k = a.order
    series = _series_at(fn, a.coeffs[0], k)
    h = a - a.coeffs[0]
    acc = Jet.constant(series[k], k)
    for i in range(k - 1, -1, -1):
        acc = acc * h + series[i]
    return acc


def sqrt(x):
    return compose_elementary("sqrt", x) if isinstance(x, Jet) else math.sqrt(x)


def exp(x):
    return compose_elementary("exp", x) if isinstance(x, Jet) else math.exp(x)


def log(x):
    return compose_elementary("log", x) if isinstance(x, Jet) else math.log(x)


def sin(x):
    return compose_elementary("sin", x) if isinstance(x, Jet) else math.sin(x)


def cos(x):
    return compose_elementary("cos", x) if isinstance(x, Jet) else math.cos(x)


def reciprocal(x):
    return compose_elementary("reciprocal", x) if isinstance(x, Jet) else 1.0 / x


# -- sign classification ----------------------------------------------

def classify(a: Jet, zero_tol: float = 0.0, source_is_zero: bool = False) -> JetSign:
    """Sign of a jet with vanishing constant term.

    The first coefficient beyond the zero band decides the sign.  A jet
    whose coefficients all vanish is ZERO only when the caller asserts
    the source function is identically zero; otherwise the truncation
    simply does not decide and the result is INDETERMINATE.

    ``zero_tol`` scales with the coefficient magnitudes so that sign
    tests remain meaningful on computed (inexact) jets.
    """
    band = zero_tol * (1.0 + sum(abs(c) for c in a.coeffs))
    if abs(a.coeffs[0]) > band:
        raise ValueError(
            "jet has a nonzero constant term; work functions must vanish at the initial configuration"
        )
    for c in a.coeffs[1:]:
        if c > band:
            return JetSign.POSITIVE
        if c < -band:
            return JetSign.NEGATIVE
    return JetSign.ZERO if source_is_zero else JetSign.INDETERMINATE


# -- jets from sampled functions ---------------------------------------

def _forward_difference(f, m: int, h: float) -> float:
    """One-sided m-th difference quotient at 0 (domain is [0, a])."""
    acc = 0.0
    for j in range(m + 1):
        acc += (-1.0) ** (m - j) * math.comb(m, j) * f(j * h)
    return acc / h**m


def _richardson(f, m: int, h: float, levels: int = 4) -> float:
    """Neville extrapolation of the difference quotient towards h -> 0."""
    hs = [h * 2.0**j for j in range(levels)]
    t = [_forward_difference(f, m, hj) for hj in hs]
    for lvl in range(1, levels):
        for i in range(levels - lvl):
            t[i] = t[i] + (t[i] - t[i + 1]) * hs[i] / (hs[i + lvl] - hs[i])
    return t[0]


def from_function(f, order: int, scale: float = 1.0) -> Jet:
    """Jet of an evaluable function by one-sided finite differences.

    Supported up to order 4; accuracy degrades with the order, so exact
    jet propagation through arithmetic is preferred whenever available.
    The step for the m-th derivative balances truncation against
    subtractive cancellation; the fourth derivative needs a larger step
    because its difference stencil cancels eight leading digits.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > 4:
        raise ValueError("finite-difference jets are supported up to order 4")
    coeffs = [float(f(0.0))]
    width = max(1.0, abs(scale))
    for m in range(1, order + 1):
        h = width * _EPS ** (1.0 / (m + 3 if m < 4 else m + 4))
        coeffs.append(_richardson(f, m, h) / math.factorial(m))
    return Jet(tuple(coeffs))
