"""Exact arithmetic in Q(sqrt(D)) for quadratic irrationals.

Used as the independent formula route for prime renormalization: the value is
converted out of continued-fraction form, pushed through the rational formula
with exact surd arithmetic, and expanded back into a continued fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Surd:
    """The number ``r + s*sqrt(d)`` with rational ``r, s`` and integer ``d > 0``."""

    r: Fraction
    s: Fraction
    d: int

    @classmethod
    def of(cls, value, d: int) -> "Surd":
        return cls(Fraction(value), Fraction(0), d)

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.d != self.d and other.s != 0 and self.s != 0:
                raise ValueError("mixed radicands")
            return other if other.s != 0 else Surd(other.r, Fraction(0), self.d)
        return Surd(Fraction(other), Fraction(0), self.d)

    def _d_for(self, other: "Surd") -> int:
        return self.d if self.s != 0 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        return Surd(self.r + o.r, self.s + o.s, self._d_for(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.r, -self.s, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._d_for(o)
        return Surd(self.r * o.r + self.s * o.s * d, self.r * o.s + self.s * o.r, d)

    __rmul__ = __mul__

    def reciprocal(self) -> "Surd":
        norm = self.r * self.r - self.s * self.s * self.d
        if norm == 0:
            raise ZeroDivisionError("surd has zero norm")
        return Surd(self.r / norm, -self.s / norm, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def sign(self) -> int:
        """Exact sign of ``r + s*sqrt(d)``."""
        r, s = self.r, self.s
        if s == 0:
            return (r > 0) - (r < 0)
        if r == 0:
            return (s > 0) - (s < 0)
        if (r > 0) == (s > 0):
            return 1 if r > 0 else -1
        # opposite signs: compare r^2 with s^2 d
        diff = r * r - s * s * self.d
        if diff == 0:
            return 0
        return (1 if r > 0 else -1) if diff > 0 else (1 if s > 0 else -1)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        return float(self.r) + float(self.s) * math.sqrt(self.d)

    def floor(self) -> int:
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n


def from_continued_fraction(preperiod, period) -> Surd:
    """Value of ``[0; preperiod, (period)]`` as an exact surd."""
    # tail y = [b1; b2, ..., bk, y]; y is the positive root of Q y^2 + (Q' - P) y - P' = 0
    p, p_prev, q, q_prev = 1, 0, 0, 1
    for b in period:
        p, p_prev = b * p + p_prev, p
        q, q_prev = b * q + q_prev, q
    disc = (q_prev - p) ** 2 + 4 * q * p_prev
    root = math.isqrt(disc)
    if root * root == disc:
        raise ValueError("period does not define an irrational tail")
    y = Surd(Fraction(p - q_prev, 2 * q), Fraction(1, 2 * q), disc)
    x = y
    for a in reversed(preperiod):
        x = a + x.reciprocal()
    return x.reciprocal()


def to_continued_fraction(x: Surd, max_terms: int = 100_000):
    """Expand ``x`` in (0, 1) as ``[0; pre, (period)]``; returns ``(pre, period)``.

    The complete quotients of a quadratic irrational repeat exactly, so the
    expansion terminates once a state is revisited.
    """
    if not (0 < x < 1):
        raise ValueError("expected a value strictly between 0 and 1")
    seen: dict[tuple[Fraction, Fraction], int] = {}
    coeffs: list[int] = []
    y = x.reciprocal()
    while (y.r, y.s) not in seen:
        if len(coeffs) >= max_terms:
            raise RuntimeError("continued fraction did not become periodic")
        seen[(y.r, y.s)] = len(coeffs)
        a = y.floor()
        coeffs.append(a)
        y = (y - a).reciprocal()
    start = seen[(y.r, y.s)]
    return tuple(coeffs[:start]), tuple(coeffs[start:])
