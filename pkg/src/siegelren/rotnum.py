"""Exact rotation numbers and their renormalization calculus.

A rotation number is either a reduced rational ``p/q`` in ``[0, 1)`` or a
quadratic irrational held as an eventually periodic continued fraction
``[0; a1, ..., am, (b1, ..., bk)]``.  A quadratic may be stored on the
*complement* side, meaning the continued fraction describes ``1 - theta``.
Equality is by value, whatever the stored side.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import quadratic

DIRECT = "direct"
COMPLEMENT = "complement"

CF_EVAL_DEPTH = 64


# -- eventually periodic coefficient sequences ------------------------------

def _minimal_period(period: tuple[int, ...]) -> tuple[int, ...]:
    k = len(period)
    for d in range(1, k + 1):
        if k % d == 0 and period[:d] * (k // d) == period:
            return period[:d]
    return period


def _normalize(pre, period):
    pre, period = tuple(pre), _minimal_period(tuple(period))
    while pre and pre[-1] == period[-1]:
        pre = pre[:-1]
        period = period[-1:] + period[:-1]
    return pre, period


def _pop(pre, period):
    if pre:
        return pre[0], pre[1:], period
    return period[0], (), period[1:] + period[:1]


def _push(a, pre, period):
    return _normalize((a,) + tuple(pre), period)


def _flip(pre, period):
    """Coefficients of ``1 - x`` given those of ``x`` (both in (0, 1), irrational)."""
    a1, pre, period = _pop(pre, period)
    if a1 >= 2:
        return _push(1, *_push(a1 - 1, pre, period))
    a2, pre, period = _pop(pre, period)
    return _push(a2 + 1, pre, period)


def _iter_coeffs(pre, period) -> Iterator[int]:
    yield from pre
    while True:
        yield from period


# -- finite continued fractions -----------------------------------------------

def rational_cf(x: Fraction) -> list[int]:
    """Canonical coefficients ``[a1, ..., ak]`` of ``x = [0; a1, ..., ak]`` in [0, 1)."""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"{x} outside [0, 1)")
    coeffs = []
    num, den = x.numerator, x.denominator
    while num:
        a, rem = divmod(den, num)
        coeffs.append(a)
        den, num = num, rem
    return coeffs


def eval_finite_cf(coeffs: Sequence[int]) -> Fraction:
    num, den = 0, 1
    for a in reversed(coeffs):
        num, den = den, a * den + num
    return Fraction(num, den)


@dataclass(frozen=True, eq=False)
class RotationNumber:
    """An exact angle in [0, 1).

    Build with :meth:`rational`, :meth:`quadratic` or :func:`parse`.
    """

    rational_value: Fraction | None = None
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()
    side: str = DIRECT
    _key: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def rational(cls, p, q=1) -> "RotationNumber":
        x = p if q == 1 and type(p) is Fraction else Fraction(p, q)
        if not 0 <= x.numerator < x.denominator:
            raise ValueError(f"rational rotation number {x} outside [0, 1)")
        return cls(rational_value=x, _key=("r", x))

    @classmethod
    def quadratic(cls, preperiod=(), period=(1,), side=DIRECT) -> "RotationNumber":
        if side not in (DIRECT, COMPLEMENT):
            raise ValueError(f"unknown side {side!r}")
        if not period:
            raise ValueError("period must be nonempty")
        if any(int(a) != a or a < 1 for a in (*preperiod, *period)):
            raise ValueError("continued fraction coefficients must be positive integers")
        pre, per = _normalize(tuple(int(a) for a in preperiod), tuple(int(a) for a in period))
        direct = _flip(pre, per) if side == COMPLEMENT else (pre, per)
        return cls(preperiod=pre, period=per, side=side, _key=("q",) + direct)

    # -- basic views --

    @property
    def is_rational(self) -> bool:
        return self.rational_value is not None

    @property
    def p(self) -> int:
        return self._require_rational().numerator

    @property
    def q(self) -> int:
        return self._require_rational().denominator

    def _require_rational(self) -> Fraction:
        if self.rational_value is None:
            raise ValueError("not a rational rotation number")
        return self.rational_value

    def direct_cf(self):
        """``(preperiod, period)`` of the direct-side expansion (quadratics only)."""
        if self.is_rational:
            raise ValueError("rational has a finite expansion; use rational_cf")
        return self._key[1], self._key[2]

    def complement_cf(self):
        """``(preperiod, period)`` of the expansion of ``1 - theta``."""
        return _flip(*self.direct_cf())

    def coefficients(self, n: int) -> list[int]:
        """First ``n`` direct coefficients (fewer for a rational)."""
        if self.is_rational:
            return rational_cf(self.rational_value)[:n]
        it = _iter_coeffs(*self.direct_cf())
        return [next(it) for _ in range(n)]

    def complement(self) -> "RotationNumber":
        """``1 - theta`` (with 0 mapped to 0)."""
        if self.is_rational:
            x = self.rational_value
            return RotationNumber.rational(0 if x == 0 else 1 - x)
        pre, per = self.direct_cf()
        return RotationNumber.quadratic(pre, per, COMPLEMENT)

    def surd(self) -> quadratic.Surd:
        if self.is_rational:
            raise ValueError("rational has no surd form")
        return quadratic.from_continued_fraction(*self.direct_cf())

    def __float__(self) -> float:
        # depth-64 convergent, evaluated exactly and rounded once; truncation error < 1/q_64^2
        if self.is_rational:
            return float(self.rational_value)
        return float(eval_finite_cf(self.coefficients(CF_EVAL_DEPTH)))

    def __eq__(self, other):
        if not isinstance(other, RotationNumber):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __str__(self) -> str:
        return format_rotation(self)

    def __repr__(self) -> str:
        return f"RotationNumber({format_rotation(self)!r})"


def golden() -> RotationNumber:
    """(sqrt(5) - 1)/2 = [0; (1)]."""
    return RotationNumber.quadratic((), (1,))


def silver() -> RotationNumber:
    """sqrt(2) - 1 = [0; (2)]."""
    return RotationNumber.quadratic((), (2,))


def anti_golden() -> RotationNumber:
    """(3 - sqrt(5))/2 = [0; 2, (1)]."""
    return RotationNumber.quadratic((2,), (1,))


# -- text form ----------------------------------------------------------------

_CF_RE = re.compile(r"^\s*(1\s*-\s*)?\[\s*0\s*;\s*([0-9,\s]*?)\s*(?:\(([0-9,\s]+)\))?\s*\]\s*$")


def parse(text: str) -> RotationNumber:
    """Parse ``"p/q"``, ``"0"``, or ``"[0;a1,a2,(b1,...,bk)]"`` with optional ``"1-"`` prefix."""
    s = text.strip()
    if "[" not in s:
        try:
            return RotationNumber.rational(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rotation number {text!r}") from exc
    m = _CF_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse rotation number {text!r}")
    complement, head, tail = m.groups()

    def ints(chunk):
        return [int(t) for t in chunk.replace(" ", "").split(",") if t] if chunk else []

    pre, per = ints(head), ints(tail)
    if any(a < 1 for a in pre + per):
        raise ValueError(f"coefficients must be positive in {text!r}")
    if per:
        return RotationNumber.quadratic(pre, per, COMPLEMENT if complement else DIRECT)
    x = eval_finite_cf(pre)
    if complement:
        x = 1 - x
    if x == 1:
        raise ValueError(f"{text!r} denotes 1, which is outside [0, 1)")
    return RotationNumber.rational(x)


def format_rotation(theta: RotationNumber) -> str:
    if theta.is_rational:
        return str(theta.rational_value)  # "p/q", or "0"
    head = ",".join(str(a) for a in theta.preperiod)
    tail = "(" + ",".join(str(a) for a in theta.period) + ")"
    body = f"[0;{head + ',' if head else ''}{tail}]"
    return ("1-" if theta.side == COMPLEMENT else "") + body


# -- prime renormalization ----------------------------------------------------

def prime_renormalize(theta: RotationNumber) -> RotationNumber:
    """theta/(1-theta) on [0, 1/2], (2 theta - 1)/theta on [1/2, 1); 1/2 goes to 0.

    Rationals use exact fractions; quadratics go through exact surd arithmetic.
    """
    if theta.is_rational:
        n, d = theta.rational_value.numerator, theta.rational_value.denominator
        return RotationNumber.rational(*((n, d - n) if 2 * n < d else (2 * n - d, n)))
    x = theta.surd()
    y = x / (1 - x) if x < Fraction(1, 2) else (2 * x - 1) / x
    pre, per = quadratic.to_continued_fraction(y)
    return RotationNumber.quadratic(pre, per)


def cf_prime_step(theta: RotationNumber) -> RotationNumber:
    """The same map, computed as a rewrite of the stored continued fraction."""
    if theta.is_rational:
        coeffs = rational_cf(theta.rational_value)
        if not coeffs:
            return theta
        a1, rest = coeffs[0], coeffs[1:]
        if a1 > 1:
            y = eval_finite_cf([a1 - 1] + rest)
        else:
            y = 1 - eval_finite_cf(rest)
        return RotationNumber.rational(0 if y.numerator == y.denominator else y)
    a1, pre, per = _pop(theta.preperiod, theta.period)
    if a1 > 1:
        return RotationNumber.quadratic(*_push(a1 - 1, pre, per), theta.side)
    other = DIRECT if theta.side == COMPLEMENT else COMPLEMENT
    return RotationNumber.quadratic(pre, per, other)


@dataclass(frozen=True)
class OrbitSignature:
    kind: str  # "fixed" | "periodic" | "undetected"
    preperiod: int = 0
    period: int = 0
    steps: int = 0


def orbit_signature(theta: RotationNumber, max_steps: int = 10_000) -> OrbitSignature:
    """Classify the forward orbit under prime renormalization.

    ``fixed``: the orbit lands on 0 after ``preperiod`` steps.
    ``periodic``: first repeat found, with the given preperiod and period.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    zero = RotationNumber.rational(0)
    seen = {theta: 0}
    x = theta
    for i in range(1, max_steps + 1):
        if x == zero:
            return OrbitSignature("fixed", preperiod=i - 1, period=1, steps=i - 1)
        x = cf_prime_step(x)
        if x in seen:
            if x == zero:
                return OrbitSignature("fixed", preperiod=seen[x], period=1, steps=i)
            return OrbitSignature("periodic", preperiod=seen[x], period=i - seen[x], steps=i)
        seen[x] = i
    return OrbitSignature("undetected", steps=max_steps)


def is_periodic_type(theta: RotationNumber) -> bool:
    sig = orbit_signature(theta)
    return sig.kind == "periodic" and sig.preperiod == 0


def is_bounded_type(theta: RotationNumber, n: int) -> bool:
    """Membership in the set of angles whose direct or complement expansion has all coefficients <= n."""
    if theta.is_rational:
        raise ValueError("bounded type is only defined for irrationals here")
    if n < 1:
        raise ValueError("N must be >= 1")
    return any(max(pre + per) <= n for pre, per in (theta.direct_cf(), theta.complement_cf()))


# -- fast renormalization -----------------------------------------------------

def _min_side_head(theta: RotationNumber) -> tuple[int, bool]:
    """First coefficient of min(theta, 1-theta) and whether that side is exactly 1/m."""
    if theta.is_rational:
        x = theta.rational_value
        if x == 0:
            raise ValueError("theta = 0 has no fundamental sector")
        x = min(x, 1 - x)
        return math.floor(1 / x), x.numerator == 1
    a1 = _pop(*theta.direct_cf())[0]
    return (a1 if a1 >= 2 else _pop(*theta.complement_cf())[0]), False


def fast_step_count(theta: RotationNumber) -> int:
    """Number of prime steps making up the first return to the fundamental sector.

    With ``a`` the first coefficient of ``min(theta, 1 - theta)``: ``a - 1`` when
    ``min(theta, 1-theta) = 1/a`` (the branch with the shorter return time is
    degenerate), otherwise ``a``.  Checked against
    :func:`siegelren.circle.induced_rotation_number`.
    """
    head, unit = _min_side_head(theta)
    return head - 1 if unit else head


def fast_renormalize(theta: RotationNumber) -> RotationNumber:
    x = theta
    for _ in range(fast_step_count(theta)):
        x = cf_prime_step(x)
    return x


# -- return times, convergents, anti-renormalization words --------------------

@dataclass(frozen=True)
class ReturnTimes:
    a: int
    b: int
    q: int

    def __post_init__(self):
        if self.a + self.b != self.q or not (1 <= self.a < self.q and 1 <= self.b < self.q):
            raise ValueError(f"inconsistent return times {self}")


def _check_pq(p: int, q: int, q_min: int = 3):
    if q < q_min:
        raise ValueError(f"q must be >= {q_min}, got {q}")
    if not 1 <= p <= q - 1:
        raise ValueError(f"p must lie in 1..q-1, got {p}")
    if math.gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")


def return_times(p: int, q: int) -> ReturnTimes:
    """The pair with ``p*a = -1`` and ``p*b = 1`` (mod q)."""
    _check_pq(p, q)
    b = pow(p, -1, q)
    return ReturnTimes(a=q - b, b=b, q=q)


@dataclass(frozen=True)
class Convergent:
    n: int
    p: int
    q: int
    side: str  # "right": p/q < theta, "left": p/q > theta

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def convergents(theta: RotationNumber, q_max: int) -> list[Convergent]:
    """Convergents ``p_n/q_n`` with ``2 <= q_n <= q_max``.

    ``n`` counts from ``p_0/q_0 = 0/1``; even ``n`` lie below theta ("right",
    nearer the cusp along the cardioid), odd ``n`` above ("left").
    """
    if theta.is_rational:
        raise ValueError("convergents are listed for irrational rotation numbers only")
    out: list[Convergent] = []
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    it = _iter_coeffs(*theta.direct_cf())
    n = 0
    while True:
        a = next(it)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        n += 1
        if q > q_max:
            return out
        if q >= 2:
            out.append(Convergent(n, p, q, "left" if n % 2 else "right"))


P13 = "P13"
P23 = "P23"


def anti_prime_factorize(p: int, q: int) -> list[str]:
    """Prime anti-renormalization word of ``p/q``, outermost first, ending at the 1/3 or 2/3 base."""
    _check_pq(p, q)
    word = []
    x = Fraction(p, q)
    while True:
        word.append(P13 if 2 * x.numerator < x.denominator else P23)
        if x.denominator == 3:
            return word
        x = prime_renormalize(RotationNumber.rational(x)).rational_value
