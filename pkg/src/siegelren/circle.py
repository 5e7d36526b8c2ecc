"""Brute-force model of a rigid circle rotation.

Angles live in [0, 1).  Rational rotations use exact fractions, irrational
ones use the float value of the truncated continued fraction, which is good
for orbit lengths up to about 1e5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .rotnum import RotationNumber, convergents, return_times

MAX_DENOMINATOR = 100_000


def _angle(theta: RotationNumber):
    return theta.rational_value if theta.is_rational else float(theta)


def _frac(x):
    return x - math.floor(x)


@dataclass(frozen=True)
class Arc:
    """Half-open arc ``[start, start + length)`` taken mod 1."""

    start: float | Fraction
    length: float | Fraction

    def __post_init__(self):
        if not 0 < self.length < 1:
            raise ValueError(f"arc length {self.length} outside (0, 1)")

    def offset(self, x):
        return _frac(x - self.start)

    def __contains__(self, x) -> bool:
        return self.offset(x) < self.length

    @property
    def end(self):
        return _frac(self.start + self.length)


def rotation_orbit(theta: RotationNumber, n: int, x0=0):
    if n < 1:
        raise ValueError("n must be >= 1")
    t = _angle(theta)
    if theta.is_rational:
        x0 = Fraction(x0)
    return [_frac(x0 + k * t) for k in range(n)]


def fundamental_sector(theta: RotationNumber) -> Arc:
    """Arc between the base ray (angle 0) and its image, of length min(theta, 1 - theta)."""
    t = _angle(theta)
    if t == 0:
        raise ValueError("theta = 0 has no fundamental sector")
    if t <= Fraction(1, 2):
        return Arc(type(t)(0), t)
    return Arc(t, 1 - t)


def cell_sector(p: int, q: int) -> Arc:
    """Union of the two cells ``[-1/q, 0)`` and ``[0, 1/q)`` of the q-partition.

    Under rotation by p/q its first-return times are exactly the congruence
    return times: ``b`` on the left cell and ``a`` on the right cell.
    """
    return Arc(Fraction(q - 1, q), Fraction(2, q))


@dataclass(frozen=True)
class Branch:
    lo: float | Fraction  # offsets within the sector
    hi: float | Fraction
    time: int


@dataclass(frozen=True)
class FirstReturnData:
    sector: Arc
    times: tuple[int, int]  # (time on [start, cut), time on [cut, end))
    cut: float | Fraction
    order: tuple[int, ...]
    branches: tuple[Branch, ...]
    degenerate: bool = False

    @property
    def time_set(self) -> frozenset[int]:
        return frozenset(self.times)


def return_branches(theta: RotationNumber, sector: Arc, max_time: int | None = None) -> list[Branch]:
    """Partition the sector by first-return time (by scanning forward iterates)."""
    t = _angle(theta)
    L = sector.length
    if max_time is None:
        max_time = 4 * MAX_DENOMINATOR
    pending = [(type(L)(0), L)]
    found: list[Branch] = []
    k = 0
    while pending:
        k += 1
        if k > max_time:
            raise RuntimeError("points in the sector did not return")
        shift = _frac(k * t)
        # offsets u with frac(u + shift) < L: u in [1 - shift, 1 - shift + L) mod 1
        lo_ret = _frac(-shift)
        windows = [(lo_ret, lo_ret + L)]
        if lo_ret + L > 1:
            windows = [(lo_ret, 1), (0, lo_ret + L - 1)]
        still = []
        for a, b in pending:
            pieces = [(a, b)]
            for w0, w1 in windows:
                nxt = []
                for s0, s1 in pieces:
                    i0, i1 = max(s0, w0), min(s1, w1)
                    if i0 < i1:
                        found.append(Branch(i0, i1, k))
                        if s0 < i0:
                            nxt.append((s0, i0))
                        if i1 < s1:
                            nxt.append((i1, s1))
                    else:
                        nxt.append((s0, s1))
                pieces = nxt
            still.extend(pieces)
        pending = still
    found.sort(key=lambda br: br.lo)
    eps = 0 if isinstance(L, Fraction) else 1e-12
    # float rounding leaves slivers at window edges; fold them into their neighbours
    found = [br for br in found if br.hi - br.lo > eps]
    merged: list[Branch] = []
    for br in found:
        if merged and merged[-1].time == br.time and abs(merged[-1].hi - br.lo) <= eps:
            merged[-1] = Branch(merged[-1].lo, br.hi, br.time)
        else:
            merged.append(br)
    return merged


def first_return(theta: RotationNumber, sector: Arc | None = None) -> FirstReturnData:
    """First-return data of the rotation to ``sector`` (default: the fundamental sector).

    A single branch of time ``t`` means the other branch has collapsed; it is
    reported as a degenerate branch of time ``t - 1`` at the end of the sector.
    """
    if sector is None:
        sector = fundamental_sector(theta)
    branches = return_branches(theta, sector)
    if len(branches) > 2:
        raise ValueError(
            f"{len(branches)} return branches (times {[b.time for b in branches]}); "
            "sector is not fundamental"
        )
    if len(branches) == 1:
        (br,) = branches
        times = (br.time, br.time - 1)
        cut_offset, degenerate = sector.length, True
    else:
        times = (branches[0].time, branches[1].time)
        cut_offset, degenerate = branches[0].hi, False
    n = times[0] + times[1]
    orbit = rotation_orbit(theta, n, sector.start)
    order = tuple(int(i) for i in sorted(range(n), key=lambda k: orbit[k]))
    return FirstReturnData(
        sector=sector,
        times=times,
        cut=_frac(sector.start + cut_offset),
        order=order,
        branches=tuple(branches),
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class InducedRotation:
    """Interval ``[lo, hi)`` of rotation numbers consistent with the observed return orbit."""

    lo: Fraction
    hi: Fraction
    estimate: Fraction
    n: int
    conclusive: bool

    def contains(self, x: float, tol: float = 1e-12) -> bool:
        return float(self.lo) - tol <= x <= float(self.hi) + tol


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the closed interval ``[lo, hi]``."""
    fl = math.floor(lo)
    if fl == lo or fl + 1 <= hi:
        return Fraction(fl if fl == lo else fl + 1)
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def induced_rotation_number(theta: RotationNumber, q_probe: int = 200) -> InducedRotation:
    """Rotation number of the first return to the fundamental sector, read off combinatorially.

    The sector is glued into a circle by its own arclength (orientation kept),
    the base point ``start`` is followed under ``q_probe`` returns, and the
    number of wraps after each return bounds the rotation number.
    """
    sector = fundamental_sector(theta)
    t = _angle(theta)
    L = sector.length
    exact = theta.is_rational
    u = Fraction(0) if exact else 0.0  # offset of the current return point, in sector units of L
    x = sector.start
    wraps = 0
    lo, hi = Fraction(0), Fraction(1)
    for k in range(1, q_probe + 1):
        y = x
        for _ in range(4 * MAX_DENOMINATOR):
            y = _frac(y + t)
            if y in sector:
                break
        else:
            raise RuntimeError("no return to the fundamental sector")
        v = sector.offset(y) / L
        if v < u:
            wraps += 1
        u, x = v, y
        # floor(k * rho) == wraps when the orbit starts at offset 0
        lo = max(lo, Fraction(wraps, k))
        hi = min(hi, Fraction(wraps + 1, k))
    est = _simplest_between(lo, hi)
    conclusive = (hi - lo) * q_probe < 1
    return InducedRotation(lo=lo, hi=hi, estimate=est, n=q_probe, conclusive=conclusive)


@dataclass(frozen=True)
class TriangulationStats:
    q: int
    min_arc: float
    max_arc: float
    ratio: float
    distinct: int


def triangulation_stats(theta: RotationNumber, p: int | None, q: int, tol: float = 1e-9) -> TriangulationStats:
    """Extreme gaps between the orbit points ``k*theta`` for ``0 <= k < q``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if theta.is_rational:
        pts = sorted(_frac(k * theta.rational_value) for k in range(q))
        gaps = [pts[i + 1] - pts[i] for i in range(q - 1)] + [1 - pts[-1] + pts[0]]
        distinct = len(set(gaps))
        lo, hi = min(gaps), max(gaps)
        return TriangulationStats(q, float(lo), float(hi), float(hi / lo), distinct)
    t = float(theta)
    k = np.arange(q, dtype=np.float64)
    pts = np.sort(np.mod(k * t, 1.0))
    gaps = np.diff(np.append(pts, pts[0] + 1.0))
    lo, hi = float(gaps.min()), float(gaps.max())
    distinct = _count_distinct(gaps, tol)
    return TriangulationStats(q, lo, hi, hi / lo, distinct)


def _count_distinct(values: np.ndarray, tol: float) -> int:
    v = np.sort(values)
    return int(1 + np.count_nonzero(np.diff(v) > tol))


def convergent_triangulations(theta: RotationNumber, q_max: int = 10_000) -> list[TriangulationStats]:
    return [triangulation_stats(theta, c.p, c.q) for c in convergents(theta, q_max)]


@dataclass(frozen=True)
class GrowthRow:
    n: int
    a: int
    b: int
    q: int


def return_time_growth(theta: RotationNumber, n_max: int) -> list[GrowthRow]:
    """Congruence return times at the first ``n_max`` convergents with ``q_n >= 3``."""
    from .rotnum import is_periodic_type

    if theta.is_rational or not is_periodic_type(theta):
        raise ValueError("return-time growth needs a rotation number of periodic type")
    rows: list[GrowthRow] = []
    q_max = 1000
    while len(rows) < n_max:
        rows = [
            GrowthRow(c.n, *_ab(c.p, c.q), c.q)
            for c in convergents(theta, q_max)
            if c.q >= 3
        ][:n_max]
        q_max *= 100
    return rows


def _ab(p, q):
    rt = return_times(p, q)
    return rt.a, rt.b


def growth_exponents(rows: list[GrowthRow], lag: int = 2) -> tuple[float, float]:
    """Per-row growth exponents of a_n and b_n from the last ``lag`` rows."""
    if len(rows) <= lag:
        raise ValueError("not enough rows for the requested lag")
    first, last = rows[-1 - lag], rows[-1]
    span = last.n - first.n
    return (
        math.log(last.a / first.a) / span,
        math.log(last.b / first.b) / span,
    )
