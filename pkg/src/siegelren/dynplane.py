"""Dynamical-plane tools: Siegel critical orbits, Julia and Green renders, external rays,
and the cubic molecule model ``Q(z) = z (z + 1)^2``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import raster
from .rotnum import RotationNumber, convergents, is_bounded_type, orbit_signature

SIEGEL_BOUND = 2.0
MOLECULE_BAILOUT = 4.0
GREEN_ESCAPE = 1e10


class OrbitEscaped(Exception):
    code = "E_UNBOUNDED"


class NewtonDivergence(Exception):
    code = "E_NONCONVERGENCE"

    def __init__(self, message, last_good: complex | None = None, points=None):
        super().__init__(message)
        self.last_good = last_good
        self.points = points or []


# --- Siegel polynomial p(z) = lambda z + z^2 -------------------------------------------------

def siegel_multiplier(theta: RotationNumber) -> complex:
    return cmath.exp(2j * math.pi * float(theta))


def siegel_critical_point(theta: RotationNumber) -> complex:
    return -siegel_multiplier(theta) / 2


def siegel_critical_orbit(theta: RotationNumber, n: int) -> tuple[np.ndarray, bool]:
    """First ``n`` points of the critical orbit (starting with the critical point)
    and whether all of them satisfy ``|z| <= 2``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not theta.is_rational and not is_bounded_type(theta, 10**6):
        raise ValueError("theta must be of bounded type")
    lam = siegel_multiplier(theta)
    z = -lam / 2
    pts = np.empty(n, dtype=np.complex128)
    bounded = True
    for k in range(n):
        pts[k] = z
        if abs(z) > SIEGEL_BOUND:
            bounded = False
            pts = pts[:k + 1]
            break
        z = z * (lam + z)
    return pts, bounded


@dataclass
class ClosestReturnReport:
    theta: RotationNumber
    rows: list[tuple[int, float]]  # (q_n, |p^{q_n}(c) - c|)
    lag: int
    ratio_estimates: list[float] = field(default_factory=list)

    def csv(self) -> str:
        """``q,dist,ratio``; the ratio column holds ``dist_k / dist_{k-lag}`` (empty for the first rows)."""
        lines = ["q,dist,ratio"]
        for k, (q, d) in enumerate(self.rows):
            r = repr(self.rows[k][1] / self.rows[k - self.lag][1]) if k >= self.lag else ""
            lines.append(f"{q},{d!r},{r}")
        return "\n".join(lines) + "\n"

    def cauchy_spread(self, last: int = 3) -> float:
        """Largest relative deviation among the last ``last`` ratio estimates."""
        tail = self.ratio_estimates[-last:]
        if len(tail) < last:
            return math.inf
        ref = tail[-1]
        return max(abs(r / ref - 1) for r in tail)


def closest_returns(theta: RotationNumber, q_max: int) -> ClosestReturnReport:
    """Distances of the critical orbit from its start at the convergent denominators.

    Ratios are taken over ``lag`` convergents, the prime-renormalization period of theta.
    """
    sig = orbit_signature(theta)
    if sig.kind != "periodic" or sig.preperiod:
        raise ValueError("closest_returns needs a rotation number of periodic type")
    qs = [cv.q for cv in convergents(theta, q_max)]
    rows: list[tuple[int, float]] = []
    if qs:
        pts, bounded = siegel_critical_orbit(theta, qs[-1] + 1)
        if not bounded:
            raise OrbitEscaped(f"critical orbit left |z| <= 2 at step {len(pts) - 1}")
        c0 = pts[0]
        rows = [(q, float(abs(pts[q] - c0))) for q in qs]
    lag = sig.period
    ratios = [rows[k + lag][1] / rows[k][1] for k in range(len(rows) - lag)]
    return ClosestReturnReport(theta, rows, lag, ratios)


def record_return_times(theta: RotationNumber, n: int) -> list[int]:
    """Times ``k <= n`` at which ``|p^k(c) - c|`` reaches a new minimum."""
    pts, bounded = siegel_critical_orbit(theta, n + 1)
    if not bounded:
        raise OrbitEscaped("critical orbit is unbounded")
    d = np.abs(pts[1:] - pts[0])
    best, out = math.inf, []
    for k, v in enumerate(d, start=1):
        if v < best:
            best = v
            out.append(k)
    return out


# --- quadratic Julia sets -----------------------------------------------------------------

def _quad_step(z, c):
    return z * z + c


def julia_counts(z: np.ndarray, c: complex, max_iter: int) -> np.ndarray:
    return raster.escape_counts(z, c, _quad_step, 2.0, max_iter)


def julia_render(c: complex, window: raster.Window, resolution: tuple[int, int], max_iter: int,
                 threads: int | None = 1) -> raster.RasterImage:
    w, h = resolution
    counts = raster.render_rows(window, w, h, lambda g: julia_counts(g, c, max_iter), threads)
    return raster.RasterImage(w, h, raster.gray_ramp(counts, max_iter), window, counts)


def green_potential(c: complex, z: complex, n_terms: int = 64) -> float:
    """``lim 2^-k log|f_c^k(z)|``, truncated once ``|z| > 1e10``; 0 if no escape within ``n_terms``."""
    if n_terms < 8:
        raise ValueError("n_terms must be >= 8")
    z = complex(z)
    for k in range(n_terms + 1):
        if abs(z) > GREEN_ESCAPE:
            return math.log(abs(z)) / 2.0**k
        z = z * z + c
    return 0.0


def green_render(c: complex, window: raster.Window, resolution: tuple[int, int], n_terms: int = 64,
                 bands: int = 16) -> raster.RasterImage:
    """Equipotential bands: gray level from ``floor(log2 G)``, interior black."""
    w, h = resolution
    grid = window.grid(w, h)
    g = np.vectorize(lambda z: green_potential(c, z, n_terms))(grid)
    out = np.zeros(g.shape, dtype=np.uint8)
    esc = g > 0
    level = np.floor(np.log2(g[esc]))
    out[esc] = np.where(level.astype(np.int64) % 2 == 0, 230, 140).astype(np.uint8)
    return raster.RasterImage(w, h, out, window)


# --- external rays ------------------------------------------------------------------------

@dataclass
class RayTrace:
    c: complex
    angle: Fraction
    points: list[complex]
    potentials: list[float]

    def endpoint(self) -> complex:
        return self.points[-1]


def _iterate_with_derivative(z: complex, c: complex, n: int) -> tuple[complex, complex]:
    dz = 1 + 0j
    for _ in range(n):
        dz = 2 * z * dz
        z = z * z + c
    return z, dz


def _ray_newton(z: complex, c: complex, n: int, target: complex, max_steps: int) -> complex:
    w, dw = _iterate_with_derivative(z, c, n)
    res = abs(w - target)
    # relative rounding in n squarings grows like 2^n ulps
    tol = max(1e-13, 2.0**n * 1e-15) * abs(target)
    for _ in range(max_steps):
        if res <= tol or dw == 0:
            break
        step = (w - target) / dw
        for _ in range(30):
            trial = z - step
            w2, dw2 = _iterate_with_derivative(trial, c, n)
            r2 = abs(w2 - target)
            if math.isfinite(r2) and r2 < res:
                break
            step /= 2
        else:
            if res <= 1e-6 * abs(target):
                break  # at the rounding floor
            raise NewtonDivergence("damped Newton step failed to reduce the residual", last_good=z)
        z, w, dw, res = trial, w2, dw2, r2
    return z


def external_ray_trace(c: complex, angle, depth: int = 20, steps_per_level: int = 8,
                       radius: float = 1e3, newton_steps: int = 12) -> RayTrace:
    """Trace the external ray of ``angle`` from potential ``log(radius)`` through ``depth`` halvings.

    The point at potential ``G`` solves ``f_c^n(z) = exp(2^n (G + 2 pi i angle))`` with ``n``
    the current level plus one, which keeps the target outside radius ``radius``
    where the Boettcher map is close to the identity.
    """
    angle = Fraction(angle) % 1
    g0 = math.log(radius)
    z = cmath.exp(g0 + 2j * math.pi * float(angle))
    pts, pots = [z], [g0]
    for m in range(depth):
        n = m + 1
        turn = float((angle * 2**n) % 1)
        for j in range(1, steps_per_level + 1):
            g = g0 * 2.0 ** -(m + j / steps_per_level)
            target = cmath.exp(2.0**n * g + 2j * math.pi * turn)
            try:
                z = _ray_newton(z, c, n, target, newton_steps)
            except NewtonDivergence as exc:
                raise NewtonDivergence(str(exc), last_good=pts[-1], points=pts) from None
            pts.append(z)
            pots.append(g)
    return RayTrace(c, angle, pts, pots)


def doubling_period(angle: Fraction) -> int | None:
    """Period of ``angle`` under ``t -> 2t mod 1``, None if not periodic."""
    angle = Fraction(angle) % 1
    if angle.denominator % 2 == 0:
        return None
    t = (2 * angle) % 1
    k = 1
    while t != angle:
        t = (2 * t) % 1
        k += 1
    return k


def ray_landing_point(c: complex, angle, trace: RayTrace | None = None, pullbacks: int = 1_000_000) -> complex:
    """Continue a periodic ray toward its landing point by pulling back its endpoint.

    Near a parabolic point the ray converges only like ``1/sqrt(level)``; each pullback
    by the inverse branch of ``f_c^k`` (k the ray period) fixing the ray is equivalent to
    ``k`` further halvings of the potential.
    """
    angle = Fraction(angle) % 1
    k = doubling_period(angle)
    if k is None:
        raise ValueError("landing by pullback needs a periodic angle")
    if trace is None:
        trace = external_ray_trace(c, angle, depth=max(k, 12))
    # chain[i] lies on the ray of angle 2^i * angle; f maps chain[0] one level out onto ray 2^k angle = angle
    chain = [trace.endpoint()]
    for _ in range(k - 1):
        chain.append(chain[-1] ** 2 + c)
    for _ in range(pullbacks):
        w = chain[0]
        for i in range(k - 1, -1, -1):
            r = cmath.sqrt(w - c)
            w = r if abs(r - chain[i]) <= abs(r + chain[i]) else -r
            chain[i] = w
    return chain[0]


# --- cubic molecule model -----------------------------------------------------------------

def molecule_map(z):
    return z * (z + 1) ** 2


def molecule_derivative(z):
    return (z + 1) * (3 * z + 1)


def _molecule_step(z, c):
    return z * (z + 1) ** 2


def molecule_render(window: raster.Window, resolution: tuple[int, int], max_iter: int,
                    threads: int | None = 1) -> raster.RasterImage:
    w, h = resolution
    counts = raster.render_rows(
        window, w, h,
        lambda g: raster.escape_counts(g, 0, _molecule_step, MOLECULE_BAILOUT, max_iter),
        threads,
    )
    return raster.RasterImage(w, h, raster.gray_ramp(counts, max_iter), window, counts)


@dataclass
class MoleculeReport:
    checks: dict[str, bool]
    steps_to_parabolic: int | None  # iterations for the orbit of -1/3 to come within 1e-2 of 0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        return [f"{name}: {'ok' if good else 'FAILED'}" for name, good in self.checks.items()]


def molecule_model_checks(max_steps: int = 10_000, radius: float = 1e-2) -> MoleculeReport:
    """Exact checks on ``Q`` plus the parabolic convergence of the free critical orbit."""
    one = Fraction(1)
    crit = {Fraction(-1), Fraction(-1, 3)}
    checks = {
        "Q(-1) = 0": molecule_map(-one) == 0,
        "Q'(0) = 1": molecule_derivative(Fraction(0)) == 1,
        "critical points are -1 and -1/3": all(molecule_derivative(x) == 0 for x in crit),
        # Q' is quadratic with leading coefficient 3, so two roots exhaust it
        "Q' = 3 z^2 + 4 z + 1": all(molecule_derivative(Fraction(x)) == 3 * x * x + 4 * x + 1 for x in range(-3, 4)),
    }
    z, steps = -1 / 3, None
    for k in range(1, max_steps + 1):
        z = molecule_map(z)
        if abs(z) < radius:
            steps = k
            break
    checks["orbit of -1/3 reaches |z| < 1e-2"] = steps is not None
    return MoleculeReport(checks, steps)
