"""Parameter-plane numerics for the quadratic family ``f_c(z) = z^2 + c``.

Centers are found by Newton's method on ``c -> f_c^q(0)``, evaluated by
iterating the critical orbit together with its c-derivative.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import ndimage

from . import raster
from .rotnum import RotationNumber, convergents, is_periodic_type, prime_renormalize

STANDARD = "standard"
EXTENDED = "extended"

RESIDUAL_TOL = 1e-13
DIVISOR_TOL = 1e-6
MAX_NEWTON = 200


class SolverError(Exception):
    code = "E_SOLVER"


class NonConvergence(SolverError):
    code = "E_NONCONVERGENCE"


class WrongPeriod(SolverError):
    code = "E_WRONG_PERIOD"

    def __init__(self, message, divisor=None):
        super().__init__(message)
        self.divisor = divisor


@dataclass(frozen=True)
class ParamPoint:
    c: complex
    role: str = "generic"  # cardioid | root | center | generic
    p: int | None = None
    q: int | None = None
    theta: RotationNumber | None = None
    precision: str = STANDARD
    residual: float = 0.0


def _e(t) -> complex:
    return cmath.exp(2j * math.pi * float(t))


def _cardioid(t) -> complex:
    lam = _e(t)
    return lam / 2 - lam * lam / 4


def cardioid_point(theta) -> ParamPoint:
    """The parameter whose fixed point has multiplier ``exp(2 pi i theta)``."""
    if isinstance(theta, RotationNumber):
        return ParamPoint(_cardioid(theta), "cardioid", theta=theta)
    return ParamPoint(_cardioid(theta), "cardioid", theta=RotationNumber.rational(Fraction(theta)))


def _check_coprime(p, q):
    if q < 2 or not 1 <= p < q or math.gcd(p, q) != 1:
        raise ValueError(f"need coprime 1 <= p < q with q >= 2, got {p}/{q}")


def satellite_root(p: int, q: int) -> ParamPoint:
    _check_coprime(p, q)
    return ParamPoint(_cardioid(Fraction(p, q)), "root", p, q)


def cardioid_normal(t) -> complex:
    """Unit outward normal of the main cardioid at ``c(t)``."""
    lam = _e(t)
    n = lam * (1 - lam)
    return n / abs(n)


def critical_orbit(c: complex, n: int) -> tuple[complex, complex]:
    """``(f_c^n(0), d/dc f_c^n(0))``."""
    z = dz = 0j
    for _ in range(n):
        dz = 2 * z * dz + 1
        z = z * z + c
    return z, dz


def _proper_divisors(q: int) -> list[int]:
    return [d for d in range(1, q) if q % d == 0]


def period_violation(c: complex, q: int, tol: float = DIVISOR_TOL) -> int | None:
    """A proper divisor ``d`` of q with ``f_c^d(0)`` vanishing (relative tol), else None."""
    scale = max(1.0, abs(c))
    z = 0j
    divisors = set(_proper_divisors(q))
    for k in range(1, q):
        z = z * z + c
        if k in divisors and abs(z) < tol * scale:
            return k
    return None


def cycle_rotation_number(c: complex, q: int) -> Fraction | None:
    """Combinatorial rotation number of the critical q-cycle around the alpha fixed point.

    Sorting the cycle points by argument about alpha, ``f_c`` acts as a shift
    by ``p`` positions; returns ``p/q`` or None when the cyclic order is not a rotation.
    """
    s = cmath.sqrt(1 - 4 * c)
    alpha = (1 - s) / 2  # principal root: the fixed point continued from the main cardioid
    pts = []
    z = 0j
    for _ in range(q):
        pts.append(z)
        z = z * z + c
    angles = [cmath.phase(w - alpha) % (2 * math.pi) for w in pts]
    order = sorted(range(q), key=lambda k: angles[k])
    pos = {k: i for i, k in enumerate(order)}
    shift = (pos[1 % q] - pos[0]) % q
    if any((pos[(k + 1) % q] - pos[k]) % q != shift for k in range(q)):
        return None
    return Fraction(shift, q)


def _newton_center(c0: complex, q: int, max_iter: int = MAX_NEWTON) -> tuple[complex, float]:
    c = complex(c0)
    for _ in range(max_iter):
        z, dz = critical_orbit(c, q)
        if dz == 0 or not math.isfinite(abs(z)):
            break
        step = z / dz
        c -= step
        if abs(step) <= 4e-16 * max(1.0, abs(c)):
            break
    else:
        z, _ = critical_orbit(c, q)
        raise NonConvergence(f"Newton did not settle for period {q} from seed {c0}")
    res = abs(critical_orbit(c, q)[0])
    return c, res


def _newton_center_extended(c0: complex, q: int, dps: int = 32) -> tuple[complex, float]:
    import mpmath

    with mpmath.workdps(dps):
        c = mpmath.mpc(c0)
        for _ in range(MAX_NEWTON):
            z = dz = mpmath.mpc(0)
            for _ in range(q):
                dz = 2 * z * dz + 1
                z = z * z + c
            step = z / dz
            c -= step
            if abs(step) < mpmath.mpf(10) ** (-dps + 4):
                break
        else:
            raise NonConvergence(f"extended Newton did not settle for period {q}")
        return complex(c), float(abs(z))


def _accept_center(c: complex, res: float, q: int, p: int | None = None) -> None:
    # residual floor grows with q in binary64; 1e-13 is met for q up to a few hundred
    if not math.isfinite(res) or res > max(RESIDUAL_TOL, 1e-9 if q > 200 else RESIDUAL_TOL):
        raise NonConvergence(f"residual {res:.3g} too large for period {q}")
    d = period_violation(c, q)
    if d is not None:
        raise WrongPeriod(f"f_c^{d}(0) vanishes at {c}: period divides {d}", divisor=d)
    if p is not None and cycle_rotation_number(c, q) != Fraction(p, q):
        raise WrongPeriod(f"center {c} does not carry rotation number {p}/{q}")


def root_offset_seed(p: int, q: int) -> complex:
    """Root plus the outward normal scaled by ``sin(pi p/q)/q^2``, the typical root-to-center distance."""
    t = Fraction(p, q)
    return _cardioid(t) + math.sin(math.pi * p / q) / q**2 * cardioid_normal(t)


def satellite_center(p: int, q: int, seed: complex | None = None, precision: str = STANDARD) -> ParamPoint:
    """Center of the satellite component attached at ``c(p/q)``."""
    _check_coprime(p, q)
    seeds = [seed] if seed is not None else []
    seeds += [root_offset_seed(p, q)]
    t = Fraction(p, q)
    seeds += [_cardioid(t) + k / q**2 * cardioid_normal(t) for k in (0.5, 2.0, 4.0)]
    last: SolverError | None = None
    for s in seeds:
        try:
            if precision == EXTENDED:
                c, res = _newton_center_extended(s, q)
            else:
                c, res = _newton_center(s, q)
            _accept_center(c, res, q, p)
            return ParamPoint(c, "center", p, q, precision=precision, residual=res)
        except SolverError as exc:
            last = exc
    assert last is not None
    raise last


def center_bruteforce(p: int, q: int, step: float = 1e-3) -> ParamPoint:
    """Grid search for zeros of ``f_c^q(0)`` near the root, polished by Newton.

    Every local minimum of ``|f_c^q(0)|`` below 0.1 in the disk of radius 8/q^2
    is polished; among exact-period-q zeros whose cycle turns by p/q about
    alpha, the one nearest the root is returned.
    """
    _check_coprime(p, q)
    if q > 12:
        raise ValueError("brute force is limited to q <= 12")
    root = _cardioid(Fraction(p, q))
    radius = 8 / q**2
    n = int(math.ceil(2 * radius / step)) + 1
    xs = root.real - radius + step * np.arange(n)
    ys = root.imag - radius + step * np.arange(n)
    mag = np.empty((n, n))
    for i0 in range(0, n, 256):
        c = xs[np.newaxis, :] + 1j * ys[i0:i0 + 256, np.newaxis]
        z = np.zeros_like(c)
        for _ in range(q):
            z = z * z + c
        block = np.abs(z)
        block[np.abs(c - root) > radius] = np.inf
        mag[i0:i0 + 256] = np.where(np.isfinite(block), block, np.inf)
    if not (mag < 0.1).any():
        raise SolverError(f"no grid point with |f_c^{q}(0)| < 0.1 near c({p}/{q})")
    minima = (mag == ndimage.minimum_filter(mag, size=3, mode="nearest")) & (mag < 0.1)
    found = []
    for i, j in zip(*np.nonzero(minima)):
        try:
            c, res = _newton_center(complex(xs[j], ys[i]), q)
            _accept_center(c, res, q, p)
        except SolverError:
            continue
        found.append(c)
    if not found:
        raise WrongPeriod(f"no exact-period {q} zero with rotation {p}/{q} near the root")
    best = min(found, key=lambda c: abs(c - root))
    return ParamPoint(best, "center", p, q, residual=abs(critical_orbit(best, q)[0]))


def multiplier_of_cycle(c: complex, q: int, z_seed: complex, max_iter: int = MAX_NEWTON) -> complex:
    """Multiplier of the period-q cycle found by Newton on ``f_c^q(z) - z`` from ``z_seed``."""
    z = complex(z_seed)
    for _ in range(max_iter):
        w, dw = z, 1 + 0j
        for _ in range(q):
            dw = 2 * w * dw
            w = w * w + c
        g, dg = w - z, dw - 1
        if g == 0:
            break
        if dg == 0:
            raise NonConvergence("flat Newton step in multiplier_of_cycle")
        step = g / dg
        z -= step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    else:
        raise NonConvergence(f"no period-{q} point found from {z_seed}")
    mult, w = 1 + 0j, z
    for _ in range(q):
        mult *= 2 * w
        w = w * w + c
    return mult


def fixed_point_multiplier(c: complex) -> complex:
    """Multiplier of the non-repelling (smaller-multiplier) fixed point."""
    s = cmath.sqrt(1 - 4 * c)
    return min(1 - s, 1 + s, key=abs)


@dataclass
class ScalingRow:
    n: int
    p: int
    q: int
    side: str
    a: complex | None
    d: float | None
    s: float | None
    seed_kind: str = ""
    error: str | None = None


def _extrapolated_seed(c_theta: complex, history: list[complex]) -> complex | None:
    if len(history) < 2:
        return None
    r = (history[-1] - c_theta) / (history[-2] - c_theta)
    return c_theta + (history[-1] - c_theta) * r


def _side_chain(theta_c: complex, rows: list, precision: str) -> list[ScalingRow]:
    out, history = [], []
    for cv in rows:
        seed = _extrapolated_seed(theta_c, history)
        kind = "extrapolated" if seed is not None else "root-offset"
        try:
            pt = satellite_center(cv.p, cv.q, seed=seed, precision=precision)
        except SolverError as exc:
            out.append(ScalingRow(cv.n, cv.p, cv.q, cv.side, None, None, None, kind, f"{exc.code}: {exc}"))
            continue
        d = abs(theta_c - pt.c)
        history.append(pt.c)
        out.append(ScalingRow(cv.n, cv.p, cv.q, cv.side, pt.c, d, cv.q**2 * d, kind))
    return out


def scaling_table(theta: RotationNumber, q_max: int, threads: int = 1, precision: str = STANDARD) -> list[ScalingRow]:
    """Distances from ``c(theta)`` to the centers at the convergents, scaled by ``q_n^2``.

    The two sides of approach are solved as independent chains (each seeds
    from its own earlier centers), so the result does not depend on ``threads``.
    """
    if theta.is_rational or not is_periodic_type(theta):
        raise ValueError("scaling_table needs a rotation number of periodic type")
    c_theta = _cardioid(float(theta))
    convs = convergents(theta, q_max)
    chains = [[cv for cv in convs if cv.side == s] for s in ("left", "right")]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            parts = list(pool.map(lambda ch: _side_chain(c_theta, ch, precision), chains))
    else:
        parts = [_side_chain(c_theta, ch, precision) for ch in chains]
    return sorted(parts[0] + parts[1], key=lambda r: r.q)


def same_side_ratios(rows: list[ScalingRow], side: str) -> list[float]:
    vals = [r.s for r in rows if r.side == side and r.s is not None]
    return [b / a for a, b in zip(vals, vals[1:])]


def scaling_csv(rows: list[ScalingRow]) -> str:
    lines = ["n,p,q,side,re_a,im_a,d,s"]
    for r in rows:
        if r.error:
            continue
        lines.append(f"{r.n},{r.p},{r.q},{r.side},{r.a.real!r},{r.a.imag!r},{r.d!r},{r.s!r}")
    return "\n".join(lines) + "\n"


def molecule_boundary_step(theta: RotationNumber) -> tuple[RotationNumber, ParamPoint, ParamPoint]:
    """The molecule map restricted to the cardioid: acts on theta by prime renormalization."""
    theta2 = prime_renormalize(theta)
    return theta2, cardioid_point(theta), cardioid_point(theta2)


def _mandel_step(z, c):
    return z * z + c


def mandelbrot_counts(c: np.ndarray, max_iter: int) -> np.ndarray:
    return raster.escape_counts(np.zeros_like(c), c, _mandel_step, 2.0, max_iter)


def mandelbrot_render(window: raster.Window, resolution: tuple[int, int], max_iter: int, threads: int | None = 1) -> raster.RasterImage:
    w, h = resolution
    counts = raster.render_rows(window, w, h, lambda grid: mandelbrot_counts(grid, max_iter), threads)
    return raster.RasterImage(w, h, raster.gray_ramp(counts, max_iter), window, counts)
