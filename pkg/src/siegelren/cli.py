"""Command-line front end.

Exit codes: 0 success, 1 domain error (one ``E_...`` line on stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import circle, combinat, dynplane, paramplane, raster, rotnum

SUBCOMMANDS = ("renorm", "seq", "scale", "centers", "circle-stats", "julia", "mandel", "siegel", "molecule", "rays")


class DomainError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    theta: str | None = None
    q_max: int | None = None
    max_iter: int = 200
    resolution: tuple[int, int] = (512, 512)
    window: raster.Window | None = None
    out_path: Path | None = None
    format: str = "text"
    threads: int | None = None
    options: dict = field(default_factory=dict)


# -- argument types ------------------------------------------------------------

def _theta(text: str) -> str:
    try:
        rotnum.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _window(text: str) -> raster.Window:
    try:
        return raster.Window.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected cx,cy,w with w > 0: {exc}") from None


def _resolution(text: str) -> tuple[int, int]:
    try:
        w, h = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected WxH, e.g. 512x512") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("resolution must be at least 1x1")
    return w, h


def _complex(text: str) -> complex:
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected re,im") from None
    return complex(x, y)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _angles(text: str) -> list[Fraction]:
    try:
        out = [Fraction(t) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("expected comma-separated fractions, e.g. 1/3,2/3") from None
    if any(not 0 <= a < 1 for a in out):
        raise argparse.ArgumentTypeError("angles must lie in [0, 1)")
    return out


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="siegelren", description="Renormalization combinatorics and satellite scaling experiments.")
    sub = top.add_subparsers(dest="subcommand", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def threads(p):
        p.add_argument("--threads", type=_positive, default=None, help="worker cap (default: available cores); output does not depend on it")

    def out(p, required=False, what="output file"):
        p.add_argument("--out", type=Path, required=required, help=what + (" (default: stdout)" if not required else ""))

    def image(p, window, maxiter):
        p.add_argument("--window", type=_window, default=raster.Window.parse(window), help=f"view as cx,cy,w (default {window})")
        p.add_argument("--res", type=_resolution, default=(512, 512), help="resolution WxH (default 512x512)")
        p.add_argument("--maxiter", type=_positive, default=maxiter, help=f"iteration budget (default {maxiter})")
        out(p, required=True, what="PPM (P6) file to write")
        threads(p)

    p = sub.add_parser("renorm", help="iterate prime renormalization")
    p.add_argument("--theta", type=_theta, required=True, help="rotation number: p/q or [0;a1,...,(b1,...)] with optional 1- prefix")
    p.add_argument("--steps", type=_positive, required=True, help="orbit length, including theta itself")
    p.add_argument("--fast", action="store_true", help="iterate fast renormalization instead")

    p = sub.add_parser("seq", help="the A/B word and return times of p/q")
    p.add_argument("p", type=int, help="numerator")
    p.add_argument("q", type=int, help="denominator, coprime to p, q >= 3")
    p.add_argument("--jumps", type=int, default=0, metavar="J", help="also print the jump table for j = -J..J")

    p = sub.add_parser("scale", help="satellite scaling table along the convergents of theta (CSV)")
    p.add_argument("--theta", type=_theta, required=True, help="periodic-type rotation number")
    p.add_argument("--qmax", type=_positive, required=True, help="largest convergent denominator")
    p.add_argument("--extended", action="store_true", help="solve centers in extended precision (slower)")
    out(p, what="CSV file")
    threads(p)

    p = sub.add_parser("centers", help="satellite centers for all p/q with q <= qmax (CSV)")
    p.add_argument("--qmax", type=_positive, required=True, help="largest denominator")
    p.add_argument("--bruteforce", action="store_true", help="also run the grid oracle (q <= 12) and report the difference")
    out(p, what="CSV file")
    threads(p)

    p = sub.add_parser("circle-stats", help="first-return, induced rotation and triangulation data for theta")
    p.add_argument("--theta", type=_theta, required=True, help="rotation number")
    p.add_argument("--qmax", type=_positive, default=10_000, help="largest convergent denominator for the triangulation table (default 10000)")
    p.add_argument("--probe", type=_positive, default=200, help="returns followed for the induced rotation number (default 200)")

    p = sub.add_parser("julia", help="escape-time image of the filled Julia set of z^2 + c")
    p.add_argument("--c", type=_complex, required=True, help="parameter as re,im")
    image(p, "0,0,4", 200)

    p = sub.add_parser("mandel", help="escape-time image of the Mandelbrot set")
    image(p, "-0.5,0,3", 200)

    p = sub.add_parser("siegel", help="closest returns of the critical orbit of e(theta) z + z^2 (CSV)")
    p.add_argument("--theta", type=_theta, required=True, help="periodic-type rotation number")
    p.add_argument("--qmax", type=_positive, required=True, help="largest convergent denominator")
    p.add_argument("--orbit", type=int, default=0, metavar="N", help="also check boundedness over N iterates")
    out(p, what="CSV file")
    p.add_argument("--threads", type=_positive, default=None, help="accepted for a uniform interface; the orbit is sequential")

    p = sub.add_parser("molecule", help="escape-time image of the filled Julia set of z (z + 1)^2")
    p.add_argument("--checks", action="store_true", help="print the exact model checks before rendering")
    image(p, "-0.4,0,3.2", 200)

    p = sub.add_parser("rays", help="external rays of z^2 + c drawn over its Julia set")
    p.add_argument("--c", type=_complex, required=True, help="parameter as re,im")
    p.add_argument("--angles", type=_angles, required=True, help="comma-separated angles in [0,1), e.g. 1/3,2/3")
    p.add_argument("--depth", type=_positive, default=20, help="number of potential halvings (default 20)")
    p.add_argument("--steps", type=_positive, default=8, help="sub-steps per halving (default 8)")
    p.add_argument("--csv", type=Path, default=None, help="also write the ray polylines as CSV angle,k,re,im")
    image(p, "0,0,4", 200)
    return top


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items()
            if k not in {"subcommand", "theta", "qmax", "maxiter", "res", "window", "out", "threads"}}
    fmt = {"julia": "ppm", "mandel": "ppm", "molecule": "ppm", "rays": "ppm",
           "scale": "csv", "centers": "csv", "siegel": "csv"}.get(ns.subcommand, "text")
    return RunConfig(
        subcommand=ns.subcommand,
        theta=getattr(ns, "theta", None),
        q_max=getattr(ns, "qmax", None),
        max_iter=getattr(ns, "maxiter", 200),
        resolution=getattr(ns, "res", (512, 512)),
        window=getattr(ns, "window", None),
        out_path=getattr(ns, "out", None),
        format=fmt,
        threads=getattr(ns, "threads", None),
        options=opts,
    )


# -- subcommands ---------------------------------------------------------------

def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        cfg.out_path.write_text(text)


def _renorm(cfg):
    theta = rotnum.parse(cfg.theta)
    step = rotnum.fast_renormalize if cfg.options["fast"] else rotnum.prime_renormalize
    orbit = [theta]
    for _ in range(cfg.options["steps"] - 1):
        orbit.append(step(orbit[-1]))
    print(" ".join(rotnum.format_rotation(t) for t in orbit))


def _seq(cfg):
    p, q = cfg.options["p"], cfg.options["q"]
    word = combinat.build_seq(p, q)
    rt = rotnum.return_times(p, q)
    print(word)
    print(f"(a,b)=({rt.a},{rt.b})")
    j = cfg.options["jumps"]
    if j:
        print("j,pair,iota,nu,mu,kappa")
        for r in combinat.jump_table(word, range(-j, j + 1)):
            print(f"{r['j']},{r['pair']},{r['iota']},{r['nu']},{r['mu']},{r['kappa']}")


def _scale(cfg):
    theta = rotnum.parse(cfg.theta)
    precision = paramplane.EXTENDED if cfg.options["extended"] else paramplane.STANDARD
    rows = paramplane.scaling_table(theta, cfg.q_max, threads=cfg.threads or raster.default_threads(), precision=precision)
    for r in rows:
        if r.error:
            print(f"row {r.p}/{r.q}: {r.error}", file=sys.stderr)
    _emit(cfg, paramplane.scaling_csv(rows))


def _center_line(pq, oracle):
    p, q = pq
    pt = paramplane.satellite_center(p, q)
    line = f"{p},{q},{pt.c.real!r},{pt.c.imag!r},{pt.residual!r}"
    if oracle:
        line += f",{abs(paramplane.center_bruteforce(p, q).c - pt.c)!r}"
    return line


def _centers(cfg):
    oracle = cfg.options["bruteforce"]
    if oracle and cfg.q_max > 12:
        raise DomainError("E_DOMAIN", "the grid oracle is limited to q <= 12")
    pairs = [(p, q) for q in range(2, cfg.q_max + 1) for p in range(1, q) if math.gcd(p, q) == 1]
    with ThreadPoolExecutor(cfg.threads or raster.default_threads()) as pool:
        body = list(pool.map(lambda pq: _center_line(pq, oracle), pairs))
    header = "p,q,re_c,im_c,residual" + (",oracle_diff" if oracle else "")
    _emit(cfg, "\n".join([header] + body) + "\n")


def _circle_stats(cfg):
    theta = rotnum.parse(cfg.theta)
    print(f"theta {rotnum.format_rotation(theta)} = {float(theta)!r}")
    fr = circle.first_return(theta)
    print(f"fundamental sector start={float(fr.sector.start)!r} length={float(fr.sector.length)!r}")
    print(f"first-return times {fr.times[0]} {fr.times[1]}" + (" (degenerate)" if fr.degenerate else ""))
    ind = circle.induced_rotation_number(theta, cfg.options["probe"])
    print(f"induced rotation in [{ind.lo}, {ind.hi}) estimate {ind.estimate}")
    if not (theta.is_rational and theta.rational_value == 0):
        print(f"fast renormalization {rotnum.format_rotation(rotnum.fast_renormalize(theta))} after {rotnum.fast_step_count(theta)} prime steps")
    if not theta.is_rational:
        print("q,min_arc,max_arc,ratio,distinct")
        for s in circle.convergent_triangulations(theta, cfg.q_max):
            print(f"{s.q},{s.min_arc!r},{s.max_arc!r},{s.ratio!r},{s.distinct}")


def _image_done(cfg, img: raster.RasterImage):
    img.write_ppm(cfg.out_path)


def _julia(cfg):
    _image_done(cfg, dynplane.julia_render(cfg.options["c"], cfg.window, cfg.resolution, cfg.max_iter, cfg.threads))


def _mandel(cfg):
    _image_done(cfg, paramplane.mandelbrot_render(cfg.window, cfg.resolution, cfg.max_iter, cfg.threads))


def _siegel(cfg):
    theta = rotnum.parse(cfg.theta)
    if cfg.options["orbit"] > 0:
        _, bounded = dynplane.siegel_critical_orbit(theta, cfg.options["orbit"])
        if not bounded:
            raise dynplane.OrbitEscaped("critical orbit left |z| <= 2")
        print(f"bounded over {cfg.options['orbit']} iterates", file=sys.stderr)
    _emit(cfg, dynplane.closest_returns(theta, cfg.q_max).csv())


def _molecule(cfg):
    if cfg.options["checks"]:
        rep = dynplane.molecule_model_checks()
        print("\n".join(rep.lines()))
        if not rep.ok:
            raise DomainError("E_MODEL", "molecule model check failed")
    _image_done(cfg, dynplane.molecule_render(cfg.window, cfg.resolution, cfg.max_iter, cfg.threads))


def _rays(cfg):
    c = cfg.options["c"]
    img = dynplane.julia_render(c, cfg.window, cfg.resolution, cfg.max_iter, cfg.threads)
    pixels = img.rgb().copy()
    w, h = cfg.resolution
    rows = ["angle,k,re,im"]
    for a in cfg.options["angles"]:
        tr = dynplane.external_ray_trace(c, a, cfg.options["depth"], cfg.options["steps"])
        for k, z in enumerate(tr.points):
            rows.append(f"{a},{k},{z.real!r},{z.imag!r}")
            r, col = cfg.window.pixel_of(z, w, h)
            if 0 <= r < h and 0 <= col < w:
                pixels[r, col] = (255, 0, 0)
    _image_done(cfg, raster.RasterImage(w, h, pixels, cfg.window))
    if cfg.options["csv"] is not None:
        cfg.options["csv"].write_text("\n".join(rows) + "\n")


_DISPATCH = {
    "renorm": _renorm, "seq": _seq, "scale": _scale, "centers": _centers, "circle-stats": _circle_stats,
    "julia": _julia, "mandel": _mandel, "siegel": _siegel, "molecule": _molecule, "rays": _rays,
}


def run(cfg: RunConfig) -> int:
    try:
        _DISPATCH[cfg.subcommand](cfg)
    except DomainError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except (paramplane.SolverError, dynplane.NewtonDivergence, dynplane.OrbitEscaped) as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as exc:
        print(f"E_DOMAIN: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)  # exits 2 on usage errors
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
