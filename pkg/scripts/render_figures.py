"""Render the standard pictures: Mandelbrot set, basilica and rabbit Julia sets, molecule model."""
import argparse
from pathlib import Path

from siegelren import dynplane, paramplane, raster

RABBIT = -0.12256116687665 + 0.74486176661974j


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--res", type=int, default=512)
    ap.add_argument("--maxiter", type=int, default=300)
    ap.add_argument("--outdir", type=Path, default=Path("out"))
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    res = (args.res, args.res)

    jobs = {
        "mandelbrot": lambda: paramplane.mandelbrot_render(raster.Window(-0.5 + 0j, 3.0), res, args.maxiter, args.threads),
        "basilica": lambda: dynplane.julia_render(-1, raster.Window(0j, 4.0), res, args.maxiter, args.threads),
        "rabbit": lambda: dynplane.julia_render(RABBIT, raster.Window(0j, 3.2), res, args.maxiter, args.threads),
        "molecule": lambda: dynplane.molecule_render(raster.Window(-0.4 + 0j, 3.2), res, args.maxiter, args.threads),
    }
    for name, render in jobs.items():
        path = args.outdir / f"{name}.ppm"
        render().write_ppm(path)
        print(path)


if __name__ == "__main__":
    main()
