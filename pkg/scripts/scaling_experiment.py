"""Scaling of satellite centers along the convergents of golden and anti-golden.

Writes one CSV per angle and prints the same-side ratios s_{n+2}/s_n.
"""
import argparse
from pathlib import Path

from siegelren import paramplane, rotnum

ANGLES = {"golden": rotnum.golden, "anti_golden": rotnum.anti_golden}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=987)
    ap.add_argument("--outdir", type=Path, default=Path("out"))
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for name, make in ANGLES.items():
        rows = paramplane.scaling_table(make(), args.qmax, threads=args.threads)
        (args.outdir / f"scaling_{name}.csv").write_text(paramplane.scaling_csv(rows))
        print(f"{name}: {len(rows)} rows")
        for r in rows:
            print(f"  {r.p:>4}/{r.q:<4} {r.side:<5} s={r.s:.6f}")
        for side in ("left", "right"):
            ratios = paramplane.same_side_ratios(rows, side)
            print(f"  {side} ratios: " + " ".join(f"{x:.5f}" for x in ratios))


if __name__ == "__main__":
    main()
