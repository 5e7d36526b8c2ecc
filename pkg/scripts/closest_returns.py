"""Closest returns of the golden Siegel critical orbit."""
import argparse

from siegelren import dynplane, rotnum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=987)
    ap.add_argument("--orbit", type=int, default=10**6, help="iterates for the boundedness check")
    args = ap.parse_args()

    theta = rotnum.golden()
    _, bounded = dynplane.siegel_critical_orbit(theta, args.orbit)
    print(f"bounded over {args.orbit} iterates: {bounded}")
    print("record return times:", dynplane.record_return_times(theta, min(args.qmax, 10_000)))
    rep = dynplane.closest_returns(theta, args.qmax)
    print(rep.csv(), end="")
    print(f"cauchy spread over last 3 ratios: {rep.cauchy_spread(3):.2e}")


if __name__ == "__main__":
    main()
