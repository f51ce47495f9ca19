"""How far the image of x -> c x stays from a ring of radius R, under tau_tilde >= eps.

For a contraction |c| < 1 the reachable set is a ball of radius < |c|, so
the necessary-condition distance r_hat approaches 1 as R -> 1; for the
automorphism family it stays at 0. Rows: map, ring radius, r_hat.

    python3 scripts/scalar_obstruction_sweep.py --dim 2
"""

import argparse
import csv
import sys

from blochball.geometry import BallPoint
from blochball.mobius import MobiusMap
from blochball.operators import ScalarMap, ScanConfig, necessary_scan, tau, y_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.5, 0.8, 0.9, 0.95, 0.99, 0.999])
    ap.add_argument("--samples", type=int, default=2000)
    args = ap.parse_args()

    n = args.dim
    a = BallPoint.basis(n, 0, 0.5)
    maps = [ScalarMap(0.5, n), ScalarMap(0.9, n), MobiusMap(a)]
    cfg = ScanConfig(samples=args.samples)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["map", "eps", "ring_radius", "r_hat"])
    for psi in maps:
        eps = 0.5 * float(tau(psi, BallPoint.zeros(n).coords))
        for rad in args.radii:
            rep = necessary_scan(psi, eps, y_grid(n, radius=rad, rings=1, extra=0), cfg)
            w.writerow([psi.describe(), "%.4g" % eps, rad, "%.6f" % rep.r_hat])


if __name__ == "__main__":
    main()
