"""Best scaling ratio found by the adversarial search, per dimension and seed.

Also prints the antipodal family x = t e1, y = -t e1, where the ratio is
(1 + t^2) / (1 + |z|^2 t^2) and tends to 2 as t -> 1 and z -> 0.

    python3 scripts/sharpness_sweep.py --dims 1 2 5 --seeds 3
"""

import argparse
import csv
import sys

import numpy as np

from blochball.lab import theorem_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 5, 16])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--samples", type=int, default=20_000)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["dim", "seed", "random_max", "ascent_best", "gap_to_2"])
    for n in args.dims:
        for seed in range(args.seeds):
            res = theorem_scan(n, args.samples, seed)
            best = res.sharpness.best_ratio
            w.writerow([n, seed, "%.12f" % res.worst_lhs, "%.12f" % best, "%.3e" % (2 - best)])

    w.writerow([])
    w.writerow(["t", "z_abs", "antipodal_ratio"])
    for t in (0.9, 0.99, 0.999, 0.9999):
        for z in (1e-1, 1e-3):
            w.writerow([t, z, "%.12f" % ((1 + t * t) / (1 + z * z * t * t))])


if __name__ == "__main__":
    main()
