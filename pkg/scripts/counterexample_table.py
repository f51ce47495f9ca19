"""Scaling ratio without the radius hypothesis: x = 1/2, y = 1/2 - 1/n, z = 2 - 1/n.

Prints the closed form, the direct evaluation and ratio / n, which tends
to 1/4, so the ratio grows without bound.

    python3 scripts/counterexample_table.py --n 1 2 10 100 1000 10000 100000
"""

import argparse
import csv
import sys

from blochball.lab import counterexample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 5, 10, 30, 100, 300, 1000, 10_000, 100_000])
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "ratio_formula", "ratio_direct", "rel_difference", "ratio_over_n"])
    for n in args.n:
        r = counterexample(n)
        w.writerow([n, "%.12g" % r.ratio_formula, "%.12g" % r.ratio_direct,
                    "%.2e" % (r.difference / r.ratio_formula), "%.6f" % (r.ratio_formula / n)])


if __name__ == "__main__":
    main()
