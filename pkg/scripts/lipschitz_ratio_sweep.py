"""Largest observed |dil f(x) - dil f(y)| / (|f|_I rho(x, y)) per function kind.

dil f(x) = (1 - |x|^2) Rf(x). The proven constant is 14; the sweep shows
how far below it sampled pairs stay, next to the ratio |f|_I / |f|_R.

    python3 scripts/lipschitz_ratio_sweep.py --dims 1 2 --pairs 20000
"""

import argparse
import csv
import sys

import numpy as np

from blochball.geometry import BallPoint, rho_ball
from blochball.holo import SamplingBudget, dilation, function_family, seminorm
from blochball.mobius import MobiusMap
from blochball.sampling import derive_rng, random_ball, random_directions


def pairs(n, k, seed):
    rng = derive_rng(seed, "sweep", n)
    x = random_ball(rng, n, k)
    # y = phi_x(v) puts y at distance |v| from x; |v| spans 1e-6 .. 0.98
    v = random_directions(rng, n, k) * (10.0 ** rng.uniform(-6, np.log10(0.98), k))[:, None]
    y = np.array([MobiusMap(BallPoint(p)).apply(q) for p, q in zip(x, v)])
    return x, y


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 5])
    ap.add_argument("--pairs", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    budget = SamplingBudget(samples=3000, seed=args.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["dim", "function", "seminorm_I", "I_over_R", "max_ratio", "rho_at_max"])
    for n in args.dims:
        x, y = pairs(n, args.pairs, args.seed)
        rho = rho_ball(x, y)
        for f in function_family(n, args.seed, size=2):
            s_i = seminorm(f, "I", budget).value
            s_r = seminorm(f, "R", budget).value
            ratio = np.abs(dilation(f, x) - dilation(f, y)) / (s_i * rho)
            i = int(np.argmax(ratio))
            w.writerow([n, f.describe(), "%.6g" % s_i, "%.6g" % (s_i / s_r), "%.6f" % ratio[i], "%.3g" % rho[i]])


if __name__ == "__main__":
    main()
