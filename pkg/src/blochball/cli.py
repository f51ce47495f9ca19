"""Command-line entry point: ``blochball {verify,counterexample,scan-ratio,analyze-map}``.

Exit codes: 0 when every assertion holds, 1 when at least one is violated,
2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .holo import SamplingBudget, estimate_A0, function_family
from .lab import counterexample
from .operators import (
    ScanConfig,
    kalaj_check,
    necessary_scan,
    parse_map,
    sufficient_scan,
    tau,
    tau_tilde,
    y_grid,
)
from .sampling import derive_rng, random_ball
from .suites import SUITES, RunConfig, jsonable, run

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def fmt(v) -> str:
    """17 significant digits, '.' decimal, no locale."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=True) + "\n"


def emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dims(values: list[str]) -> tuple[int, ...]:
    out = []
    for v in values:
        out += [int(p) for p in v.split(",") if p.strip()]
    return tuple(out)


def _config(args, command: str) -> RunConfig:
    return RunConfig(command=command, suite=getattr(args, "suite", "all"), dim=_dims(args.dim), samples=args.samples,
                     seed=args.seed, tol=args.tol, output=args.output, format=getattr(args, "format", "json"))


# ------------------------------------------------------------- commands


def cmd_verify(cfg: RunConfig) -> int:
    report = run(cfg)
    if cfg.format == "csv":
        cols = ["id", "paper_anchor", "lhs", "rhs", "margin", "violations", "samples"]
        text = csv_text(cols, [[a[c] for c in cols] for a in report["assertions"]])
    else:
        text = json_text(report)
    emit(text, cfg.output)
    return EXIT_OK if report["violations"] == 0 else EXIT_VIOLATION


def cmd_counterexample(n_max: int, output: str | None) -> int:
    rows = [counterexample(n) for n in range(1, n_max + 1)]
    emit(csv_text(["n", "ratio_formula", "ratio_direct", "difference"],
                  [[r.n, r.ratio_formula, r.ratio_direct, r.difference] for r in rows]), output)
    return EXIT_OK


def ratio_grid(t_steps: int, z_steps: int):
    """Rows (t, |z|, ratio, closed form, admissible) for x = t e1, y = -t e1.

    |z| runs over (0, 1/t) plus |z| = 1, so the dilates stay inside the disk;
    ``admissible`` flags |z| <= (1 + t) / (2t). The closed form in this
    family is (1 + t^2) / (1 + |z|^2 t^2).
    """
    rows = []
    for t in np.linspace(0.05, 0.95, t_steps):
        top = (1 - 1e-9) / t
        zs = np.union1d(np.linspace(top / z_steps, top, z_steps), [1.0]) if z_steps else []
        for z in zs:
            zx, zy = z * t, -z * t
            ratio = (abs(zx - zy) / abs(1 - zx * zy)) / (z * 2 * t / (1 + t * t))
            rows.append([float(t), float(z), float(ratio), float((1 + t * t) / (1 + z * z * t * t)),
                         bool(z <= (1 + t) / (2 * t))])
    return rows


def cmd_scan_ratio(t_steps: int, z_steps: int, tol: float, output: str | None) -> int:
    rows = ratio_grid(t_steps, z_steps)
    text = csv_text(["t", "z_abs", "ratio", "closed_form", "admissible"], rows) if rows else ""
    emit(text, output)
    bad = [r for r in rows if r[4] and r[2] > 2 + tol]
    return EXIT_VIOLATION if bad else EXIT_OK


def _stats(v: np.ndarray) -> dict:
    return {"min": float(v.min()), "max": float(v.max()), "mean": float(v.mean())}


def cmd_analyze_map(psi, cfg: RunConfig, eps: float | None, r: float, grid_radius: float) -> int:
    n = psi.dim
    rng = derive_rng(cfg.seed, "analyze", n)
    xs = random_ball(rng, n, min(cfg.samples, 100_000))
    t, tt = np.atleast_1d(tau(psi, xs)), np.atleast_1d(tau_tilde(psi, xs))
    kc = np.atleast_1d(kalaj_check(psi, xs))
    origin = np.zeros(n, dtype=complex)
    k0 = float(kalaj_check(psi, origin))
    eps = 0.5 * float(tau(psi, origin)) if eps is None else eps
    scan = ScanConfig(samples=min(cfg.samples, 2000), seed=cfg.seed)
    nec = necessary_scan(psi, eps, y_grid(n, radius=grid_radius, seed=cfg.seed), scan)
    edge = necessary_scan(psi, eps, y_grid(n, radius=0.99, rings=1, extra=0, seed=cfg.seed), scan)
    a0 = estimate_A0(function_family(n, cfg.seed, size=1), SamplingBudget(samples=1000, seed=cfg.seed))
    suf = sufficient_scan(psi, r, eps, y_grid(n, radius=grid_radius, seed=cfg.seed), scan, A0=a0)
    order_bad = int(np.sum(t > tt * (1 + 1e-12)))
    kal_bad = int(np.sum(kc > 1 + cfg.tol)) + int(k0 > 1 + cfg.tol)
    report = {
        "map": psi.describe(),
        "kind": psi.kind,
        "dim": n,
        "version": __version__,
        "config": cfg.echo(),
        "tau": _stats(t),
        "tau_tilde": _stats(tt),
        "tau_order_violations": order_bad,
        "kalaj": {"max": float(kc.max()), "margin": float(1 - kc.max()), "origin": k0,
                  "origin_equality_gap": abs(k0 - 1.0), "violations": kal_bad},
        "necessary": {"eps": eps, "r_hat": nec.r_hat, "boundary_r_hat": edge.r_hat, "empty": nec.empty,
                      "evidence_against": bool(edge.evidence_against),
                      "rows": [w.as_dict() for w in nec.rows]},
        "sufficient": {"r": r, "eps": eps, "success": suf.success, "eps_found": suf.eps_found,
                       "A0_estimate": a0, "threshold": suf.threshold, "clears_threshold": suf.clears_threshold,
                       "k_values": suf.k_values, "k_inf": suf.k_inf, "accepted": suf.accepted,
                       "rows": [w.as_dict() for w in suf.rows]},
    }
    emit(json_text(report), cfg.output)
    return EXIT_VIOLATION if order_bad or kal_bad else EXIT_OK


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser, samples: int = 100_000):
    p.add_argument("--dim", nargs="+", default=["1,2,5,16"], help="dimensions, e.g. --dim 1 2 or --dim 1,2")
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output", default=None, help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blochball", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--format", default="json", choices=("json", "csv"))
    _common(v)

    c = sub.add_parser("counterexample", help="ratio table for the unbounded family")
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--output", default=None)

    s = sub.add_parser("scan-ratio", help="scaling ratio over a (t, |z|) grid, as CSV")
    s.add_argument("--t-steps", type=int, default=19)
    s.add_argument("--z-steps", type=int, default=20)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--output", default=None)

    a = sub.add_parser("analyze-map", help="tau statistics, Kalaj margins and scans for a self-map")
    a.add_argument("spec", help='e.g. "mobius:a=0.3,0.1", "scalar:0.5", "kalaj:t=0.7"')
    a.add_argument("--eps", type=float, default=None, help="tau threshold (default half of tau at 0)")
    a.add_argument("--r", type=float, default=1e-6, help="distance threshold of the sufficient scan")
    a.add_argument("--grid-radius", type=float, default=0.95)
    _common(a, samples=10_000)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = _config(args, "verify")
            job = lambda: cmd_verify(cfg)  # noqa: E731
        elif args.command == "counterexample":
            if args.n_max < 1:
                raise ValueError("--n-max must be >= 1")
            job = lambda: cmd_counterexample(args.n_max, args.output)  # noqa: E731
        elif args.command == "scan-ratio":
            if args.t_steps < 0 or args.z_steps < 0 or not args.tol > 0:
                raise ValueError("grid sizes must be >= 0 and tol positive")
            job = lambda: cmd_scan_ratio(args.t_steps, args.z_steps, args.tol, args.output)  # noqa: E731
        else:
            cfg = _config(args, "analyze-map")
            if args.eps is not None and not args.eps > 0:
                raise ValueError("--eps must be positive")
            if not args.r > 0 or not 0 < args.grid_radius < 1:
                raise ValueError("--r must be positive and --grid-radius in (0, 1)")
            psi = parse_map(args.spec, cfg.dim[0])
            job = lambda: cmd_analyze_map(psi, cfg, args.eps, args.r, args.grid_radius)  # noqa: E731
    except ValueError as e:
        print(f"blochball: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return job()


if __name__ == "__main__":
    sys.exit(main())
