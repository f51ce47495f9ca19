"""Verification suites: each runs seeded checks and returns assertion records.

A record reads ``lhs <= rhs`` (lower-bound checks are written with the bound
on the left), carries the number of violating samples, the worst margin
``rhs - lhs`` and a witness. Observations are numbers reported without an
asserted bound.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .c0s import c0s_scan, random_c0s, rho_c0s
from .geometry import BallPoint, rho_ball, rho_disk
from .holo import (
    Cayley,
    SamplingBudget,
    beta_lipschitz_defect,
    cauchy_epsilon,
    cauchy_lemma_check,
    function_family,
    growth_bound_check,
    intermediate_defect,
    invariant_gradient_norm,
    invariant_gradient_sup,
    lipschitz_defect,
    lipschitz_ratio,
    modulus_lipschitz_defect,
    seminorm,
    seminorm_profile,
)
from .lab import counterexample, lemma1_scan, lemma2_scan, maxfun_scan, norm_extension_refuted, homogeneity_gap, theorem_scan
from .mobius import MobiusMap, deriv0, deriv_at, quotient_BC
from .operators import (
    InterpSequence,
    KalajMap,
    Composition,
    ScalarMap,
    ScanConfig,
    UnitaryMap,
    automorphism_invariance,
    cayley_basis,
    composition_contraction,
    finite_section,
    inequality_checks,
    kalaj_check,
    necessary_scan,
    perturb_sequence,
    perturbation_check,
    range_identity_checks,
    sufficient_scan,
    tau,
    tau_tilde,
    y_grid,
)
from .sampling import derive_rng, random_ball, random_directions, random_unitary, uniform_ball

SUITES = ("geometry", "scaling", "lipschitz", "c0s", "compose", "interp")
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every command; validated on construction."""

    command: str = "verify"
    suite: str = "all"
    dim: tuple[int, ...] = (1, 2, 5, 16)
    samples: int = 100_000
    seed: int = 42
    tol: float = 1e-9
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        object.__setattr__(self, "dim", tuple(int(d) for d in self.dim))
        if not self.dim or any(d < 1 for d in self.dim):
            raise ValueError("dimensions must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.suite not in SUITES + ("all",):
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output")
        d["dim"] = list(self.dim)
        return d


@dataclass
class SuiteResult:
    assertions: list[dict] = field(default_factory=list)
    observations: list[dict] = field(default_factory=list)

    def check(self, id: str, anchor: str, lhs, rhs, violations: int | None = None, samples: int = 1,
              witness=None, tol: float = 0.0):
        lhs, rhs = float(lhs), float(rhs)
        if violations is None:
            violations = int(not lhs <= rhs + tol)
        self.assertions.append({
            "id": id, "paper_anchor": anchor, "lhs": lhs, "rhs": rhs, "margin": rhs - lhs,
            "violations": int(violations), "samples": int(samples), "witness": jsonable(witness),
        })

    def observe(self, id: str, value, note: str = ""):
        self.observations.append({"id": id, "value": jsonable(value), "note": note})

    def extend(self, other: "SuiteResult"):
        self.assertions += other.assertions
        self.observations += other.observations


def jsonable(v):
    """Plain JSON types; complex numbers become [re, im]."""
    if v is None or isinstance(v, (bool, str, int)):
        return v
    if isinstance(v, BallPoint):
        return jsonable(v.coords)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [jsonable(x) for x in v.tolist()] if v.ndim else jsonable(v.item())
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return str(v)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("BLOCHBALL_THREADS", "1")))
    except ValueError:
        return 1


def per_dim(cfg: RunConfig, fn: Callable[[int], SuiteResult]) -> SuiteResult:
    """Run ``fn`` for every dimension (in parallel if allowed), merged in order."""
    with ThreadPoolExecutor(max_workers=threads()) as ex:
        parts = list(ex.map(fn, cfg.dim))
    out = SuiteResult()
    for p in parts:
        out.extend(p)
    return out


# ------------------------------------------------------------------ suites


def suite_geometry(cfg: RunConfig) -> SuiteResult:
    def run(n):
        out = SuiteResult()
        m = min(cfg.samples, 10_000)
        rng = derive_rng(cfg.seed, "suite-geometry", n)
        x, y = random_ball(rng, n, m), random_ball(rng, n, m)
        direct = np.array([np.linalg.norm(MobiusMap(BallPoint(b)).apply(a)) for a, b in zip(x, y)])
        err = np.abs(rho_ball(x, y) - direct)
        i = int(np.argmax(err))
        out.check(f"geometry.metric-vs-automorphism.n{n}", "pseudohyperbolic distance equals |phi_y(x)|",
                  err[i], 1e-10, int(np.sum(err > 1e-10)), m, {"x": x[i], "y": y[i]})

        a, p = uniform_ball(rng, n, m), uniform_ball(rng, n, m)
        err = np.array([np.linalg.norm(MobiusMap(BallPoint(c)).apply(MobiusMap(BallPoint(c)).apply(q)) - q) for c, q in zip(a, p)])
        i = int(np.argmax(err))
        out.check(f"geometry.involution.n{n}", "automorphism is an involution",
                  err[i], 1e-10, int(np.sum(err > 1e-10)), m, {"a": a[i], "y": p[i]})

        # near the sphere the error is governed by conditioning, 1/(1-|a|^2)
        k = min(m, 2000)
        a, p = random_ball(rng, n, k), random_ball(rng, n, k)
        scaled = np.array([np.linalg.norm(MobiusMap(BallPoint(c)).apply(MobiusMap(BallPoint(c)).apply(q)) - q) * (1 - np.linalg.norm(c) ** 2)
                           for c, q in zip(a, p)])
        i = int(np.argmax(scaled))
        out.check(f"geometry.involution-conditioned.n{n}", "automorphism is an involution",
                  scaled[i], 16 * EPS, int(np.sum(scaled > 16 * EPS)), k, {"a": a[i], "y": p[i]})

        k = min(m, 1000)
        for tag, a in (("", uniform_ball(rng, n, k)), ("-conditioned", random_ball(rng, n, k))):
            err = np.array([np.abs(deriv_at(phi, phi.center) @ deriv0(phi) - np.eye(n)).max()
                            for phi in (MobiusMap(BallPoint(c)) for c in a)])
            bound = 1e-9
            if tag:
                err = err * (1 - np.linalg.norm(a, axis=-1) ** 2)
                bound = 16 * EPS
            i = int(np.argmax(err))
            out.check(f"geometry.derivative-inverse{tag}.n{n}", "derivative at a inverts derivative at 0",
                      err[i], bound, int(np.sum(err > bound)), k, {"a": a[i]})

        z = random_ball(rng, n, m)
        r1, r2, r3 = rho_ball(x, y), rho_ball(y, z), rho_ball(x, z)
        gap = r3 - (r1 + r2) / (1 + r1 * r2)
        i = int(np.argmax(gap))
        out.check(f"geometry.strong-triangle.n{n}", "pseudohyperbolic distance is a metric",
                  r3[i], (r1[i] + r2[i]) / (1 + r1[i] * r2[i]), int(np.sum(gap > cfg.tol)), m,
                  {"x": x[i], "y": y[i], "z": z[i]}, cfg.tol)
        sym = np.abs(rho_ball(x, y) - rho_ball(y, x))
        out.check(f"geometry.symmetry.n{n}", "pseudohyperbolic distance is a metric",
                  sym.max(), 1e-12, int(np.sum(sym > 1e-12)), m)
        return out

    return per_dim(cfg, run)


def suite_scaling(cfg: RunConfig) -> SuiteResult:
    def run(n):
        out = SuiteResult()
        th = theorem_scan(n, cfg.samples, cfg.seed, cfg.tol)
        out.check(f"scaling.theorem.n{n}", "dilation scaling theorem, bound 2", th.worst_lhs, 2.0 + cfg.tol,
                  th.violations, th.samples, th.witness)
        sh = th.sharpness
        out.check(f"scaling.sharpness.n{n}", "bound 2 is sharp", 1.95, sh.best_ratio, samples=sh.iterations,
                  witness={"x": sh.witness.x, "y": sh.witness.y, "z": sh.witness.z})
        l1 = lemma1_scan(n, cfg.samples, cfg.seed, cfg.tol)
        out.check(f"scaling.inner-product-lemma.n{n}", "inner-product lemma", l1.worst_lhs, l1.bound,
                  l1.violations, l1.samples, l1.witness)
        l2, sup = lemma2_scan(n, cfg.samples, cfg.seed, cfg.tol)
        out.check(f"scaling.quotient-lemma.n{n}", "quotient lemma, bound 4", l2.worst_lhs, 4.0 + cfg.tol,
                  l2.violations, l2.samples, l2.witness)
        out.check(f"scaling.quotient-lemma-sharpness.n{n}", "quotient lemma, bound 4", 3.9, sup)
        return out

    out = per_dim(cfg, run)
    mf = maxfun_scan(100, min(cfg.samples, 100_000), cfg.seed)
    out.check("scaling.polynomial-nonnegativity", "auxiliary polynomial is nonnegative on the simplex",
              -mf.worst_margin, 1e-12, mf.violations, mf.samples, mf.witness)
    ns = list(range(1, 10_001))
    rows = [counterexample(k) for k in ns]
    rel = np.array([r.difference / abs(r.ratio_formula) for r in rows])
    i = int(np.argmax(rel))
    out.check("scaling.counterexample-agreement", "unbounded ratio without the radius hypothesis",
              rel[i], 1e-8, int(np.sum(rel > 1e-8)), len(rows), {"n": ns[i]})
    r100 = counterexample(100)
    out.check("scaling.counterexample-growth", "unbounded ratio without the radius hypothesis", 25.0,
              r100.ratio_direct, witness={"n": 100, "formula": r100.ratio_formula})
    probe = norm_extension_refuted(cfg.seed)
    out.check("scaling.not-homogeneous", "distance is not a homogeneous norm", 0.1, homogeneity_gap(probe),
              witness={"x": probe.x, "y": probe.y, "z": probe.z})
    return out


def _pairs(rng, n, k):
    """x anywhere in the ball; y half near x (phi_x of a small vector), half independent."""
    x = random_ball(rng, n, k)
    y = random_ball(rng, n, k)
    near = rng.random(k) < 0.5
    step = 10.0 ** rng.uniform(-6, 0, k) * 0.999
    v = random_directions(rng, n, k) * step[:, None]
    for j in np.flatnonzero(near):
        y[j] = MobiusMap(BallPoint(x[j])).apply(v[j])
    return x, y


def suite_lipschitz(cfg: RunConfig) -> SuiteResult:
    total = min(cfg.samples, 10_000)
    per = -(-total // len(cfg.dim))
    budget = SamplingBudget(samples=2000, seed=cfg.seed)

    def run(n):
        out = SuiteResult()
        fam = function_family(n, cfg.seed, size=3)
        sI = [seminorm(f, "I", budget).value for f in fam]
        rng = derive_rng(cfg.seed, "suite-lipschitz", n)
        k = -(-per // len(fam))
        worst = {"14": (-np.inf, None), "mod": (-np.inf, None), "12": (-np.inf, None), "beta": (-np.inf, None)}
        bad = dict.fromkeys(worst, 0)
        best_ratio, count = 0.0, 0
        for f, s in zip(fam, sI):
            x, y = _pairs(rng, n, k)
            count += k
            for key, fn in (("14", lipschitz_defect), ("mod", modulus_lipschitz_defect),
                            ("12", intermediate_defect), ("beta", beta_lipschitz_defect)):
                d = np.asarray(fn(f, x, y, s))
                bad[key] += int(np.sum(d > cfg.tol))
                i = int(np.argmax(d))
                if d[i] > worst[key][0]:
                    worst[key] = (float(d[i]), {"f": f.describe(), "x": x[i], "y": y[i], "seminorm_I": s})
            ok = rho_ball(x, y) > 1e-6
            if ok.any() and s > 0:
                best_ratio = max(best_ratio, float(np.max(lipschitz_ratio(f, x[ok], y[ok], s))))
        names = {"14": ("dilation-lipschitz", "dilation map is 14-Lipschitz"),
                 "mod": ("modulus-lipschitz", "dilation map is 14-Lipschitz"),
                 "12": ("intermediate", "radial derivative difference, constant 12"),
                 "beta": ("beta-lipschitz", "functions are Lipschitz in the hyperbolic distance")}
        for key, (name, anchor) in names.items():
            d, wit = worst[key]
            out.check(f"lipschitz.{name}.n{n}", anchor, d, 0.0, bad[key], count, wit, cfg.tol)
        out.observe(f"lipschitz.max-ratio.n{n}", best_ratio, "largest |dil(x)-dil(y)|/(|f|_I rho) seen; not asserted")

        m = max(2, min(1000, cfg.samples // 100) // len(cfg.dim))
        xs = random_ball(rng, n, m)
        errs = []
        for j, x in enumerate(xs):
            f = fam[j % len(fam)]
            a = float(invariant_gradient_norm(f, x))
            b = invariant_gradient_sup(f, x, directions=200, seed=cfg.seed + j, ascent_steps=200)
            errs.append(abs(a - b) / max(a, b, 1e-300))
        errs = np.array(errs)
        i = int(np.argmax(errs))
        out.check(f"lipschitz.invariant-gradient.n{n}", "invariant gradient closed form vs direct supremum",
                  errs[i], 0.01, int(np.sum(errs > 0.01)), m, {"f": fam[i % len(fam)].describe(), "x": xs[i]})

        sub = function_family(n, cfg.seed, size=1)
        chain, a0 = 0.0, 0.0
        for f in sub:
            prof = seminorm_profile(f, budget)
            chain = max(chain, prof["R"].value - prof["B"].value, prof["B"].value - prof["I"].value)
            if prof["R"].value > 0:
                a0 = max(a0, prof["I"].value / prof["R"].value)
        out.check(f"lipschitz.seminorm-chain.n{n}", "R <= B <= I semi-norm chain", chain, 1e-6, samples=len(sub))
        out.observe(f"lipschitz.A0-estimate.n{n}", a0, "max |f|_I / |f|_R over the sub-family")

        ys = random_ball(rng, n, 5, r_max=0.95)
        rel = [abs(seminorm(Cayley(y), "B", budget).value / (np.linalg.norm(y) / (1 - np.linalg.norm(y) ** 2)) - 1) for y in ys]
        i = int(np.argmax(rel))
        out.check(f"lipschitz.cayley-closed-form.n{n}", "Cayley semi-norm closed form", rel[i], 0.01,
                  int(np.sum(np.array(rel) > 0.01)), len(ys), {"y": ys[i]})

        worst_c, bad_c, worst_g, bad_g = -np.inf, 0, -np.inf, 0
        xs = random_ball(rng, n, 20, r_max=0.9)
        for j, x in enumerate(xs):
            f, s = fam[j % len(fam)], sI[j % len(fam)]
            y = MobiusMap(BallPoint(x)).apply(0.3 * random_directions(rng, n, 1)[0])
            big, small = (x, y) if np.linalg.norm(x) >= np.linalg.norm(y) else (y, x)
            rep = cauchy_lemma_check(f, big, small, cauchy_epsilon(big), s, tol=cfg.tol)
            worst_c, bad_c = max(worst_c, -rep.margin), bad_c + (not rep.holds)
            sB = seminorm(f, "B", budget).value if j < len(fam) else None
            if sB is not None:
                ok, lhs, rhs = growth_bound_check(f, x, sB, cfg.tol)
                worst_g, bad_g = max(worst_g, lhs - rhs), bad_g + (not ok)
        out.check(f"lipschitz.cauchy-estimate.n{n}", "radial derivative difference via Cauchy estimate",
                  worst_c, 0.0, bad_c, len(xs), tol=cfg.tol)
        out.check(f"lipschitz.growth-bound.n{n}", "growth bound from the Bloch semi-norm", worst_g, 0.0, bad_g,
                  min(len(xs), len(fam)), tol=cfg.tol)
        return out

    return per_dim(cfg, run)


def suite_c0s(cfg: RunConfig) -> SuiteResult:
    out = SuiteResult()
    m = min(cfg.samples, 10_000)
    res, site_fail = c0s_scan(32, m, cfg.seed, cfg.tol)
    out.check("c0s.scaling", "scaling bound 2 in C_0(S)", res.worst_lhs, 2.0 + cfg.tol, res.violations,
              res.samples, res.witness)
    out.check("c0s.site-hypothesis", "radius hypothesis passes to every site", site_fail, 0, site_fail, res.samples)
    rng = derive_rng(cfg.seed, "suite-c0s")
    a, b, c = (random_c0s(rng, 4, m) for _ in range(3))
    x, y = a[:, 0], b[:, 0]
    gap = rho_c0s(a, c) - rho_c0s(a, b) - rho_c0s(b, c)
    out.check("c0s.triangle", "sup-distance is a metric", gap.max(), 0.0, int(np.sum(gap > cfg.tol)), len(gap),
              tol=cfg.tol)
    diff = np.abs(rho_c0s(x[:, None], y[:, None]) - rho_disk(x, y))
    out.check("c0s.singleton-is-disk", "sup-distance is a metric", diff.max(), 0.0, int(np.sum(diff > 0)), m)
    return out


def _map_mix(rng, n):
    maps = [MobiusMap(BallPoint(random_ball(rng, n, 1, 0.95)[0]), random_unitary(rng, n)),
            ScalarMap(0.9 * np.exp(2j * np.pi * rng.random()), n),
            UnitaryMap(random_unitary(rng, n)),
            Composition((MobiusMap(BallPoint(random_ball(rng, n, 1, 0.8)[0])), ScalarMap(0.7, n),
                         MobiusMap(BallPoint(random_ball(rng, n, 1, 0.8)[0]))))]
    if n == 2:
        maps.append(KalajMap(0.2 + 1.2 * rng.random()))
    return maps


def suite_compose(cfg: RunConfig) -> SuiteResult:
    scan = ScanConfig(samples=min(cfg.samples, 2000), seed=cfg.seed)

    def run(n):
        out = SuiteResult()
        rng = derive_rng(cfg.seed, "suite-compose", n)
        m = min(cfg.samples, 10_000)
        a, x = random_ball(rng, n, m), random_ball(rng, n, m)
        taus = np.array([tau(MobiusMap(BallPoint(c)), p) for c, p in zip(a, x)])
        i = int(np.argmin(taus))
        out.check(f"compose.tau-automorphism.n{n}", "tau of an automorphism is at least 1", 1.0 - cfg.tol,
                  taus[i], int(np.sum(taus < 1.0 - cfg.tol)), m, {"a": a[i], "x": x[i]})

        maps = _map_mix(rng, n)
        k = max(1, m // len(maps))
        wk, wq, wt = (-np.inf, None), (-np.inf, None), (-np.inf, None)
        bk = bq = bt = 0
        ineq_bad, ineq_worst, ineq_count = 0, -np.inf, 0
        for psi in maps:
            xs = random_ball(rng, n, k)
            ws = random_directions(rng, n, k) * rng.uniform(0.1, 2.0, (k, 1))
            kc = np.atleast_1d(kalaj_check(psi, xs))
            tt, tv = np.atleast_1d(tau_tilde(psi, xs)), np.atleast_1d(tau(psi, xs))
            q = np.atleast_1d(quotient_BC(psi, xs, ws))
            for arr, key in ((kc - 1.0, "k"), (q - 1.0, "q"), (tv - tt, "t")):
                i = int(np.argmax(arr))
                wit = {"map": psi.describe(), "x": xs[i]}
                if key == "k":
                    bk += int(np.sum(arr > cfg.tol))
                    wk = max(wk, (float(arr[i]), wit), key=lambda v: v[0])
                elif key == "q":
                    bq += int(np.sum(arr > cfg.tol))
                    wq = max(wq, (float(arr[i]), dict(wit, w=ws[i])), key=lambda v: v[0])
                else:
                    bt += int(np.sum(arr > 1e-12 * np.maximum(tt, 1.0)))
                    wt = max(wt, (float(arr[i]), wit), key=lambda v: v[0])
            for j in range(min(k, 250)):
                for c in inequality_checks(psi, xs[j], ws[j], cfg.tol).values():
                    ineq_bad += not c.holds
                    ineq_worst = max(ineq_worst, (c.lhs - c.rhs) / max(1.0, abs(c.rhs)))
                    ineq_count += 1
        out.check(f"compose.kalaj-bound.n{n}", "weighted Jacobian bound (at most 1)", 1.0 + wk[0], 1.0 + cfg.tol,
                  bk, k * len(maps), wk[1])
        out.check(f"compose.schwarz-quotient.n{n}", "B/C at most 1 for analytic self-maps", 1.0 + wq[0], 1.0 + cfg.tol,
                  bq, k * len(maps), wq[1])
        out.check(f"compose.tau-order.n{n}", "tau_tilde dominates tau", wt[0], 0.0, bt, k * len(maps), wt[1])
        # relative excess, checked against the scaled tolerance
        out.check(f"compose.B-C-bounds.n{n}", "elementary bounds on B and C", ineq_worst, cfg.tol, ineq_bad, ineq_count)

        rid_bad, rid_worst, rid_n = 0, -np.inf, 0
        for c, p in zip(a[:200], x[:200]):
            for chk in range_identity_checks(MobiusMap(BallPoint(c)), p, cfg.tol).values():
                rid_bad += not chk.holds
                rid_worst = max(rid_worst, (chk.lhs - chk.rhs) / max(1.0, abs(chk.rhs)))
                rid_n += 1
        out.check(f"compose.range-identity.n{n}", "B(x, w_x) identity when psi(x) is in the range",
                  rid_worst, cfg.tol, rid_bad, rid_n)

        budget = SamplingBudget(samples=1000, ascent_starts=4, ascent_steps=80, seed=cfg.seed)
        f = function_family(n, cfg.seed, size=1)[1]
        worst_c, worst_i = -np.inf, np.inf
        for psi in maps:
            g, h = composition_contraction(f, psi, budget)
            worst_c = max(worst_c, g - h - 1e-6 * max(1.0, h))
        for c in random_ball(rng, n, 3, 0.9):
            r = automorphism_invariance(f, MobiusMap(BallPoint(c)), budget)
            worst_i = min(worst_i, r)
        out.check(f"compose.contraction.n{n}", "composition does not increase the I semi-norm", worst_c, 0.0,
                  samples=len(maps))
        out.check(f"compose.automorphism-invariance.n{n}", "bounded below reduces to the I semi-norm",
                  1.0 - 1e-6, worst_i, samples=3)
        return out

    out = per_dim(cfg, run)
    ts = np.linspace(0.1, 1.47, 10)
    eq = np.array([abs(kalaj_check(KalajMap(t), np.zeros(2)) - 1.0) for t in ts])
    out.check("compose.kalaj-sharpness", "weighted Jacobian bound is sharp", eq.max(), 1e-9,
              int(np.sum(eq > 1e-9)), len(ts), {"t": ts[int(np.argmax(eq))]})

    n = 2
    mob = MobiusMap(BallPoint.basis(n, 0, 0.5))
    sr = sufficient_scan(mob, 1e-6, 0.99, y_grid(n, seed=cfg.seed), scan)
    out.check("compose.sufficient-automorphism", "sufficient condition: automorphisms take eps = 1, r = 0",
              1.0 - 1e-6, sr.eps_found if sr.success else -np.inf, witness={"accepted": sum(sr.accepted)})
    nr = necessary_scan(ScalarMap(0.5, n), 0.25, y_grid(n, radius=0.99, seed=cfg.seed), scan)
    out.check("compose.necessary-scalar-obstruction", "necessary condition: points far from the range",
              0.9, nr.r_hat, witness={"empty": nr.empty})
    kr = sufficient_scan(KalajMap(0.7), 0.1, 0.1, y_grid(n, seed=cfg.seed), scan)
    out.observe("compose.kalaj-sufficient-accepted", sum(kr.accepted), "range hypothesis fails everywhere")
    return out


def suite_interp(cfg: RunConfig) -> SuiteResult:
    budget = SamplingBudget(samples=2000, seed=cfg.seed)

    def run(n):
        out = SuiteResult()
        seq = InterpSequence.geometric(5, n)
        out.check(f"interp.separation.n{n}", "interpolating sequences are separated",
                  abs(seq.separation - 16 / 47), 1e-12)
        basis = cayley_basis(seq, 8, cfg.seed)
        fs = finite_section(seq, basis)
        out.check(f"interp.section-rank.n{n}", "finite section of the dilation operator", 1e-8, fs.sigma_min)
        sI = [seminorm(f, "I", budget).value for f in basis]
        for d in (0.001, 0.01, 0.05):
            rep = perturbation_check(seq, perturb_sequence(seq, d, cfg.seed), basis, tol=cfg.tol, seminorms=sI)
            j = int(np.argmin([r.margin for r in rep.rows]))
            out.check(f"interp.perturbation-{d:g}.n{n}", "row-wise operator difference, constant 14",
                      rep.rows[j].lhs, rep.rows[j].rhs, sum(r.lhs > r.rhs + cfg.tol for r in rep.rows), len(rep.rows),
                      {"f": rep.rows[j].fn, "delta_hat": rep.delta_hat}, cfg.tol)
            out.observe(f"interp.sigma-min-{d:g}.n{n}", [rep.sigma_min_T, rep.sigma_min_S], "T section, S section")
        merged = InterpSequence(seq.points + (seq.points[2],))
        out.check(f"interp.merge-collapse.n{n}", "separation is necessary", finite_section(merged, basis).sigma_min, 1e-8)
        return out

    return per_dim(cfg, run)


RUNNERS = {
    "geometry": suite_geometry,
    "scaling": suite_scaling,
    "lipschitz": suite_lipschitz,
    "c0s": suite_c0s,
    "compose": suite_compose,
    "interp": suite_interp,
}


def run(cfg: RunConfig) -> dict:
    """Run the configured suite (or all of them) and assemble the report."""
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    res = SuiteResult()
    for name in names:
        res.extend(RUNNERS[name](cfg))
    return {
        "suite": cfg.suite,
        "version": __version__,
        "config": cfg.echo(),
        "seed": cfg.seed,
        "violations": sum(a["violations"] for a in res.assertions),
        "assertions": res.assertions,
        "observations": res.observations,
    }
