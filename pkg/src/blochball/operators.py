"""Self-maps of the ball, the tau quotients, and the bounded-below scanners.

A self-map is any object with ``dim``, ``kind``, vectorised ``apply`` and
``jacobian`` (last axes (n, n)), and optionally ``defect`` (an accurate
1 - |psi(x)|^2) and ``preimage``. :class:`~blochball.mobius.MobiusMap`
qualifies directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import BallPoint, DEFAULT_TOL, _scalar, coords, rho_ball
from .holo import (
    LIPSCHITZ_CONSTANT,
    HoloFn,
    Cayley,
    Precomposed,
    SamplingBudget,
    dilation,
    seminorm,
    seminorm_objective,
    sample_points,
)
from .lab import Check
from .mobius import MobiusMap, bc_parts
from .sampling import clip_to_ball, derive_rng, random_ball, random_directions, to_complex, to_real
from .search import projected_ascent


class RangeError(ValueError):
    """psi(x) is not in the range of psi'(x)."""


def _norm_sq(x):
    return np.sum(x.real**2 + x.imag**2, axis=-1)


def defect(psi, x):
    """1 - |psi(x)|^2, using the map's own formula when it has one."""
    x = coords(x)
    f = getattr(psi, "defect", None)
    if f is not None:
        return np.asarray(f(x))
    return 1.0 - _norm_sq(psi.apply(x))


@dataclass(frozen=True, eq=False)
class ScalarMap:
    """x -> z x with |z| <= 1."""

    z: complex
    dim: int = 1
    kind = "scalar"

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if abs(self.z) > 1.0:
            raise ValueError("scalar self-map needs |z| <= 1")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    def apply(self, x):
        return self.z * coords(x)

    __call__ = apply

    def jacobian(self, x):
        x = coords(x)
        return np.broadcast_to(self.z * np.eye(self.dim), x.shape[:-1] + (self.dim, self.dim))

    def defect(self, x):
        return 1.0 - abs(self.z) ** 2 * _norm_sq(coords(x))

    def preimage(self, y):
        return coords(y) / self.z if self.z != 0 else None

    def describe(self):
        return f"scalar:{self.z.real:.6g}" if self.z.imag == 0 else f"scalar:{self.z:.6g}"


@dataclass(frozen=True, eq=False)
class KalajMap:
    """(z, w) -> (z sin t, cos t) on the ball of C^2, 0 < t < pi/2."""

    t: float
    dim: int = field(default=2, init=False)
    kind = "kalaj"

    def __post_init__(self):
        if not 0.0 < self.t < np.pi / 2:
            raise ValueError("kalaj map needs 0 < t < pi/2")

    def apply(self, x):
        x = coords(x)
        out = np.empty(x.shape, dtype=complex)
        out[..., 0] = x[..., 0] * np.sin(self.t)
        out[..., 1] = np.cos(self.t)
        return out

    __call__ = apply

    def jacobian(self, x):
        x = coords(x)
        j = np.zeros(x.shape[:-1] + (2, 2), dtype=complex)
        j[..., 0, 0] = np.sin(self.t)
        return j

    def defect(self, x):
        z = coords(x)[..., 0]
        return np.sin(self.t) ** 2 * (1.0 - np.abs(z) ** 2)

    def describe(self):
        return f"kalaj:t={self.t:.6g}"


@dataclass(frozen=True, eq=False)
class UnitaryMap:
    """x -> U x."""

    matrix: np.ndarray
    kind = "unitary"

    def __post_init__(self):
        u = np.array(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or not np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-10):
            raise ValueError("matrix must be square unitary")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, x):
        return coords(x) @ self.matrix.T

    __call__ = apply

    def jacobian(self, x):
        x = coords(x)
        return np.broadcast_to(self.matrix, x.shape[:-1] + self.matrix.shape)

    def defect(self, x):
        return 1.0 - _norm_sq(coords(x))

    def preimage(self, y):
        return coords(y) @ np.conj(self.matrix)

    def describe(self):
        return "unitary:n=%d" % self.dim


@dataclass(frozen=True, eq=False)
class Composition:
    """maps[-1] o ... o maps[0]: the first map is applied first."""

    maps: tuple
    kind = "composition"

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("composition needs at least one map")
        if len({m.dim for m in maps}) != 1:
            raise ValueError("composed maps must share a dimension")
        object.__setattr__(self, "maps", maps)

    @property
    def dim(self):
        return self.maps[0].dim

    def apply(self, x):
        x = coords(x)
        for m in self.maps:
            x = m.apply(x)
        return x

    __call__ = apply

    def jacobian(self, x):
        x = coords(x)
        j = None
        for m in self.maps:
            jm = m.jacobian(x)
            j = jm if j is None else jm @ j
            x = m.apply(x)
        return j

    def defect(self, x):
        x = coords(x)
        for m in self.maps[:-1]:
            x = m.apply(x)
        return defect(self.maps[-1], x)

    def preimage(self, y):
        y = coords(y)
        for m in reversed(self.maps):
            f = getattr(m, "preimage", None)
            y = None if f is None else f(y)
            if y is None or _norm_sq(y).max() >= 1.0:
                return None
        return y

    def describe(self):
        return " | ".join(m.describe() for m in self.maps)


def _floats(text: str) -> list[complex]:
    return [complex(v.replace("i", "j")) for v in text.split(",") if v.strip()]


def parse_map(spec: str, dim: int | None = None):
    """Build a self-map from text such as ``mobius:a=0.3,0.1``, ``scalar:0.5``,
    ``kalaj:t=0.7``, ``unitary:phases=0.1,0.2`` or several joined by ``|``
    (applied left to right)."""
    if "|" in spec:
        return Composition(tuple(parse_map(s.strip(), dim) for s in spec.split("|")))
    m = re.fullmatch(r"\s*(\w+)\s*:\s*(?:(\w+)\s*=)?\s*(.+?)\s*", spec)
    if not m:
        raise ValueError(f"cannot parse map spec {spec!r}")
    kind, key, body = m.group(1).lower(), m.group(2), m.group(3)
    try:
        vals = _floats(body)
    except ValueError as e:
        raise ValueError(f"bad number in map spec {spec!r}") from e
    if kind == "mobius" and key in (None, "a"):
        a = np.array(vals, dtype=complex)
        if dim is not None and a.size < dim:
            a = np.concatenate([a, np.zeros(dim - a.size)])
        return MobiusMap(BallPoint(a))
    if kind == "scalar" and key in (None, "z") and len(vals) == 1:
        return ScalarMap(vals[0], dim or 1)
    if kind == "kalaj" and key in (None, "t") and len(vals) == 1 and vals[0].imag == 0:
        return KalajMap(vals[0].real)
    if kind == "unitary" and key in (None, "phases") and all(v.imag == 0 for v in vals):
        return UnitaryMap(np.diag(np.exp(1j * np.array([v.real for v in vals]))))
    raise ValueError(f"cannot parse map spec {spec!r}")


# ----------------------------------------------------------- tau quotients


def jacobian_norm(psi, x):
    """Operator norm of psi'(x) (largest singular value)."""
    j = psi.jacobian(coords(x))
    return _scalar(np.linalg.svd(j, compute_uv=False)[..., 0])


def tau(psi, x):
    """(1 - |x|^2) / (1 - |psi(x)|^2) |psi'(x)|."""
    x = coords(x)
    return _scalar((1.0 - _norm_sq(x)) / defect(psi, x) * jacobian_norm(psi, x))


def tau_tilde(psi, x):
    """sqrt(1 - |x|^2) / (1 - |psi(x)|^2) |psi'(x)|; never below tau."""
    x = coords(x)
    return _scalar(np.sqrt(1.0 - _norm_sq(x)) / defect(psi, x) * jacobian_norm(psi, x))


def kalaj_check(psi, x):
    """(1 - |x|^2) / sqrt(1 - |psi(x)|^2) |psi'(x)|, which never exceeds 1."""
    x = coords(x)
    return _scalar((1.0 - _norm_sq(x)) / np.sqrt(defect(psi, x)) * jacobian_norm(psi, x))


def preimage_w(psi, x, rtol: float = 1e-8) -> np.ndarray:
    """Minimal-norm w with psi'(x) w = |psi'(x)| psi(x); RangeError when the
    least-squares residual exceeds ``rtol`` |psi(x)|."""
    x = coords(x)
    px = psi.apply(x)
    j = np.asarray(psi.jacobian(x))
    nrm = np.linalg.svd(j, compute_uv=False)[0]
    target = nrm * px
    pn = np.linalg.norm(px)
    if pn == 0:
        return np.zeros(x.size, dtype=complex)
    w = np.linalg.lstsq(j, target, rcond=None)[0]
    res = np.linalg.norm(j @ w - target)
    if res > rtol * pn * max(nrm, 1.0):
        raise RangeError(f"psi(x) is not in the range of psi'(x) (residual {res:.3g})")
    return w


def _residual(psi, x) -> float:
    try:
        w = preimage_w(psi, x)
    except RangeError:
        j = np.asarray(psi.jacobian(x))
        px = psi.apply(x)
        t = np.linalg.svd(j, compute_uv=False)[0] * px
        w = np.linalg.lstsq(j, t, rcond=None)[0]
        return float(np.linalg.norm(j @ w - t))
    j = np.asarray(psi.jacobian(x))
    return float(np.linalg.norm(j @ w - np.linalg.svd(j, compute_uv=False)[0] * psi.apply(x)))


def inequality_checks(psi, x, w, tol: float = DEFAULT_TOL) -> dict[str, Check]:
    """The elementary bounds on B(x, w) and C(x, w) and their quotient.

    Keys: ``C-lower``, ``C-upper``, ``B-lower``, ``B-upper``, ``quotient-upper``
    (sqrt(1-|x|^2)/(1-|psi|^2) |psi' w|/|w|), ``quotient-lower`` (its
    counterpart with the roots swapped, written as rhs <= lhs by negation)
    and ``schwarz`` (B/C <= 1). Each check reads lhs <= rhs + tol.
    """
    x, w = coords(x), coords(w)
    b, c = bc_parts(psi, x, w)
    nx = 1.0 - _norm_sq(x)
    dp = defect(psi, x)
    ww = _norm_sq(w)
    jw = np.asarray(psi.jacobian(x)) @ w
    jj = _norm_sq(jw)
    q = b / c
    rel = lambda v: tol * max(1.0, abs(v))  # noqa: E731
    out = {
        "C-lower": Check(ww / nx, c**2, rel(c**2)),
        "C-upper": Check(c**2, ww / nx**2, rel(c**2)),
        "B-lower": Check(jj / dp, b**2, rel(b**2)),
        "B-upper": Check(b**2, jj / dp**2, rel(b**2)),
        "quotient-upper": Check(q, np.sqrt(nx) / dp * np.sqrt(jj / ww), rel(q)),
        "quotient-lower": Check(nx / np.sqrt(dp) * np.sqrt(jj / ww), q, rel(q)),
        "schwarz": Check(q, 1.0, tol),
    }
    return {k: Check(float(v.lhs), float(v.rhs), float(v.tol)) for k, v in out.items()}


def range_identity_checks(psi, x, tol: float = DEFAULT_TOL) -> dict[str, Check]:
    """With w_x from :func:`preimage_w`: B(x, w_x) = |psi'||psi| / (1-|psi|^2)
    (as two one-sided checks), the upper bound |psi'|/(1-|psi|^2), and
    B/C >= tau |psi(x)| / |w_x| when w_x != 0. Raises RangeError if w_x
    does not exist."""
    x = coords(x)
    w = preimage_w(psi, x)
    px = psi.apply(x)
    jn = float(jacobian_norm(psi, x))
    dp = float(defect(psi, x))
    pn = float(np.linalg.norm(px))
    exact = jn * pn / dp
    out = {}
    if np.linalg.norm(w) == 0:
        return out
    b, c = bc_parts(psi, x, w)
    b, c = float(b), float(c)
    t = max(1.0, exact)
    out["B-identity-upper"] = Check(b, exact, tol * t)
    out["B-identity-lower"] = Check(exact, b, tol * t)
    out["B-bound"] = Check(b, jn / dp, tol * t)
    out["tau-quotient"] = Check(float(tau(psi, x)) * pn / float(np.linalg.norm(w)), b / c, tol * max(1.0, b / c))
    return out


# --------------------------------------------------------------- scanners


@dataclass(frozen=True)
class ScanConfig:
    """Sampling used by the scanners."""

    samples: int = 2000
    refine_starts: int = 3
    refine_steps: int = 60
    seed: int = 0


def y_grid(n: int, radius: float = 0.95, rings: int = 5, angles: int = 8, extra: int = 8, seed: int = 0) -> np.ndarray:
    """Polar grid in the first coordinate plane plus seeded random points."""
    r = np.linspace(0.0, radius, rings + 1)[1:]
    t = np.linspace(0.0, 2 * np.pi, angles, endpoint=False)
    z = (r[:, None] * np.exp(1j * t)[None, :]).reshape(-1)
    pts = np.zeros((z.size + 1, n), dtype=complex)
    pts[1:, 0] = z
    if extra:
        rng = derive_rng(seed, "ygrid", n)
        u = random_directions(rng, n, extra)
        rad = radius * rng.random(extra) ** (1.0 / (2 * n))
        pts = np.concatenate([pts, u * rad[:, None]])
    return pts


@dataclass
class WitnessRow:
    y: np.ndarray
    x: np.ndarray | None
    rho: float
    tau: float
    tau_tilde: float
    residual: float

    def as_dict(self) -> dict:
        return {"y": self.y, "x": self.x, "rho": self.rho, "tau": self.tau,
                "tau_tilde": self.tau_tilde, "residual": self.residual}


@dataclass
class NecessaryReport:
    r_hat: float
    rows: list[WitnessRow]
    empty: list[int]
    eps: float

    @property
    def evidence_against(self) -> bool:
        """Heuristic flag: some grid point is nearly unreachable."""
        return self.r_hat >= 0.9


def _candidates(psi, cfg: ScanConfig, key) -> np.ndarray:
    rng = derive_rng(cfg.seed, key, psi.dim)
    return np.concatenate([np.zeros((1, psi.dim), dtype=complex), random_ball(rng, psi.dim, cfg.samples)])


def _exact(psi, y) -> np.ndarray | None:
    f = getattr(psi, "preimage", None)
    if f is None:
        return None
    x = f(y)
    if x is None or not np.all(np.isfinite(x)) or _norm_sq(x) >= (1.0 - 1e-9) ** 2:
        return None
    return np.asarray(x)


def _closest(psi, y, xs, px, ok, cfg: ScanConfig, qual, slack=None):
    """Point minimising rho(psi(x), y) over feasible samples, then refined."""
    if not ok.any():
        return None, np.inf
    d = np.where(ok, rho_ball(px, y[None, :]), np.inf)
    top = np.argsort(d)[: cfg.refine_starts]
    top = top[np.isfinite(d[top])]

    def obj(v):
        x = to_complex(v)
        val = -rho_ball(psi.apply(x), y[None, :])
        return np.where(qual(x), val, -np.inf)

    proj = lambda v: to_real(clip_to_ball(to_complex(v)))  # noqa: E731
    con = None if slack is None else (lambda v: slack(to_complex(v)))  # noqa: E731
    res = projected_ascent(obj, to_real(xs[top]), proj, steps=cfg.refine_steps, step0=0.02, constraint=con)
    v, best = res.best
    if -best <= d[top[0]]:
        return clip_to_ball(to_complex(v)), -best
    return xs[top[0]], d[top[0]]


def _row(psi, y, x) -> WitnessRow:
    if x is None:
        return WitnessRow(y, None, float("nan"), float("nan"), float("nan"), float("nan"))
    return WitnessRow(y, x, float(rho_ball(psi.apply(x), y)), float(tau(psi, x)), float(tau_tilde(psi, x)), _residual(psi, x))


def necessary_scan(psi, eps: float, ys: np.ndarray, cfg: ScanConfig = ScanConfig()) -> NecessaryReport:
    """Per y: inf over x with tau_tilde(psi, x) >= eps of rho(psi(x), y).

    ``r_hat`` is the max over the grid; grid points with no admissible x are
    listed in ``empty`` and excluded. A value near 1 is evidence against
    bounded-below, a value well below 1 is evidence consistent with it.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    ys = np.atleast_2d(np.asarray(ys, dtype=complex))
    xs = _candidates(psi, cfg, "necessary")
    px = psi.apply(xs)
    ok = tau_tilde(psi, xs) >= eps
    qual = lambda x: tau_tilde(psi, x) >= eps  # noqa: E731
    rows, empty = [], []
    for i, y in enumerate(ys):
        xe = _exact(psi, y)
        if xe is not None and tau_tilde(psi, xe) >= eps:
            rows.append(_row(psi, y, xe))
            continue
        x, _ = _closest(psi, y, xs, px, ok, cfg, qual, lambda x: tau_tilde(psi, x) - eps)
        if x is None:
            empty.append(i)
        rows.append(_row(psi, y, x))
    vals = [r.rho for r in rows if r.x is not None]
    return NecessaryReport(max(vals) if vals else float("nan"), rows, empty, eps)


@dataclass
class SufficientReport:
    success: bool
    rows: list[WitnessRow]
    accepted: list[bool]
    r: float
    eps: float
    eps_found: float
    A0: float | None
    k_values: list[float | None]

    @property
    def threshold(self) -> float | None:
        return None if self.A0 is None else 1.0 / (15.0 * self.A0)

    @property
    def clears_threshold(self) -> bool | None:
        return None if self.A0 is None else self.r < self.threshold

    @property
    def k_inf(self) -> float | None:
        """Smallest k over rows where it is defined (w_x = 0 leaves k undefined)."""
        ks = [k for k in self.k_values if k is not None]
        return min(ks) if ks else None


def _w_norm(psi, x) -> float | None:
    try:
        return float(np.linalg.norm(preimage_w(psi, x)))
    except RangeError:
        return None


def sufficient_scan(psi, r: float, eps: float, ys: np.ndarray, cfg: ScanConfig = ScanConfig(),
                    A0: float | None = None) -> SufficientReport:
    """Look for x_y with rho(psi(x_y), y) < r, tau(psi, x_y) > eps and
    psi(x_y) in the range of psi'(x_y), for every y of the grid.

    The exact preimage is tried first when the map has one. ``eps_found``
    is the smallest tau over accepted witnesses. With ``A0`` set, each row
    also gets k = 14 (1/(15 A0) - r) eps / |w_x|.
    """
    if r <= 0 or eps <= 0:
        raise ValueError("r and eps must be positive")
    ys = np.atleast_2d(np.asarray(ys, dtype=complex))
    xs = _candidates(psi, cfg, "sufficient")
    px = psi.apply(xs)
    ok = tau(psi, xs) > eps
    qual = lambda x: tau(psi, x) > eps  # noqa: E731
    rows, acc, ks = [], [], []
    for y in ys:
        x = _exact(psi, y)
        if x is None or not tau(psi, x) > eps:
            x, _ = _closest(psi, y, xs, px, ok, cfg, qual, lambda x: tau(psi, x) - eps)
        row = _row(psi, y, x)
        wn = None if x is None else _w_norm(psi, x)
        good = x is not None and row.rho < r and row.tau > eps and wn is not None
        rows.append(row)
        acc.append(bool(good))
        if good and A0 is not None and wn > 0:
            ks.append(LIPSCHITZ_CONSTANT * (1.0 / (15.0 * A0) - r) * eps / wn)
        else:
            ks.append(None)
    taus = [row.tau for row, a in zip(rows, acc) if a]
    return SufficientReport(all(acc), rows, acc, r, eps, min(taus) if taus else float("nan"), A0, ks)


# ------------------------------------------------------ interpolation


@dataclass(frozen=True, eq=False)
class InterpSequence:
    """Finitely many nonzero points of the ball and their separation."""

    points: tuple
    separation: float = field(init=False)

    def __post_init__(self):
        pts = tuple(p if isinstance(p, BallPoint) else BallPoint(p) for p in self.points)
        if not pts:
            raise ValueError("sequence needs at least one point")
        if len({p.dim for p in pts}) != 1:
            raise ValueError("points must share a dimension")
        if any(p.norm == 0 for p in pts):
            raise ValueError("sequence points must be nonzero")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "separation", _min_pair_rho(self.array()) if len(pts) > 1 else float("inf"))

    def array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points])

    def __len__(self):
        return len(self.points)

    @classmethod
    def geometric(cls, k: int = 5, n: int = 1) -> "InterpSequence":
        """(1 - 2^-j) e_1 for j = 1..k."""
        return cls(tuple(BallPoint.basis(n, 0, 1 - 2.0**-j) for j in range(1, k + 1)))


def _min_pair_rho(a: np.ndarray) -> float:
    i, j = np.triu_indices(len(a), 1)
    return float(np.min(rho_ball(a[i], a[j])))


def interp_separation(seq: InterpSequence) -> float:
    """Smallest pairwise pseudohyperbolic distance (0 for repeated points)."""
    if len(seq) < 2:
        raise ValueError("separation needs at least two points")
    return seq.separation


@dataclass(frozen=True, eq=False)
class FiniteSection:
    """Rows: sequence points; columns: basis functions; entries (1-|x_i|^2) Rf_j(x_i)."""

    matrix: np.ndarray
    sigma_min: float


def section_matrix(points: np.ndarray, basis: Sequence[HoloFn]) -> np.ndarray:
    return np.stack([np.atleast_1d(dilation(f, points)) for f in basis], axis=1)


def finite_section(seq: InterpSequence, basis: Sequence[HoloFn]) -> FiniteSection:
    if len(basis) < len(seq):
        raise ValueError("basis must have at least as many functions as points")
    m = section_matrix(seq.array(), basis)
    s = np.linalg.svd(m, compute_uv=False)
    return FiniteSection(m, float(s[-1]))


def cayley_basis(seq: InterpSequence, size: int, seed: int = 0, shrink: float = 0.98) -> list[Cayley]:
    """Cayley functions centred on (shrunk) sequence points, then on seeded
    small perturbations of them."""
    pts = seq.array()
    rng = derive_rng(seed, "cbasis", pts.shape[1])
    out = []
    for i in range(size):
        c = shrink * pts[i % len(pts)]
        if i >= len(pts):
            c = c + 0.05 * random_directions(rng, pts.shape[1], 1)[0]
            c = clip_to_ball(c, 0.95)
        out.append(Cayley(c))
    return out


def perturb_sequence(seq: InterpSequence, delta: float, seed: int = 0) -> InterpSequence:
    """Each x_n moved to phi_{x_n}(delta u_n), so rho(x_n, y_n) = delta exactly."""
    a = seq.array()
    rng = derive_rng(seed, "perturb", a.shape[1], len(a))
    u = delta * random_directions(rng, a.shape[1], len(a))
    return InterpSequence(tuple(MobiusMap(BallPoint(p)).apply(v) for p, v in zip(a, u)))


@dataclass
class PerturbationRow:
    fn: str
    lhs: float
    rhs: float
    seminorm_I: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass
class PerturbationReport:
    delta_hat: float
    rows: list[PerturbationRow]
    sigma_min_T: float
    sigma_min_S: float
    A0: float | None
    tol: float

    @property
    def holds(self) -> bool:
        return all(r.lhs <= r.rhs + self.tol for r in self.rows)


def perturbation_check(seq: InterpSequence, perturbed: InterpSequence, basis: Sequence[HoloFn],
                       A0_est: float | None = None, tol: float = DEFAULT_TOL,
                       budget: SamplingBudget = SamplingBudget(samples=2000),
                       seminorms: Sequence[float] | None = None) -> PerturbationReport:
    """max_n |T f - S f|_n <= 14 |f|_I max_n rho(x_n, y_n) for every basis f.

    ``seminorms`` may supply the |f|_I values; otherwise they are estimated.
    """
    if len(seq) != len(perturbed):
        raise ValueError("sequences must have equal length")
    a, b = seq.array(), perturbed.array()
    dh = float(np.max(rho_ball(a, b)))
    ta, sb = section_matrix(a, basis), section_matrix(b, basis)
    rows = []
    for j, f in enumerate(basis):
        sI = seminorm(f, "I", budget).value if seminorms is None else float(seminorms[j])
        lhs = float(np.max(np.abs(ta[:, j] - sb[:, j])))
        rows.append(PerturbationRow(f.describe(), lhs, LIPSCHITZ_CONSTANT * sI * dh, sI))
    sv = lambda m: float(np.linalg.svd(m, compute_uv=False)[-1])  # noqa: E731
    return PerturbationReport(dh, rows, sv(ta), sv(sb), A0_est, tol)


# ------------------------------------------------------ composition


def composition_contraction(f: HoloFn, psi, budget: SamplingBudget = SamplingBudget()) -> tuple[float, float]:
    """(|f o psi|_I, |f|_I) estimated with the same budget.

    The second estimate also sees psi of the first estimator's points, so
    whatever value f o psi reaches is available to f.
    """
    g = Precomposed(f, psi)
    eg = seminorm(g, "I", budget)
    pts = sample_points(psi.dim, budget)
    extra = psi.apply(np.concatenate([pts, eg.witness.coords[None]]))
    ef = seminorm(f, "I", budget, points=np.concatenate([pts, clip_to_ball(extra)]))
    return eg.value, ef.value


def automorphism_invariance(f: HoloFn, phi: MobiusMap, budget: SamplingBudget = SamplingBudget()) -> float:
    """Estimated |f o phi|_I / |f|_I; at least 1 because phi is an involution.

    The estimate for f o phi also sees phi(witness of f), where the
    invariant gradients of the two functions coincide.
    """
    ef = seminorm(f, "I", budget)
    pts = sample_points(phi.dim, budget)
    back = clip_to_ball(phi.apply(ef.witness.coords))
    eg = seminorm(Precomposed(f, phi), "I", budget, points=np.concatenate([pts, back[None]]))
    return eg.value / ef.value


def schwarz_pointwise(f: HoloFn, psi, x) -> Check:
    """|grad~(f o psi)(x)| <= |grad~ f(psi(x))|, the pointwise form of the contraction."""
    x = coords(x)
    g = Precomposed(f, psi)
    lhs = float(seminorm_objective(g, "I", x[None])[0])
    rhs = float(seminorm_objective(f, "I", psi.apply(x)[None])[0])
    return Check(lhs, rhs, DEFAULT_TOL * max(1.0, rhs))
