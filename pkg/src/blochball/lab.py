"""Checkers and adversarial searches for the pseudohyperbolic scaling inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import DEFAULT_TOL, BallPoint, RatioProbe, coords, rho_ball, scaling_ratio, scaling_ratio_arrays, z_bound
from .sampling import R_MAX, clip_to_ball, derive_rng, random_ball, to_complex, to_real
from .search import projected_ascent

SCALING_BOUND = 2.0
LEMMA2_BOUND = 4.0
RHO_FLOOR = 1e-4


@dataclass(frozen=True)
class Check:
    """Both sides of one inequality lhs <= rhs."""

    lhs: float
    rhs: float
    tol: float = DEFAULT_TOL

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.tol


@dataclass(frozen=True)
class LemmaQuantities:
    """r = |x|, s = |y|, p = <x,y>, m = Re p, u = r^2+s^2, A = |x-y|^2, B = r^2 s^2 - |p|^2."""

    r: float
    s: float
    p: complex
    m: float
    u: float
    A: float
    B: float

    @classmethod
    def of(cls, x, y) -> "LemmaQuantities":
        x, y = coords(x), coords(y)
        d = x - y
        r2 = float(np.vdot(x, x).real)
        s2 = float(np.vdot(y, y).real)
        p = complex(np.vdot(y, x))
        a = float(np.vdot(d, d).real)
        # Gram determinant of (x, y) equals that of (x, x - y); the second
        # form does not cancel catastrophically when y is close to x.
        b = r2 * a - abs(np.vdot(x, d)) ** 2
        return cls(np.sqrt(r2), np.sqrt(s2), p, p.real, r2 + s2, a, b)

    @property
    def A_minus_B(self) -> float:
        return self.A - self.B


def lemma_arrays(x: np.ndarray, y: np.ndarray):
    """Vectorised (p, A, A - B) for rows of x and y."""
    d = x - y
    nx = np.sum(np.abs(x) ** 2, axis=-1)
    p = np.sum(x * np.conj(y), axis=-1)
    a = np.sum(np.abs(d) ** 2, axis=-1)
    dx = np.abs(np.sum(d * np.conj(x), axis=-1)) ** 2
    return p, a, (1.0 - nx) * a + dx


def lemma1_sides(x, y, z):
    """(|1 - p|, 2 |1 - |z|^2 p|) with p = <x, y>."""
    x, y = coords(x), coords(y)
    p = np.sum(x * np.conj(y), axis=-1)
    t = np.abs(np.asarray(z)) ** 2
    return np.abs(1.0 - p), 2.0 * np.abs(1.0 - t * p)


def lemma1_check(x, y, z, tol: float = DEFAULT_TOL) -> Check:
    """|1 - p| <= 2 |1 - |z|^2 p| under the hypothesis |z| <= z_bound(x, y)."""
    x, y = coords(x), coords(y)
    if np.any(x) or np.any(y):
        if abs(z) > z_bound(x, y) * (1 + 1e-15):
            raise ValueError("|z| exceeds the admissible bound for this pair")
    lhs, rhs = lemma1_sides(x, y, z)
    return Check(float(lhs), float(rhs), tol)


def lemma2_value(x, y):
    """A |1 - p|^2 / (A - B); at most 4."""
    p, a, amb = lemma_arrays(coords(x), coords(y))
    if np.any(amb <= 1e-14):
        raise ValueError("degenerate pair: A - B is numerically zero")
    out = a * np.abs(1.0 - p) ** 2 / amb
    return out.item() if out.ndim == 0 else out


def maxfun(a, b, c):
    """(3 - b^2)(a - c) - (a^2 - b^2)(2 - c) on 0 <= c <= b <= a <= 1."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    if np.any(c < 0) or np.any(c > b) or np.any(b > a) or np.any(a > 1):
        raise ValueError("arguments must satisfy 0 <= c <= b <= a <= 1")
    out = (3 - b**2) * (a - c) - (a**2 - b**2) * (2 - c)
    return out.item() if out.ndim == 0 else out


def simplex_grid(k: int = 100) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All (a, b, c) on a k^3 grid of [0, 1] that satisfy c <= b <= a."""
    g = np.linspace(0.0, 1.0, k)
    a, b, c = np.meshgrid(g, g, g, indexing="ij")
    keep = (c <= b) & (b <= a)
    return a[keep], b[keep], c[keep]


def random_simplex(rng: np.random.Generator, size: int):
    s = np.sort(rng.random((size, 3)), axis=1)
    return s[:, 2], s[:, 1], s[:, 0]


# -------------------------------------------------------------- scans


def admissible_z(rng: np.random.Generator, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Random z with |z| <= z_bound(x, y), weighted towards tiny and extreme |z|."""
    size = x.shape[0]
    zb = z_bound(x, y)
    kind = rng.integers(0, 4, size)
    w = rng.random(size)
    w = np.where(kind == 1, 10.0 ** (-4.0 * rng.random(size)), w)
    w = np.where(kind == 2, 1.0, w)
    w = np.where(kind == 3, 1.0 / zb + (1.0 - 1.0 / zb) * rng.random(size), w)
    return zb * w * np.exp(2j * np.pi * rng.random(size))


def draw_probes(rng: np.random.Generator, n: int, size: int):
    """Admissible (x, y, z) rows with x != y; half the pairs are near-antipodal."""
    x = random_ball(rng, n, size)
    y = random_ball(rng, n, size)
    flip = rng.random(size) < 0.25
    y[flip] = -x[flip] * rng.random(flip.sum())[:, None] + 1e-3 * y[flip]
    y = clip_to_ball(y)
    z = admissible_z(rng, x, y)
    return x, y, z


@dataclass(frozen=True, eq=False)
class SharpnessReport:
    best_ratio: float
    witness: RatioProbe
    iterations: int
    seed: int


@dataclass
class ScanResult:
    """Outcome of a randomised check of one inequality."""

    name: str
    dim: int
    samples: int
    violations: int
    worst_margin: float
    worst_lhs: float
    bound: float
    witness: dict = field(default_factory=dict)
    seed: int = 0
    sharpness: SharpnessReport | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _pack(x, y, z):
    return np.concatenate([to_real(x), to_real(y), np.stack([z.real, z.imag], axis=-1)], axis=-1)


def _unpack(v, n):
    x = to_complex(v[:, : 2 * n])
    y = to_complex(v[:, 2 * n : 4 * n])
    z = v[:, 4 * n] + 1j * v[:, 4 * n + 1]
    return x, y, z


def _probe_projector(n):
    def project(v):
        x, y, z = _unpack(v, n)
        x, y = clip_to_ball(x), clip_to_ball(y)
        m = np.maximum(np.linalg.norm(x, axis=-1), np.linalg.norm(y, axis=-1))
        zb = (1 + m) / (2 * np.maximum(m, 1e-300))
        az = np.abs(z)
        lim = np.clip(az, 1e-6, zb)
        z = np.where(az > 0, z / np.where(az > 0, az, 1.0) * lim, lim)
        return _pack(x, y, z)

    return project


def _ratio_objective(n):
    def obj(v):
        x, y, z = _unpack(v, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = scaling_ratio_arrays(z, x, y)
        ok = rho_ball(x, y) >= RHO_FLOOR
        return np.where(ok, r, -np.inf)

    return obj


def sharpness_search(n: int, starts: tuple, seed: int, steps: int = 300) -> SharpnessReport:
    """Projected ascent of the scaling ratio over admissible (x, y, z)."""
    x, y, z = starts
    res = projected_ascent(_ratio_objective(n), _pack(x, y, z), _probe_projector(n), steps=steps, step0=0.05)
    v, _ = res.best
    bx, by, bz = _unpack(v[None], n)
    probe = RatioProbe(complex(bz[0]), BallPoint(bx[0]), BallPoint(by[0]))
    return SharpnessReport(scaling_ratio(probe), probe, res.iterations, seed)


def theorem_scan(dim: int, samples: int, seed: int, tol: float = DEFAULT_TOL, ascent_starts: int = 8, steps: int = 300) -> ScanResult:
    """Randomised check of rho(zx, zy) <= 2 |z| rho(x, y) for admissible z, plus sharpness."""
    rng = derive_rng(seed, "theorem", dim)
    x, y, z = draw_probes(rng, dim, samples)
    keep = rho_ball(x, y) > 0
    x, y, z = x[keep], y[keep], z[keep]
    zx_out = np.maximum(np.linalg.norm(z[:, None] * x, axis=-1), np.linalg.norm(z[:, None] * y, axis=-1))
    ratio = scaling_ratio_arrays(z, x, y)
    bad = (ratio > SCALING_BOUND + tol) | (zx_out >= 1.0)
    i = int(np.argmax(ratio))
    # antipodal seeds let the ascent reach the extremal corner in every dimension
    k = ascent_starts
    top = np.argsort(np.where(rho_ball(x, y) >= RHO_FLOOR, ratio, -np.inf))[-k:]
    sx, sy, sz = x[top], y[top], z[top]
    t = 0.9 + 0.09 * rng.random(k)
    d = random_ball(rng, dim, k)
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    ax, ay = d * t[:, None], -d * t[:, None]
    az = 0.1 * np.exp(2j * np.pi * rng.random(k))
    starts = (np.concatenate([sx, ax]), np.concatenate([sy, ay]), np.concatenate([sz, az]))
    sharp = sharpness_search(dim, starts, seed, steps=steps)
    return ScanResult(
        name="scaling-theorem",
        dim=dim,
        samples=int(keep.sum()),
        violations=int(bad.sum()),
        worst_margin=float(SCALING_BOUND - ratio[i]),
        worst_lhs=float(ratio[i]),
        bound=SCALING_BOUND,
        witness={"x": x[i], "y": y[i], "z": z[i]},
        seed=seed,
        sharpness=sharp,
    )


def lemma1_scan(dim: int, samples: int, seed: int, tol: float = DEFAULT_TOL) -> ScanResult:
    rng = derive_rng(seed, "lemma1", dim)
    x, y, z = draw_probes(rng, dim, samples)
    lhs, rhs = lemma1_sides(x, y, z)
    margin = rhs - lhs
    i = int(np.argmin(margin))
    return ScanResult("lemma-inner-product", dim, samples, int(np.sum(lhs > rhs + tol)), float(margin[i]),
                      float(lhs[i]), float(rhs[i]), {"x": x[i], "y": y[i], "z": z[i]}, seed)


def lemma2_scan(dim: int, samples: int, seed: int, tol: float = DEFAULT_TOL, ascent_starts: int = 8, steps: int = 300):
    """Check A|1-p|^2/(A-B) <= 4 on random pairs and push it towards 4 by ascent."""
    rng = derive_rng(seed, "lemma2", dim)
    x, y, _ = draw_probes(rng, dim, samples)
    keep = rho_ball(x, y) >= RHO_FLOOR
    x, y = x[keep], y[keep]
    val = lemma2_value(x, y)
    i = int(np.argmax(val))

    def obj(v):
        a, b = to_complex(v[:, : 2 * dim]), to_complex(v[:, 2 * dim :])
        p, aa, amb = lemma_arrays(a, b)
        ok = (rho_ball(a, b) >= RHO_FLOOR) & (amb > 1e-14)
        return np.where(ok, aa * np.abs(1 - p) ** 2 / np.where(ok, amb, 1.0), -np.inf)

    def proj(v):
        return np.concatenate([to_real(clip_to_ball(to_complex(v[:, : 2 * dim]))),
                               to_real(clip_to_ball(to_complex(v[:, 2 * dim :])))], axis=-1)

    top = np.argsort(val)[-ascent_starts:]
    res = projected_ascent(obj, np.concatenate([to_real(x[top]), to_real(y[top])], axis=-1), proj, steps=steps)
    sup = float(max(val[i], res.values.max()))
    out = ScanResult("lemma-quotient", dim, int(keep.sum()), int(np.sum(val > LEMMA2_BOUND + tol)),
                     float(LEMMA2_BOUND - val[i]), float(val[i]), LEMMA2_BOUND, {"x": x[i], "y": y[i]}, seed)
    return out, sup


def maxfun_scan(k: int = 100, random_points: int = 100_000, seed: int = 0, tol: float = 1e-12) -> ScanResult:
    a, b, c = simplex_grid(k)
    ra, rb, rc = random_simplex(derive_rng(seed, "maxfun"), random_points)
    a, b, c = np.concatenate([a, ra]), np.concatenate([b, rb]), np.concatenate([c, rc])
    v = maxfun(a, b, c)
    i = int(np.argmin(v))
    return ScanResult("polynomial-nonnegativity", 0, v.size, int(np.sum(v < -tol)), float(v[i]), float(-v[i]), 0.0,
                      {"a": a[i], "b": b[i], "c": c[i]}, seed)


# -------------------------------------------------------- unboundedness


@dataclass(frozen=True)
class CounterexampleRow:
    n: int
    ratio_formula: float
    ratio_direct: float

    @property
    def difference(self) -> float:
        return abs(self.ratio_formula - self.ratio_direct)


def counterexample_formula(n: int) -> float:
    """(3n^3 + 2n^2) / (12n^2 - 9n + 2)."""
    return (3 * n**3 + 2 * n**2) / (12 * n**2 - 9 * n + 2)


def counterexample_probe(n: int, dim: int = 1, axis=None) -> RatioProbe:
    """x = 1/2, y = 1/2 - 1/n, z = 2 - 1/n along a unit vector of C^dim."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    e = np.zeros(dim, dtype=complex)
    if axis is None:
        e[0] = 1.0
    else:
        e = np.asarray(axis, dtype=complex) / np.linalg.norm(axis)
    return RatioProbe(2.0 - 1.0 / n, BallPoint(0.5 * e), BallPoint((0.5 - 1.0 / n) * e))


def counterexample(n: int, dim: int = 1, axis=None) -> CounterexampleRow:
    """Closed-form and directly computed scaling ratio for the unbounded family."""
    return CounterexampleRow(n, counterexample_formula(n), scaling_ratio(counterexample_probe(n, dim, axis)))


def norm_extension_refuted(seed: int = 0, tries: int = 2000) -> RatioProbe:
    """A probe with |rho(zx, zy) - |z| rho(x, y)| > 0.1 (rho is not homogeneous)."""
    rng = derive_rng(seed, "norm-extension")
    x = random_ball(rng, 1, tries, r_max=0.6)
    y = random_ball(rng, 1, tries, r_max=0.6)
    z = (1.0 + rng.random(tries) * 0.6) * np.exp(2j * np.pi * rng.random(tries))
    diff = np.abs(rho_ball(z[:, None] * x, z[:, None] * y) - np.abs(z) * rho_ball(x, y))
    i = int(np.argmax(diff))
    if diff[i] > 0.1 and x[i, 0] != y[i, 0]:
        return RatioProbe(complex(z[i]), BallPoint(x[i]), BallPoint(y[i]))
    return counterexample_probe(10)


def homogeneity_gap(probe: RatioProbe) -> float:
    return abs(rho_ball(probe.z * probe.x.coords, probe.z * probe.y.coords) - abs(probe.z) * rho_ball(probe.x, probe.y))
