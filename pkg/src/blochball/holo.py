"""Holomorphic test functions on B_n and the Bloch-space calculus on them.

Gradient convention: ``grad(x)`` is the vector of complex partials g with
f'(x)(w) = sum_i g_i w_i, so the radial derivative is sum_i x_i g_i and the
gradient norm is |g|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .geometry import BallPoint, beta_from_rho, coords, rho_ball, _scalar
from .sampling import R_MAX, clip_to_ball, derive_rng, random_ball, random_directions, to_complex, to_real
from .search import projected_ascent

LIPSCHITZ_CONSTANT = 14.0
INTERMEDIATE_CONSTANT = 12.0


class HoloFn:
    """Base class: a holomorphic function on B_n with closed-form gradient."""

    dim: int
    kind: str = "abstract"

    def eval(self, x) -> np.ndarray:
        raise NotImplementedError

    def grad(self, x) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        return _scalar(np.asarray(self.eval(coords(x))))

    def __add__(self, other: "HoloFn") -> "Combination":
        return Combination([(1.0, self), (1.0, other)])

    def __rmul__(self, c) -> "Combination":
        return Combination([(complex(c), self)])

    def describe(self) -> str:
        return self.kind


def _pair(x, y):
    return np.sum(x * np.conj(y), axis=-1)


@dataclass(eq=False)
class Linear(HoloFn):
    """f(x) = <x, b>."""

    b: np.ndarray
    kind: str = field(default="linear", init=False)

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=complex).reshape(-1)
        self.dim = self.b.size

    def eval(self, x):
        return _pair(coords(x), self.b)

    def grad(self, x):
        x = coords(x)
        return np.broadcast_to(np.conj(self.b), x.shape).copy()


@dataclass(eq=False)
class Cayley(HoloFn):
    """f_y(x) = 1 / (1 - <x, y>), |y| < 1."""

    y: np.ndarray
    kind: str = field(default="cayley", init=False)

    def __post_init__(self):
        self.y = BallPoint(coords(self.y)).coords
        self.dim = self.y.size

    def eval(self, x):
        return 1.0 / (1.0 - _pair(coords(x), self.y))

    def grad(self, x):
        d = 1.0 - _pair(coords(x), self.y)
        return np.conj(self.y) / (d**2)[..., None]


@dataclass(eq=False)
class LogCayley(HoloFn):
    """f(x) = log(1 - <x, y>), |y| <= 1 (|y| = 1 gives the extremal log function)."""

    y: np.ndarray
    kind: str = field(default="log-cayley", init=False)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=complex).reshape(-1)
        if np.linalg.norm(self.y) > 1.0 + 1e-12:
            raise ValueError("log-cayley needs |y| <= 1")
        self.dim = self.y.size

    def eval(self, x):
        return np.log(1.0 - _pair(coords(x), self.y))

    def grad(self, x):
        d = 1.0 - _pair(coords(x), self.y)
        return -np.conj(self.y) / d[..., None]


@dataclass(eq=False)
class Monomial(HoloFn):
    """f(x) = prod_i x_i^alpha_i."""

    alpha: tuple
    kind: str = field(default="monomial", init=False)

    def __post_init__(self):
        self.alpha = tuple(int(a) for a in self.alpha)
        if any(a < 0 for a in self.alpha) or not self.alpha:
            raise ValueError("multi-index entries must be nonnegative")
        self.dim = len(self.alpha)

    def eval(self, x):
        x = coords(x)
        return np.prod(x ** np.array(self.alpha), axis=-1)

    def grad(self, x):
        x = coords(x)
        al = np.array(self.alpha)
        out = np.empty(x.shape, dtype=complex)
        for i, a in enumerate(al):
            e = al.copy()
            e[i] = max(a - 1, 0)
            out[..., i] = a * np.prod(x**e, axis=-1) if a > 0 else 0.0
        return out


@dataclass(eq=False)
class Precomposed(HoloFn):
    """x -> inner(psi(x)) for any map exposing ``apply`` and ``jacobian``."""

    inner: HoloFn
    psi: object
    kind: str = field(default="mobius-precomposed", init=False)

    def __post_init__(self):
        self.dim = self.psi.dim

    def eval(self, x):
        return self.inner.eval(self.psi.apply(coords(x)))

    def grad(self, x):
        x = coords(x)
        g = self.inner.grad(self.psi.apply(x))
        return np.einsum("...ij,...i->...j", self.psi.jacobian(x), g)

    def describe(self):
        return f"{self.inner.describe()}∘map"


@dataclass(eq=False)
class Combination(HoloFn):
    """const + sum_k c_k f_k."""

    terms: Sequence
    const: complex = 0.0
    kind: str = field(default="affine-combination", init=False)

    def __post_init__(self):
        self.terms = [(complex(c), f) for c, f in self.terms]
        dims = {f.dim for _, f in self.terms}
        if len(dims) != 1:
            raise ValueError("combined functions must share a dimension")
        self.dim = dims.pop()

    def eval(self, x):
        return self.const + sum(c * f.eval(x) for c, f in self.terms)

    def grad(self, x):
        return sum(c * f.grad(x) for c, f in self.terms)


# ---------------------------------------------------------------- calculus


def radial_derivative(f: HoloFn, x):
    """Rf(x) = sum_i x_i d_i f(x) = f'(x)(x)."""
    x = coords(x)
    return _scalar(np.sum(x * f.grad(x), axis=-1))


def _parts(f: HoloFn, x: np.ndarray):
    g = f.grad(x)
    w = 1.0 - np.sum(x.real**2 + x.imag**2, axis=-1)
    gg = np.sum(g.real**2 + g.imag**2, axis=-1)
    rf = np.sum(x * g, axis=-1)
    return w, gg, rf


def invariant_gradient_norm(f: HoloFn, x):
    """|invariant gradient of f at x| = sqrt((1-|x|^2)(|grad f|^2 - |Rf|^2))."""
    x = coords(x)
    w, gg, rf = _parts(f, x)
    rad = gg - np.abs(rf) ** 2
    if np.any(rad < -1e-12 * np.maximum(gg, 1.0)):
        raise ArithmeticError("negative radicand in the invariant gradient")
    return _scalar(np.sqrt(w * np.maximum(rad, 0.0)))


def invariant_gradient_sup(f: HoloFn, x, directions: int = 1000, seed: int = 0, ascent_steps: int = 300) -> float:
    """sup_w |f'(x) w| / |phi_x'(0)^{-1} w| by direct search over directions.

    Independent of the closed form in :func:`invariant_gradient_norm`. The
    search runs over w = phi_x'(0) u with the Jacobian from
    :func:`~blochball.mobius.deriv0`, so the denominator is |u| and the
    problem stays well conditioned near the sphere. Random unit directions
    seed a projected ascent on the sphere.
    """
    from .mobius import MobiusMap, deriv0

    x = coords(x)
    n = x.size
    g = f.grad(x)
    j0 = deriv0(MobiusMap(BallPoint(x)))
    gj = g @ j0
    rng = derive_rng(seed, "igsup")
    u = random_directions(rng, n, directions)

    def obj(v):
        uc = to_complex(v)
        return np.abs(uc @ gj) / np.linalg.norm(uc, axis=-1)

    def proj(v):
        return v / np.maximum(np.linalg.norm(v, axis=-1, keepdims=True), 1e-300)

    vals = obj(to_real(u))
    top = np.argsort(vals)[-8:]
    res = projected_ascent(obj, to_real(u[top]), proj, steps=ascent_steps, step0=0.1)
    return float(max(np.nanmax(vals), res.values.max()))


def dilation(f: HoloFn, x):
    """(1 - |x|^2) Rf(x)."""
    x = coords(x)
    w = 1.0 - np.sum(x.real**2 + x.imag**2, axis=-1)
    return _scalar(w * np.sum(x * f.grad(x), axis=-1))


Which = Literal["B", "R", "I"]


def seminorm_objective(f: HoloFn, which: Which, x: np.ndarray) -> np.ndarray:
    """Pointwise quantity whose supremum is the requested semi-norm."""
    w, gg, rf = _parts(f, x)
    if which == "B":
        return w * np.sqrt(gg)
    if which == "R":
        return w * np.abs(rf)
    if which == "I":
        return np.sqrt(w * np.maximum(gg - np.abs(rf) ** 2, 0.0))
    raise ValueError(f"unknown semi-norm {which!r}")


@dataclass(frozen=True)
class SamplingBudget:
    samples: int = 4000
    ascent_starts: int = 8
    ascent_steps: int = 150
    seed: int = 0
    method: Literal["grid", "random", "random+ascent"] = "random+ascent"


@dataclass(frozen=True, eq=False)
class SeminormEstimate:
    """Lower-bound estimate of a Bloch semi-norm with the point attaining it."""

    value: float
    witness: BallPoint
    samples: int
    method: str
    which: str = ""


def sample_points(n: int, budget: SamplingBudget, key="seminorm") -> np.ndarray:
    """The evaluation set of an estimator: origin plus seeded samples (or a grid)."""
    if budget.method == "grid":
        k = max(int(np.sqrt(budget.samples)), 2)
        r = np.concatenate([np.linspace(0, 0.9, k // 2, endpoint=False), 1 - np.logspace(-1, -9, k - k // 2)])
        t = np.linspace(0, 2 * np.pi, k, endpoint=False)
        z = (r[:, None] * np.exp(1j * t)[None, :]).reshape(-1)
        pts = np.zeros((z.size, n), dtype=complex)
        pts[:, 0] = z
        return pts
    rng = derive_rng(budget.seed, key, n)
    return np.concatenate([np.zeros((1, n), dtype=complex), random_ball(rng, n, budget.samples)])


def _ball_projector(v):
    return to_real(clip_to_ball(to_complex(v)))


def _maximise(f: HoloFn, which: Which, pts: np.ndarray, budget: SamplingBudget):
    vals = seminorm_objective(f, which, pts)
    i = int(np.argmax(vals))
    best_x, best_v = pts[i], float(vals[i])
    if budget.method == "random+ascent" and budget.ascent_starts > 0:
        top = np.argsort(vals)[-budget.ascent_starts:]
        res = projected_ascent(
            lambda v: seminorm_objective(f, which, to_complex(v)),
            to_real(pts[top]),
            _ball_projector,
            steps=budget.ascent_steps,
        )
        xr, v = res.best
        if v > best_v:
            best_x, best_v = to_complex(xr), v
    return best_x, best_v


def seminorm(f: HoloFn, which: Which = "B", budget: SamplingBudget = SamplingBudget(), points=None) -> SeminormEstimate:
    """Estimate |f|_B, |f|_R or |f|_I from below.

    ``points`` (optional) replaces the seeded sample set; ascent still runs
    when the budget asks for it.
    """
    pts = sample_points(f.dim, budget) if points is None else np.asarray(points, dtype=complex)
    x, v = _maximise(f, which, pts, budget)
    # recompute at the witness so value and witness agree exactly
    x = clip_to_ball(x)
    v = float(seminorm_objective(f, which, x[None])[0])
    return SeminormEstimate(value=v, witness=BallPoint(x), samples=len(pts), method=budget.method, which=which)


def seminorm_profile(f: HoloFn, budget: SamplingBudget = SamplingBudget(), points=None) -> dict[str, SeminormEstimate]:
    """R, B and I estimates on one shared evaluation set.

    The three searches' witnesses are pooled into the sample set before the
    final maxima are taken, so R <= B <= I holds exactly because the
    pointwise quantities are ordered.
    """
    pts = sample_points(f.dim, budget) if points is None else np.asarray(points, dtype=complex)
    wit = [clip_to_ball(_maximise(f, w, pts, budget)[0]) for w in ("R", "B", "I")]
    pool = np.concatenate([pts, np.array(wit)])
    out = {}
    for which in ("R", "B", "I"):
        vals = seminorm_objective(f, which, pool)
        i = int(np.argmax(vals))
        out[which] = SeminormEstimate(float(vals[i]), BallPoint(pool[i]), len(pool), budget.method, which)
    return out


def estimate_A0(family: Sequence[HoloFn], budget: SamplingBudget = SamplingBudget()) -> float:
    """max over the family of |f|_I / |f|_R (a reported lower estimate of A_0)."""
    best = 0.0
    for f in family:
        prof = seminorm_profile(f, budget)
        if prof["R"].value > 0:
            best = max(best, prof["I"].value / prof["R"].value)
    return best


# ------------------------------------------------------- Lipschitz checks


def lipschitz_defect(f: HoloFn, x, y, seminorm_I: float):
    """|dil(x) - dil(y)| - 14 |f|_I rho(x, y); nonpositive when the bound holds."""
    lhs = np.abs(np.asarray(dilation(f, x)) - np.asarray(dilation(f, y)))
    return _scalar(lhs - LIPSCHITZ_CONSTANT * seminorm_I * np.asarray(rho_ball(x, y)))


def lipschitz_ratio(f: HoloFn, x, y, seminorm_I: float):
    """|dil(x) - dil(y)| / (|f|_I rho(x, y)); the quantity bounded by 14."""
    lhs = np.abs(np.asarray(dilation(f, x)) - np.asarray(dilation(f, y)))
    return _scalar(lhs / (seminorm_I * np.asarray(rho_ball(x, y))))


def modulus_lipschitz_defect(f: HoloFn, x, y, seminorm_I: float):
    """Same as :func:`lipschitz_defect` for the modulus | (1-|x|^2) Rf(x) |."""
    lhs = np.abs(np.abs(np.asarray(dilation(f, x))) - np.abs(np.asarray(dilation(f, y))))
    return _scalar(lhs - LIPSCHITZ_CONSTANT * seminorm_I * np.asarray(rho_ball(x, y)))


def intermediate_defect(f: HoloFn, x, y, seminorm_I: float):
    """(1-|x|^2)|Rf(x) - Rf(y)| - 12 |f|_I rho(x, y) with x the larger point.

    Arguments are swapped row-wise so that |x| >= |y| always.
    """
    x, y = coords(x), coords(y)
    nx = np.linalg.norm(x, axis=-1)
    ny = np.linalg.norm(y, axis=-1)
    swap = (ny > nx)[..., None]
    big, small = np.where(swap, y, x), np.where(swap, x, y)
    w = 1.0 - np.sum(np.abs(big) ** 2, axis=-1)
    lhs = w * np.abs(np.asarray(radial_derivative(f, big)) - np.asarray(radial_derivative(f, small)))
    return _scalar(lhs - INTERMEDIATE_CONSTANT * seminorm_I * np.asarray(rho_ball(big, small)))


def beta_lipschitz_defect(f: HoloFn, x, y, seminorm_I: float):
    """|f(x) - f(y)| - |f|_I beta(x, y)."""
    lhs = np.abs(np.asarray(f.eval(coords(x))) - np.asarray(f.eval(coords(y))))
    return _scalar(lhs - seminorm_I * np.asarray(beta_from_rho(rho_ball(x, y))))


def cauchy_epsilon(x) -> float:
    """The radius (1 - |x|) / (2 |x|) that keeps (1 + eps u) x inside the ball."""
    r = float(np.linalg.norm(coords(x)))
    if r == 0:
        raise ValueError("epsilon is undefined at the origin")
    return (1.0 - r) / (2.0 * r)


@dataclass(frozen=True)
class CauchyReport:
    holds: bool
    lhs: float
    rhs: float
    margin: float
    u0: complex
    circle_samples: int


def cauchy_lemma_check(
    f: HoloFn, x, y, eps: float, seminorm_I: float, circle_samples: int = 256, tol: float = 1e-9, max_samples: int = 1 << 16
) -> CauchyReport:
    """|Rf(x) - Rf(y)| <= (1/eps) |f|_I max_{|u|=1} beta((1+eps u) x, (1+eps u) y).

    The circle grid is doubled until the maximum stabilises to 1e-8.
    """
    x, y = coords(x), coords(y)
    if (1.0 + eps) * max(np.linalg.norm(x), np.linalg.norm(y)) >= 1.0:
        raise ValueError("(1 + eps u) x or (1 + eps u) y leaves the ball")
    lhs = float(abs(radial_derivative(f, x) - radial_derivative(f, y)))

    def circle_max(k):
        u = np.exp(2j * np.pi * np.arange(k) / k)
        zs = (1.0 + eps * u)[:, None]
        b = beta_from_rho(rho_ball(zs * x, zs * y))
        i = int(np.argmax(b))
        return float(b[i]), complex(u[i])

    k = circle_samples
    prev, u0 = circle_max(k)
    while k < max_samples:
        k *= 2
        cur, u0 = circle_max(k)
        if abs(cur - prev) <= 1e-8:
            prev = cur
            break
        prev = cur
    rhs = seminorm_I * prev / eps
    return CauchyReport(lhs <= rhs + tol, lhs, rhs, rhs - lhs, u0, k)


def growth_bound_check(f: HoloFn, x, seminorm_B: float, tol: float = 1e-9) -> tuple[bool, float, float]:
    """|f(x) - f(0)| <= |x| |f|_B / (1 - |x|^2); returns (holds, lhs, rhs)."""
    x = coords(x)
    lhs = float(abs(f(x) - f(np.zeros_like(x))))
    r = float(np.linalg.norm(x))
    rhs = r * seminorm_B / (1.0 - r * r)
    return lhs <= rhs + tol, lhs, rhs


def function_family(n: int, seed: int = 0, size: int = 6) -> list[HoloFn]:
    """A seeded mix of every function family in dimension n."""
    from .mobius import MobiusMap  # local: mobius does not depend on holo

    rng = derive_rng(seed, "family", n)
    pts = random_ball(rng, n, 4 * size, r_max=0.95)
    dirs = random_directions(rng, n, size)
    fams: list[HoloFn] = []
    for k in range(size):
        b = dirs[k] * (0.5 + rng.random())
        y = pts[k]
        c = Cayley(y)
        lg = LogCayley(dirs[(k + 1) % size])
        alpha = tuple(int(a) for a in rng.integers(0, 3, n))
        if sum(alpha) == 0:
            alpha = (1,) + alpha[1:]
        mono = Monomial(alpha)
        phi = MobiusMap(BallPoint(pts[size + k]))
        pre = Precomposed(Cayley(pts[2 * size + k]), phi)
        combo = Combination([(1.0, Linear(b)), (0.3 - 0.2j, Cayley(pts[3 * size + k]))], const=0.5)
        fams.extend([Linear(b), c, lg, mono, pre, combo])
    return fams
