"""Pseudohyperbolic and hyperbolic geometry of the unit ball of C^n.

Every function here accepts either :class:`BallPoint` instances or plain
complex arrays whose last axis holds the coordinates, so the same code path
serves single evaluations and vectorised scans over many pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sampling import BOUNDARY_EPS

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A point of the open unit ball of C^n, validated at construction."""

    coords: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        c = np.array(self.coords, dtype=complex).reshape(-1)
        if c.size == 0:
            raise ValueError("BallPoint needs dimension >= 1")
        nrm = float(np.linalg.norm(c))
        if not np.isfinite(nrm) or nrm > 1.0 - BOUNDARY_EPS + 1e-15:
            raise ValueError(f"point of norm {nrm!r} is not inside the ball (limit 1 - {BOUNDARY_EPS})")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "norm", nrm)

    @classmethod
    def of(cls, *coords) -> "BallPoint":
        return cls(np.array(coords, dtype=complex))

    @classmethod
    def zeros(cls, n: int) -> "BallPoint":
        return cls(np.zeros(n, dtype=complex))

    @classmethod
    def basis(cls, n: int, i: int, scale: complex = 1.0) -> "BallPoint":
        c = np.zeros(n, dtype=complex)
        c[i] = scale
        return cls(c)

    @property
    def dim(self) -> int:
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __mul__(self, z) -> "BallPoint":
        return BallPoint(complex(z) * self.coords)

    __rmul__ = __mul__

    def __repr__(self):
        return f"BallPoint({np.array2string(self.coords, precision=6)})"


def coords(x) -> np.ndarray:
    """Coordinates of ``x`` as a complex array (no copy for BallPoint)."""
    if isinstance(x, BallPoint):
        return x.coords
    return np.asarray(x, dtype=complex)


def _check_dims(x: np.ndarray, y: np.ndarray):
    if x.shape[-1:] != y.shape[-1:]:
        raise ValueError(f"dimension mismatch: {x.shape[-1:]} vs {y.shape[-1:]}")


def _scalar(v):
    return v.item() if isinstance(v, np.ndarray) and v.ndim == 0 else v


def inner(x, y):
    """Hermitian pairing <x, y> = sum_i x_i conj(y_i)."""
    x, y = coords(x), coords(y)
    _check_dims(x, y)
    return _scalar(np.sum(x * np.conj(y), axis=-1))


def norm_sq(x):
    x = coords(x)
    return _scalar(np.sum(x.real**2 + x.imag**2, axis=-1))


def rho_disk(z, w):
    """Pseudohyperbolic distance |z - w| / |1 - conj(z) w| on the unit disk."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(z) >= 1.0) or np.any(np.abs(w) >= 1.0):
        raise ValueError("rho_disk arguments must lie in the open unit disk")
    return _scalar(np.abs(z - w) / np.abs(1.0 - np.conj(z) * w))


def rho_ball_sq(x, y):
    """Squared pseudohyperbolic distance on the ball.

    Uses 1 - (1-|x|^2)(1-|y|^2)/|1-<x,y>|^2 rearranged as
    ((1-|x|^2)|x-y|^2 + |<x-y, x>|^2) / |1-<x,y>|^2, a sum of nonnegative
    terms that keeps full relative accuracy when x and y are close.
    """
    x, y = coords(x), coords(y)
    _check_dims(x, y)
    d = x - y
    nx = np.sum(x.real**2 + x.imag**2, axis=-1)
    dd = np.sum(d.real**2 + d.imag**2, axis=-1)
    dx = np.sum(d * np.conj(x), axis=-1)
    den = np.abs(1.0 - np.sum(x * np.conj(y), axis=-1)) ** 2
    num = (1.0 - nx) * dd + np.abs(dx) ** 2
    return _scalar(np.clip(num / den, 0.0, 1.0))


def rho_ball(x, y):
    """Pseudohyperbolic distance rho(x, y) on the ball of C^n."""
    return _scalar(np.sqrt(rho_ball_sq(x, y)))


def rho_ball_naive(x, y):
    """Pseudohyperbolic distance straight from the textbook closed form."""
    x, y = coords(x), coords(y)
    _check_dims(x, y)
    nx = np.sum(np.abs(x) ** 2, axis=-1)
    ny = np.sum(np.abs(y) ** 2, axis=-1)
    q = (1 - nx) * (1 - ny) / np.abs(1 - np.sum(x * np.conj(y), axis=-1)) ** 2
    return _scalar(np.sqrt(np.clip(1.0 - q, 0.0, 1.0)))


def beta_from_rho(rho):
    """Hyperbolic distance 1/2 log((1+rho)/(1-rho))."""
    with np.errstate(divide="ignore"):
        return _scalar(np.arctanh(np.asarray(rho, dtype=float)))


def beta_ball(x, y):
    """Hyperbolic distance on the ball."""
    return beta_from_rho(rho_ball(x, y))


def z_bound(x, y):
    """Admissible dilation radius (1 + M) / (2 M), M = max(|x|, |y|)."""
    x, y = coords(x), coords(y)
    m = np.maximum(np.linalg.norm(x, axis=-1), np.linalg.norm(y, axis=-1))
    if np.any(m == 0.0):
        raise ValueError("z_bound is undefined when x = y = 0")
    return _scalar((1.0 + m) / (2.0 * m))


@dataclass(frozen=True, eq=False)
class RatioProbe:
    """A dilation factor z and a pair x != y whose dilates stay in the ball."""

    z: complex
    x: BallPoint
    y: BallPoint

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if self.x.dim != self.y.dim:
            raise ValueError("probe points must have the same dimension")
        if self.z == 0:
            raise ValueError("dilation factor must be nonzero")
        if np.array_equal(self.x.coords, self.y.coords):
            raise ValueError("probe needs x != y")
        if abs(self.z) * max(self.x.norm, self.y.norm) >= 1.0:
            raise ValueError("scaled points leave the ball")

    @property
    def admissible(self) -> bool:
        """Whether |z| is within :func:`z_bound` for this pair."""
        return abs(self.z) <= z_bound(self.x, self.y)


def scaling_ratio_arrays(z, x, y):
    """rho(zx, zy) / (|z| rho(x, y)) on broadcast arrays."""
    z = np.asarray(z, dtype=complex)
    x, y = coords(x), coords(y)
    zx = z[..., None] * x
    zy = z[..., None] * y
    return _scalar(rho_ball(zx, zy) / (np.abs(z) * rho_ball(x, y)))


def scaling_ratio(probe: RatioProbe) -> float:
    """rho(zx, zy) / (|z| rho(x, y)) for a validated probe."""
    return float(scaling_ratio_arrays(probe.z, probe.x.coords, probe.y.coords))
