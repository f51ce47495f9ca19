"""C_0(S) on a finite index set S: sup-norm vectors and their pseudohyperbolic distance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import DEFAULT_TOL, rho_disk
from .lab import SCALING_BOUND, Check, ScanResult
from .sampling import derive_rng


@dataclass(frozen=True, eq=False)
class FiniteC0Vector:
    """Complex values on the sites of a finite set, with sup-norm < 1."""

    values: np.ndarray
    sup_norm: float = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        m = float(np.max(np.abs(v))) if v.size else 0.0
        if v.size == 0:
            raise ValueError("S must have at least one site")
        if m >= 1.0:
            raise ValueError(f"sup-norm {m} is not below 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sup_norm", m)

    def __len__(self):
        return self.values.size


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, FiniteC0Vector) else np.asarray(x, dtype=complex)


def rho_c0s(x, y):
    """max over sites of the disk distance rho(x_t, y_t)."""
    a, b = _values(x), _values(y)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError("vectors live on different index sets")
    out = np.max(rho_disk(a, b), axis=-1)
    return out.item() if np.ndim(out) == 0 else out


def c0s_bound(x, y):
    """(1 + M) / (2 M) with M the larger sup-norm."""
    m = np.maximum(np.max(np.abs(_values(x)), axis=-1), np.max(np.abs(_values(y)), axis=-1))
    return (1.0 + m) / (2.0 * m)


def site_bounds(x) -> np.ndarray:
    """Per-site admissible radii (1 + |x_t|) / (2 |x_t|); +inf where x_t = 0."""
    a = np.abs(_values(x))
    with np.errstate(divide="ignore"):
        return np.where(a > 0, (1.0 + a) / (2.0 * a), np.inf)


def c0s_scaling_check(x: FiniteC0Vector, y: FiniteC0Vector, z: complex, tol: float = DEFAULT_TOL) -> Check:
    """rho(zx, zy) <= 2 |z| rho(x, y) for |z| within the sup-norm bound."""
    if len(x) != len(y):
        raise ValueError("vectors live on different index sets")
    if abs(z) > c0s_bound(x, y) * (1 + 1e-15):
        raise ValueError("|z| exceeds the admissible bound")
    lhs = rho_c0s(z * x.values, z * y.values)
    rhs = SCALING_BOUND * abs(z) * rho_c0s(x, y)
    return Check(float(lhs), float(rhs), tol)


def random_c0s(rng: np.random.Generator, sites: int, size: int) -> np.ndarray:
    """Rows of ``sites`` values with sup-norm in (0, 1), several sites near the max."""
    mod = rng.random((size, sites))
    top = 1.0 - 10.0 ** (-1.0 - 8.0 * rng.random(size))
    mod = mod * top[:, None]
    return mod * np.exp(2j * np.pi * rng.random((size, sites)))


def c0s_scan(sites: int, samples: int, seed: int, tol: float = DEFAULT_TOL) -> tuple[ScanResult, int]:
    """Randomised scaling check on ``samples`` pairs; also returns the number
    of site-wise hypothesis failures (expected 0)."""
    rng = derive_rng(seed, "c0s", sites)
    x = random_c0s(rng, sites, samples)
    y = random_c0s(rng, sites, samples)
    flip = rng.random(samples) < 0.3
    y[flip] = -x[flip] * rng.random((flip.sum(), 1))
    zb = c0s_bound(x, y)
    w = np.where(rng.random(samples) < 0.3, 10.0 ** (-4.0 * rng.random(samples)), rng.random(samples))
    w = np.where(rng.random(samples) < 0.2, 1.0, w)
    z = zb * w * np.exp(2j * np.pi * rng.random(samples))
    base = rho_c0s(x, y)
    keep = base > 0
    x, y, z, base = x[keep], y[keep], z[keep], base[keep]
    lhs = rho_c0s(z[:, None] * x, z[:, None] * y)
    ratio = lhs / (np.abs(z) * base)
    bad = ratio > SCALING_BOUND + tol
    # every site inherits the hypothesis from the sup-norm
    zabs = np.abs(z)[:, None]
    lim = np.minimum(site_bounds(x), site_bounds(y)) * (1 + 1e-12)
    site_fail = int(np.sum(np.any(zabs > lim, axis=1)))
    i = int(np.argmax(ratio))
    res = ScanResult("c0s-scaling", sites, int(keep.sum()), int(bad.sum()), float(SCALING_BOUND - ratio[i]), float(ratio[i]),
                     SCALING_BOUND, {"x": x[i], "y": y[i], "z": z[i]}, seed)
    return res, site_fail
