"""Seeded random generation of points in the complex unit ball."""

from __future__ import annotations

import zlib

import numpy as np

BOUNDARY_EPS = 1e-9
R_MAX = 1.0 - BOUNDARY_EPS


def derive_rng(seed: int, *keys) -> np.random.Generator:
    """Generator for a named sub-stream of ``seed``.

    Keys may be ints or strings; strings are hashed with crc32 so the stream
    does not depend on interpreter hash randomisation or execution order.
    """
    spawn = tuple(k if isinstance(k, int) else zlib.crc32(str(k).encode()) for k in keys)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn))


def random_directions(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """Uniform points on the unit sphere of C^n, shape (size, n)."""
    g = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def random_radii(rng: np.random.Generator, size: int, r_max: float = R_MAX) -> np.ndarray:
    """Radii in [0, r_max] with extra mass near the boundary.

    A third uniform on [0, r_max], a third uniform on [0.9, r_max] and a
    third with 1 - r log-uniform on [1e-9, 0.1].
    """
    which = rng.integers(0, 3, size)
    r = np.empty(size)
    u = rng.random(size)
    r[which == 0] = u[which == 0] * r_max
    r[which == 1] = 0.9 + u[which == 1] * (r_max - 0.9)
    gap = 10.0 ** (-1.0 - 8.0 * u[which == 2])
    r[which == 2] = 1.0 - gap
    return np.minimum(r, r_max)


def random_ball(rng: np.random.Generator, n: int, size: int, r_max: float = R_MAX) -> np.ndarray:
    """Random points of the ball B_n, shape (size, n), boundary-weighted."""
    return random_directions(rng, n, size) * random_radii(rng, size, r_max)[:, None]


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random unitary matrix (QR of a complex Gaussian with phase fix)."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def to_real(z: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts along the last axis: (..., n) -> (..., 2n)."""
    return np.concatenate([z.real, z.imag], axis=-1)


def to_complex(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_real`."""
    n = v.shape[-1] // 2
    return v[..., :n] + 1j * v[..., n:]


def clip_to_ball(z: np.ndarray, r_max: float = R_MAX) -> np.ndarray:
    """Radially project points with norm above ``r_max`` back to that sphere."""
    nrm = np.linalg.norm(z, axis=-1, keepdims=True)
    scale = np.where(nrm > r_max, r_max / np.maximum(nrm, 1e-300), 1.0)
    return z * scale


def uniform_ball(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """Points uniformly distributed (by volume) in B_n, shape (size, n)."""
    r = rng.random(size) ** (1.0 / (2 * n))
    return random_directions(rng, n, size) * np.minimum(r, R_MAX)[:, None]
