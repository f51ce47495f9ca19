"""Ball automorphisms phi_a and the derivative quantities built on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BallPoint, coords, _check_dims, _scalar


def _num(c: complex) -> str:
    return f"{c.real:.6g}" if c.imag == 0 else f"{c.real:.6g}{c.imag:+.6g}j"


def _phi(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    # (s Q_a + P_a) m = s m + <m, a> a / (1 + s); the form has no 1/|a|^2
    # so a = 0 (phi_0 = -Id) needs no special casing.
    na = np.sum(a.real**2 + a.imag**2, axis=-1, keepdims=True)
    s = np.sqrt(1.0 - na)
    d = 1.0 - np.sum(y * np.conj(a), axis=-1, keepdims=True)
    m = (a - y) / d
    ma = np.sum(m * np.conj(a), axis=-1, keepdims=True)
    return s * m + ma * a / (1.0 + s)


def _unit(a: np.ndarray) -> np.ndarray:
    """a / |a| along the last axis (zero rows stay zero), safe for tiny |a|."""
    m = np.max(np.abs(a), axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    # real division avoids the overflow of complex division by a subnormal
    b = a.real / safe + 1j * (a.imag / safe)
    return b / np.where(m > 0, np.linalg.norm(b, axis=-1, keepdims=True), 1.0)


def _phi_jacobian(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Complex Jacobian of phi_a at y, shape (..., n, n).

    Written as -(s d Q + s Q(y) a^H + s^2 P) / d^2 with d = 1 - <y, a>; the
    expanded form -d I + (a - y) a^H cancels badly when |a| is near 1.
    """
    n = a.shape[-1]
    na = np.sum(a.real**2 + a.imag**2, axis=-1)[..., None, None]
    t = 1.0 - na
    s = np.sqrt(t)
    d = (1.0 - np.sum(y * np.conj(a), axis=-1))[..., None, None]
    # P from the unit vector: dividing by |a|^2 overflows for tiny a
    u = _unit(a)
    p = u[..., :, None] * np.conj(u[..., None, :])
    q = np.eye(n) - p
    qy = y - np.einsum("...ij,...j->...i", p, y)
    return -(s * d * q + s * qy[..., :, None] * np.conj(a[..., None, :]) + t * p) / d**2


@dataclass(frozen=True, eq=False)
class MobiusMap:
    """The automorphism phi_a, optionally followed by a unitary U."""

    kind = "mobius"

    center: BallPoint
    unitary: np.ndarray | None = None

    def __post_init__(self):
        if not isinstance(self.center, BallPoint):
            object.__setattr__(self, "center", BallPoint(self.center))
        if self.unitary is not None:
            u = np.array(self.unitary, dtype=complex)
            n = self.center.dim
            if u.shape != (n, n) or not np.allclose(u.conj().T @ u, np.eye(n), atol=1e-10):
                raise ValueError("unitary must be an n x n unitary matrix")
            u.setflags(write=False)
            object.__setattr__(self, "unitary", u)

    @property
    def dim(self) -> int:
        return self.center.dim

    @property
    def s(self) -> float:
        return float(np.sqrt(1.0 - self.center.norm**2))

    def apply(self, y) -> np.ndarray:
        y = coords(y)
        _check_dims(y, self.center.coords)
        out = _phi(self.center.coords, y)
        if self.unitary is not None:
            out = out @ self.unitary.T
        return out

    __call__ = apply

    def jacobian(self, y) -> np.ndarray:
        y = coords(y)
        _check_dims(y, self.center.coords)
        j = _phi_jacobian(self.center.coords, y)
        if self.unitary is not None:
            j = self.unitary @ j
        return j

    def defect(self, y) -> np.ndarray:
        """1 - |phi(y)|^2 via (1-|a|^2)(1-|y|^2)/|1-<y,a>|^2, accurate near the sphere."""
        y = coords(y)
        a = self.center.coords
        ny = np.sum(y.real**2 + y.imag**2, axis=-1)
        d = np.abs(1.0 - np.sum(y * np.conj(a), axis=-1)) ** 2
        t = 1.0 - np.sum(a.real**2 + a.imag**2)
        return _scalar(t * (1.0 - ny) / d)

    def describe(self) -> str:
        return "mobius:a=" + ",".join(_num(c) for c in self.center.coords)

    def preimage(self, y) -> np.ndarray:
        y = coords(y)
        if self.unitary is not None:
            y = y @ np.conj(self.unitary)
        return _phi(self.center.coords, y)


def mobius_apply(phi: MobiusMap, y):
    """phi(y); returns a BallPoint for BallPoint input, an array otherwise."""
    out = phi.apply(y)
    return BallPoint(out) if isinstance(y, BallPoint) else out


def project_P(a, y):
    """Orthogonal projection of y onto span{a}; the zero map when a = 0."""
    a, y = coords(a), coords(y)
    _check_dims(a, y)
    u = _unit(a)
    return np.sum(y * np.conj(u), axis=-1, keepdims=True) * u


def project_Q(a, y):
    """Complementary projection y - P_a(y)."""
    return coords(y) - project_P(a, y)


def deriv0(phi: MobiusMap) -> np.ndarray:
    """Derivative of phi at 0 as a dense n x n matrix."""
    return phi.jacobian(np.zeros(phi.dim, dtype=complex))


def deriv_at(phi: MobiusMap, x) -> np.ndarray:
    """Derivative of phi at x as a dense n x n matrix."""
    return phi.jacobian(coords(x))


def inv_deriv0_norm_sq(a, w, defect=None):
    """|phi_a'(0)^{-1} w|^2 = ((1-|a|^2)|w|^2 + |<w,a>|^2) / (1-|a|^2)^2.

    ``defect`` may supply 1 - |a|^2 when the caller knows it more accurately.
    """
    a, w = coords(a), coords(w)
    _check_dims(a, w)
    t = 1.0 - np.sum(a.real**2 + a.imag**2, axis=-1) if defect is None else np.asarray(defect)
    ww = np.sum(w.real**2 + w.imag**2, axis=-1)
    wa = np.abs(np.sum(w * np.conj(a), axis=-1)) ** 2
    return _scalar((t * ww + wa) / t**2)


def bc_parts(psi, x, w):
    """(B, C) for a self-map psi at x in direction w (both broadcastable).

    B = |phi_{psi(x)}'(0)^{-1}(psi'(x) w)|, C = |phi_x'(0)^{-1} w|.
    """
    x, w = coords(x), coords(w)
    px = psi.apply(x)
    jw = np.einsum("...ij,...j->...i", psi.jacobian(x), w)
    dfn = getattr(psi, "defect", None)
    b = np.sqrt(inv_deriv0_norm_sq(px, jw, None if dfn is None else dfn(x)))
    c = np.sqrt(inv_deriv0_norm_sq(x, w))
    return b, c


def quotient_BC(psi, x, w):
    """B(x, w) / C(x, w); at most 1 for any analytic self-map."""
    w_arr = coords(w)
    if np.any(np.linalg.norm(w_arr, axis=-1) == 0):
        raise ValueError("direction w must be nonzero")
    b, c = bc_parts(psi, x, w_arr)
    return _scalar(np.asarray(b / c))
