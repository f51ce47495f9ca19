"""Multi-start projected gradient ascent used by the sup estimators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass
class AscentResult:
    points: np.ndarray  # (K, d) best parameters per start
    values: np.ndarray  # (K,)
    iterations: int

    @property
    def best(self) -> tuple[np.ndarray, float]:
        i = int(np.argmax(self.values))
        return self.points[i], float(self.values[i])


def projected_ascent(
    objective: Callable[[np.ndarray], np.ndarray],
    starts: np.ndarray,
    project: Callable[[np.ndarray], np.ndarray] = lambda v: v,
    steps: int = 200,
    step0: float = 0.05,
    h: float = 1e-7,
    min_step: float = 1e-13,
    constraint: Callable[[np.ndarray], np.ndarray] | None = None,
) -> AscentResult:
    """Maximise ``objective`` from every row of ``starts``.

    ``objective`` maps real parameter rows (M, d) to values (M,) and must be
    vectorised. Gradients are central differences evaluated in one batch;
    steps follow the normalised gradient, are projected back onto the
    feasible set and only accepted when they improve the value (step halves
    on rejection, grows by 1.5 on acceptance). Values never decrease.

    With ``constraint`` (vectorised, feasible where >= 0) an infeasible
    candidate is first pulled back by a few Newton steps along the
    constraint gradient, which lets iterates slide along the boundary.
    """
    def f(v):
        out = np.asarray(objective(v), dtype=float)
        return np.where(np.isfinite(out), out, -np.inf)

    x = project(np.array(starts, dtype=float))
    k, d = x.shape
    fx = f(x)
    lr = np.full(k, step0)
    eye = np.eye(d) * h
    it = 0
    for it in range(1, steps + 1):
        active = lr > min_step
        if not active.any():
            break
        xa = x[active]
        pert = np.concatenate([xa[:, None, :] + eye, xa[:, None, :] - eye], axis=1)
        fp = f(project(pert.reshape(-1, d))).reshape(xa.shape[0], 2, d)
        fa = fx[active][:, None]
        # one-sided differences where the other side leaves the feasible set
        with np.errstate(invalid="ignore"):
            g = np.where(np.isfinite(fp[:, 0]) & np.isfinite(fp[:, 1]), (fp[:, 0] - fp[:, 1]) / (2 * h),
                         np.where(np.isfinite(fp[:, 0]), (fp[:, 0] - fa) / h, (fa - fp[:, 1]) / h))
        g = np.where(np.isfinite(g), g, 0.0)
        gn = np.linalg.norm(g, axis=1, keepdims=True)
        direction = np.where(gn > 0, g / np.where(gn > 0, gn, 1.0), 0.0)
        cand = project(xa + lr[active, None] * direction)
        if constraint is not None:
            cand = _restore(constraint, cand, project, h)
        fc = f(cand)
        better = fc > fx[active]
        idx = np.flatnonzero(active)
        x[idx[better]] = cand[better]
        fx[idx[better]] = fc[better]
        lr[idx[better]] *= 1.5
        lr[idx[~better]] *= 0.5
    return AscentResult(points=x, values=fx, iterations=it)


def _restore(constraint, v, project, h, rounds: int = 4):
    """Newton steps on c(v) = 0 for the rows with c(v) < 0."""
    d = v.shape[1]
    eye = np.eye(d) * h
    for _ in range(rounds):
        c = np.asarray(constraint(v), dtype=float)
        bad = np.isfinite(c) & (c < 0)
        if not bad.any():
            break
        vb = v[bad]
        pert = np.concatenate([vb[:, None, :] + eye, vb[:, None, :] - eye], axis=1).reshape(-1, d)
        cp = np.asarray(constraint(project(pert)), dtype=float).reshape(vb.shape[0], 2, d)
        g = (cp[:, 0] - cp[:, 1]) / (2 * h)
        gg = np.sum(g * g, axis=1, keepdims=True)
        # overshoot slightly so the restored point is strictly feasible
        step = np.where(gg > 0, -c[bad, None] * 1.0001 / np.where(gg > 0, gg, 1.0), 0.0) * g
        v = v.copy()
        v[bad] = project(vb + step)
    return v
