"""Simulated users: noise-free preference answers and gradient-driven suggestions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .objectives import ObjectiveTable


def preference_oracle(table: ObjectiveTable, a: int, b: int):
    """Index of the strictly-higher-utility action, or None on an exact tie."""
    va = table.values[table.space.check_index(a)]
    vb = table.values[table.space.check_index(b)]
    if va > vb:
        return a
    if vb > va:
        return b
    return None


def gradient_table(table: ObjectiveTable):
    """Second-order finite-difference gradient at every grid action.

    Interior points use central differences, boundary points the one-sided
    three-point stencils, so the estimate is exact for quadratics.  Returns
    (gradients, flagged) where gradients has shape (A, d) and flagged marks
    dimensions with fewer than 3 points (their column is zero).
    """
    space = table.space
    cube = table.values.reshape(space.shape)
    grads = np.zeros((space.size, space.ndim))
    flagged = [False] * space.ndim
    for d in range(space.ndim):
        count = space.shape[d]
        if count < 3:
            flagged[d] = True
            continue
        h = space.axes[d][1] - space.axes[d][0]
        moved = np.moveaxis(cube, d, 0)
        out = np.empty_like(moved)
        out[1:-1] = (moved[2:] - moved[:-2]) / (2.0 * h)
        out[0] = (-3.0 * moved[0] + 4.0 * moved[1] - moved[2]) / (2.0 * h)
        out[-1] = (3.0 * moved[-1] - 4.0 * moved[-2] + moved[-3]) / (2.0 * h)
        grads[:, d] = np.moveaxis(out, 0, d).reshape(-1)
    return grads, flagged


@dataclass
class CoactiveOracleConfig:
    """Per-dimension gradient-magnitude thresholds for simulated suggestions.

    Components all at or below their median magnitude produce no feedback;
    otherwise the largest-magnitude component drives a small (5% of range)
    or, above the 75th percentile, large (10%) step uphill.
    """

    p50: np.ndarray
    p75: np.ndarray
    small_step: float = 0.05
    large_step: float = 0.10
    gradients: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.p50 = np.asarray(self.p50, dtype=float)
        self.p75 = np.asarray(self.p75, dtype=float)
        if np.any(self.p50 < 0) or np.any(self.p75 < self.p50):
            raise ValueError("need 0 <= p50 <= p75 per dimension")

    @classmethod
    def from_objective(cls, table: ObjectiveTable, small_step=0.05, large_step=0.10):
        grads, _ = gradient_table(table)
        mags = np.abs(grads)
        return cls(
            p50=np.percentile(mags, 50, axis=0),
            p75=np.percentile(mags, 75, axis=0),
            small_step=small_step,
            large_step=large_step,
            gradients=grads,
        )


def coactive_oracle(table: ObjectiveTable, action: int, cfg: CoactiveOracleConfig):
    """Simulated improvement suggestion at an executed action.

    Returns {dimension: level} with level sign pointing uphill in utility and
    |level| 1 (small step) or 2 (large step), or None when every gradient
    component magnitude is at or below its median threshold.
    """
    if cfg.gradients is not None:
        grad = cfg.gradients[table.space.check_index(action)]
    else:
        grad = gradient_table(table)[0][table.space.check_index(action)]
    mags = np.abs(grad)
    if np.all(mags <= cfg.p50):
        return None
    dim = int(np.argmax(mags))  # ties resolve to the lowest dimension index
    magnitude = 2 if mags[dim] > cfg.p75[dim] else 1
    direction = 1 if grad[dim] > 0 else -1
    return {dim: direction * magnitude}
