"""Regression losses over signed soft labels.

The focal L1 loss between targets S and predictions Z (both in [-1, 1])
averages |S - Z| * w over the grid, where

    w = |S - Z| ** (gamma * [S * Z >= 0]) / (max(|S|, |Z|) + epsilon)

is a per-voxel sample weight.  Voxels whose prediction has the wrong sign
("hard", S * Z < 0) keep the weight numerator at 1; same-sign voxels are
down-weighted by |S - Z| ** gamma.  A zero on either side counts as
same-sign.  The weight is treated as a constant in the gradient: only the
outer |S - Z| factor is differentiated, so

    dL/dZ_i = -sign(S_i - Z_i) * w_i / N,   zero where S_i = Z_i,

and dL/dlogit_i folds in the tanh jacobian (1 - Z_i^2).

Reductions use a fold-halves pairwise tree sum with a fixed association
order, so results are identical across runs, thread counts, and any
reimplementation that follows the same order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import _as_readonly


@dataclass(frozen=True)
class LossConfig:
    gamma: float = 1.0
    epsilon: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not (np.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True, eq=False)
class LossReport:
    """Scalar loss plus the per-voxel weights and analytic gradients."""

    loss: float
    weights: np.ndarray
    grad_wrt_z: np.ndarray
    grad_wrt_logit: np.ndarray

    def __post_init__(self):
        for name in ("weights", "grad_wrt_z", "grad_wrt_logit"):
            object.__setattr__(self, name, _as_readonly(np.asarray(getattr(self, name), dtype=np.float64)))


def pairwise_sum(values: np.ndarray) -> float:
    """Deterministic fold-halves tree sum.

    Each round adds the upper half onto the lower half elementwise (odd
    leftover carried), fixing the association order independent of how the
    array was produced.
    """
    buf = np.asarray(values, dtype=np.float64).ravel().copy()
    n = buf.size
    if n == 0:
        return 0.0
    while n > 1:
        m = n // 2
        buf[:m] += buf[m : 2 * m]
        if n & 1:
            buf[m] = buf[2 * m]
        n = m + (n & 1)
    return float(buf[0])


def tanh_map(logits) -> np.ndarray:
    """Squash raw scores into (-1, 1)."""
    arr = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("logits must be finite")
    return np.tanh(arr)


def _as_pair(s_values, z_values):
    s = np.asarray(getattr(s_values, "values", s_values), dtype=np.float64)
    z = np.asarray(getattr(z_values, "values", z_values), dtype=np.float64)
    if s.shape != z.shape:
        raise ValueError(f"target shape {s.shape} != prediction shape {z.shape}")
    if s.size == 0:
        raise ValueError("loss over an empty grid is undefined")
    for name, arr in (("targets", s), ("predictions", z)):
        if not np.all(np.isfinite(arr)) or np.abs(arr).max() > 1.0:
            raise ValueError(f"{name} must lie in [-1, 1]")
    return s, z


def _power(base: np.ndarray, exponent: float) -> np.ndarray:
    # Exponents 1 and 2 stay in plain arithmetic so cross-implementation
    # parity does not hinge on libm pow rounding.
    if exponent == 1.0:
        return base
    if exponent == 2.0:
        return base * base
    return np.power(base, exponent)


def focal_l1(s_values, z_values, config: LossConfig = LossConfig()) -> LossReport:
    """Focal L1 loss with detached per-voxel weighting."""
    s, z = _as_pair(s_values, z_values)
    n = s.size
    d = s - z
    ad = np.abs(d)
    easy = s * z >= 0.0
    numer = np.where(easy, _power(ad, config.gamma), 1.0)
    denom = np.maximum(np.abs(s), np.abs(z)) + config.epsilon
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(d == 0.0, 0.0, numer / denom)
    loss = pairwise_sum(ad * w) / n
    grad_z = np.where(d == 0.0, 0.0, (-np.sign(d) * w) / n)
    grad_logit = grad_z * (1.0 - z * z)
    return LossReport(loss, w, grad_z, grad_logit)


def l1_loss(s_values, z_values) -> LossReport:
    """Plain mean absolute error; unit weights."""
    s, z = _as_pair(s_values, z_values)
    n = s.size
    d = s - z
    loss = pairwise_sum(np.abs(d)) / n
    grad_z = (-np.sign(d)) / n
    grad_logit = grad_z * (1.0 - z * z)
    return LossReport(loss, np.ones_like(d), grad_z, grad_logit)


def l2_loss(s_values, z_values) -> LossReport:
    """Mean squared error; reported weights are |S - Z| so the
    mean(|S - Z| * w) identity still holds."""
    s, z = _as_pair(s_values, z_values)
    n = s.size
    d = s - z
    loss = pairwise_sum(d * d) / n
    grad_z = (-2.0 * d) / n
    grad_logit = grad_z * (1.0 - z * z)
    return LossReport(loss, np.abs(d), grad_z, grad_logit)
