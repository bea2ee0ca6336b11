"""Unscented transform: sigma points and moment propagation.

Uses the original symmetric form with n_sigma = 2S equally weighted points
s_j = mu +- column j of chol(S * C); no scaled/augmented variants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch
from .gaussian import GaussianBelief, cholesky_psd, validate_belief


@dataclass(frozen=True, eq=False)
class SigmaPointSet:
    """2S points matching a belief's mean and covariance."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64).copy()
        if pts.ndim != 2 or pts.shape[0] != 2 * pts.shape[1]:
            raise DimensionMismatch(
                f"expected (2S, S) points, got shape {pts.shape}"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def sigma_points(b: GaussianBelief) -> SigmaPointSet:
    """Symmetric sigma points {mu + L_j, mu - L_j} with L = chol(S * cov)."""
    validate_belief(b)
    s = b.dim
    lower = cholesky_psd(s * b.cov)
    pts = np.empty((2 * s, s))
    pts[:s] = b.mean[None, :] + lower.T
    pts[s:] = b.mean[None, :] - lower.T
    return SigmaPointSet(pts)


def ut_propagate(
    b: GaussianBelief, f: Callable[[np.ndarray], np.ndarray]
) -> GaussianBelief:
    """Propagate a belief through a deterministic map f: R^S -> R^R.

    Mean is the plain average of f over the sigma points; covariance is the
    uniformly weighted scatter around that mean, symmetrized to kill
    rounding asymmetry.  Exact for affine f.
    """
    pts = sigma_points(b).points
    outputs = np.stack([np.atleast_1d(np.asarray(f(p), dtype=np.float64)) for p in pts])
    mean = outputs.mean(axis=0)
    centered = outputs - mean
    cov = (centered.T @ centered) / outputs.shape[0]
    cov = 0.5 * (cov + cov.T)
    return GaussianBelief(mean, cov)
