"""Gaussian beliefs and the small dense linear algebra they need.

A belief is a (mean, covariance) pair; covariances are validated symmetric
positive semidefinite and factored by a PSD-tolerant Cholesky with a jitter
ladder.  Densities are evaluated in the log domain through the Cholesky
factor (solve, never an explicit inverse) so the code stays stable at the
1e-12 covariance scales the sensor outputs live at.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, NotPSD, NotSymmetric

_SYM_RTOL = 1e-12
# Relative jitter ladder applied to near-singular covariances as eps * tr(M)/D.
_JITTER_LADDER = (0.0, 1e-12, 1e-10, 1e-8)
_PIVOT_RTOL = 1e-10
# Floor for zero pivots when a density is requested for an exactly singular
# covariance: keeps log-densities finite while behaving like a sharp peak.
_PIVOT_FLOOR = float(np.sqrt(np.finfo(np.float64).tiny))
_LOG_2PI = float(np.log(2.0 * np.pi))


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_symmetric(m: np.ndarray) -> None:
    diff = np.abs(m - m.T)
    ref = np.maximum(1.0, np.abs(m))
    if np.any(diff > _SYM_RTOL * ref):
        i, j = np.unravel_index(np.argmax(diff / ref), m.shape)
        raise NotSymmetric(
            f"matrix not symmetric at ({i},{j}): {m[i, j]!r} vs {m[j, i]!r}"
        )


def _psd_factor(m: np.ndarray):
    """Lower Cholesky factor of a PSD matrix, or None if not PSD.

    Zero pivots are admitted (their column is zeroed), so exactly singular
    covariances factor; a pivot below -tol or a nonzero column under a zero
    pivot rejects the matrix.
    """
    d = m.shape[0]
    lower = np.zeros_like(m)
    diag = np.diag(m)
    scale = float(np.max(np.abs(diag))) if d else 0.0
    tol = _PIVOT_RTOL * scale + np.finfo(np.float64).tiny
    col_tol = 1e-8 * max(scale, np.finfo(np.float64).tiny)
    for i in range(d):
        pivot = m[i, i] - lower[i, :i] @ lower[i, :i]
        if pivot < -tol:
            return None
        if pivot > 0.0:
            lower[i, i] = np.sqrt(pivot)
            for j in range(i + 1, d):
                lower[j, i] = (m[j, i] - lower[j, :i] @ lower[i, :i]) / lower[i, i]
        else:
            for j in range(i + 1, d):
                if abs(m[j, i] - lower[j, :i] @ lower[i, :i]) > col_tol:
                    return None
    return lower


def cholesky_psd(m) -> np.ndarray:
    """Lower triangular L with L @ L.T = M + eps*I.

    eps is the smallest rung of the jitter ladder that lets the PSD-tolerant
    factorization succeed.  Raises NotSymmetric / NotPSD.
    """
    m = _as_matrix(m)
    _check_symmetric(m)
    d = m.shape[0]
    base = max(float(np.trace(m)) / d, 0.0) if d else 0.0
    for rel in _JITTER_LADDER:
        eps = rel * base
        candidate = m if eps == 0.0 else m + eps * np.eye(d)
        lower = _psd_factor(candidate)
        if lower is not None:
            return lower
    raise NotPSD("matrix is not positive semidefinite at the largest jitter")


def chol_inverse(cov) -> tuple[np.ndarray, float]:
    """(L^-1, log det) for a PSD covariance, flooring zero pivots.

    The shared precomputation for batched Gaussian scoring.
    """
    lower = cholesky_psd(cov)
    diag = np.diag(lower).copy()
    floored = np.maximum(diag, _PIVOT_FLOOR)
    if np.any(floored != diag):
        lower = lower.copy()
        np.fill_diagonal(lower, floored)
    linv = solve_triangular(lower, np.eye(lower.shape[0]), lower=True)
    logdet = 2.0 * float(np.sum(np.log(floored)))
    return linv, logdet


@dataclass(frozen=True, eq=False)
class GaussianBelief:
    """Mean vector and symmetric PSD covariance of dimension D."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64)).copy()
        cov = np.asarray(self.cov, dtype=np.float64).copy()
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.size


def validate_belief(b: GaussianBelief) -> None:
    """Assert the belief invariants; raises naming the violated one."""
    if b.mean.ndim != 1:
        raise DimensionMismatch(f"mean must be a vector, got shape {b.mean.shape}")
    cov = _as_matrix(b.cov)
    if cov.shape[0] != b.mean.size:
        raise DimensionMismatch(
            f"mean has dimension {b.mean.size} but cov is {cov.shape}"
        )
    _check_symmetric(cov)
    cholesky_psd(cov)


def log_gauss_pdf(z, b: GaussianBelief) -> float:
    """Log density of the D-dimensional Gaussian `b` at point z."""
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    if z.shape != b.mean.shape:
        raise DimensionMismatch(
            f"point has shape {z.shape}, belief mean has shape {b.mean.shape}"
        )
    lower = cholesky_psd(b.cov)
    diag = np.maximum(np.diag(lower).copy(), _PIVOT_FLOOR)
    lower = lower.copy()
    np.fill_diagonal(lower, diag)
    w = solve_triangular(lower, z - b.mean, lower=True)
    return float(
        -0.5 * (w @ w) - 0.5 * z.size * _LOG_2PI - float(np.sum(np.log(diag)))
    )


def gauss_score_params(beliefs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stacked (means, L^-1 factors, log normalizers) for batched scoring."""
    means = np.stack([b.mean for b in beliefs])
    dim = means.shape[1]
    linvs = np.empty((len(beliefs), dim, dim))
    logks = np.empty(len(beliefs))
    for j, b in enumerate(beliefs):
        linv, logdet = chol_inverse(b.cov)
        linvs[j] = linv
        logks[j] = -0.5 * logdet - 0.5 * dim * _LOG_2PI
    return means, linvs, logks
