"""Pure-numpy implementations of the hot numeric kernels.

These are the reference semantics; `_kernels_numba` mirrors them loop-for-loop.
Channel kinds: 0 = additive Gaussian, 1 = sqrt-scaled (element-wise
sqrt(nu_c * H * x) times a standard normal).  Sensor kinds: 0 = identity,
1 = linear map, 2 = two-sensor power-law pair.
"""

from __future__ import annotations

import numpy as np

from .rng import normals_from_words, trial_words, uniforms_from_words

CH_GAUSSIAN = 0
CH_SQRT = 1
SENSOR_IDENTITY = 0
SENSOR_LINEAR = 1
SENSOR_MOS = 2


def simulate_chain(
    keys: np.ndarray,
    sym: np.ndarray,
    h: np.ndarray,
    tx_mu: np.ndarray,
    tx_chol: np.ndarray,
    ch_kind: int,
    ch_mu: np.ndarray,
    ch_chol: np.ndarray,
    nu_c: float,
    rx_mu: np.ndarray,
    rx_chol: np.ndarray,
    sensor_kind: int,
    lin_a: np.ndarray,
    mos_a: np.ndarray,
    mos_b: np.ndarray,
):
    """Draw one end-to-end observation per trial key.

    Word layout per trial: 2S words for the release normals, 2S for the
    channel normals, 2R for the measurement normals.  Release and channel
    outputs are clamped at zero before the next stage.

    Returns (x, y, z) with shapes (n, S), (n, S), (n, R).
    """
    n = keys.shape[0]
    s = sym.shape[1]
    r = rx_mu.shape[0]
    w = trial_words(keys, 4 * s + 2 * r)
    nrm = normals_from_words(w[:, 0::2], w[:, 1::2])

    x = sym + tx_mu + nrm[:, :s] @ tx_chol.T
    np.maximum(x, 0.0, out=x)

    y = x * h
    if ch_kind == CH_GAUSSIAN:
        y = y + ch_mu + nrm[:, s : 2 * s] @ ch_chol.T
    else:
        y = y + np.sqrt(nu_c * y) * nrm[:, s : 2 * s]
    np.maximum(y, 0.0, out=y)

    if sensor_kind == SENSOR_IDENTITY:
        f = y.copy()
    elif sensor_kind == SENSOR_LINEAR:
        f = y @ lin_a.T
    else:
        f = np.empty((n, 2))
        for rr in range(2):
            p1 = y[:, 0] ** mos_b[rr, 0]
            p2 = y[:, 1] ** mos_b[rr, 1]
            f[:, rr] = mos_a[rr, 0] * p1 + mos_a[rr, 1] * p2 + mos_a[rr, 2] * p1 * p2 + mos_a[rr, 3]

    z = f + rx_mu + nrm[:, 2 * s :] @ rx_chol.T
    return x, y, z


def symbol_picks(words: np.ndarray, n_symbols: int) -> np.ndarray:
    """Map raw words to uniform symbol indices in {0, ..., n_symbols-1}."""
    u = uniforms_from_words(words)
    return np.minimum((u * n_symbols).astype(np.int64), n_symbols - 1)


def gauss_argmax(
    z: np.ndarray,
    means: np.ndarray,
    linvs: np.ndarray,
    logks: np.ndarray,
) -> np.ndarray:
    """Index of the highest-scoring Gaussian per row of z.

    Score_j(z) = logk_j - 0.5 * ||linv_j (z - mean_j)||^2; ties resolve to
    the lowest index.
    """
    d = z[:, None, :] - means[None, :, :]
    t = np.einsum("kab,nkb->nka", linvs, d)
    q = np.einsum("nka,nka->nk", t, t)
    return np.argmax(logks[None, :] - 0.5 * q, axis=1).astype(np.int64)


def pep_overlap(
    mu_i: np.ndarray,
    linv_i: np.ndarray,
    nc_i: float,
    mu_j: np.ndarray,
    linv_j: np.ndarray,
    nc_j: float,
    lo: np.ndarray,
    hi: np.ndarray,
    points_per_axis: int,
) -> float:
    """Midpoint-rule integral of min(p_i, p_j) over the box [lo, hi].

    nc_* are the Gaussian normalization constants 1 / ((2*pi)^(R/2) prod diag L).
    Supports R in {1, 2}.
    """
    dim = mu_i.shape[0]
    step = (hi - lo) / points_per_axis
    if dim == 1:
        v = lo[0] + (np.arange(points_per_axis) + 0.5) * step[0]
        qi = (linv_i[0, 0] * (v - mu_i[0])) ** 2
        qj = (linv_j[0, 0] * (v - mu_j[0])) ** 2
        pi = nc_i * np.exp(-0.5 * qi)
        pj = nc_j * np.exp(-0.5 * qj)
        return float(np.minimum(pi, pj).sum() * step[0])
    v0 = lo[0] + (np.arange(points_per_axis) + 0.5) * step[0]
    v1 = lo[1] + (np.arange(points_per_axis) + 0.5) * step[1]
    g0, g1 = np.meshgrid(v0, v1, indexing="ij")
    d0i = g0 - mu_i[0]
    d1i = g1 - mu_i[1]
    w0 = linv_i[0, 0] * d0i
    w1 = linv_i[1, 0] * d0i + linv_i[1, 1] * d1i
    pi = nc_i * np.exp(-0.5 * (w0 * w0 + w1 * w1))
    d0j = g0 - mu_j[0]
    d1j = g1 - mu_j[1]
    w0 = linv_j[0, 0] * d0j
    w1 = linv_j[1, 0] * d0j + linv_j[1, 1] * d1j
    pj = nc_j * np.exp(-0.5 * (w0 * w0 + w1 * w1))
    return float(np.minimum(pi, pj).sum() * step[0] * step[1])
