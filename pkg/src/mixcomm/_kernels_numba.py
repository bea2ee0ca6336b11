"""Numba twins of the hot kernels in `_kernels_numpy`.

Loop bodies mirror the numpy reference term by term; integer stream
derivation is bit-identical, float results agree to rounding.
"""

from __future__ import annotations

import numpy as np
from numba import njit

CH_GAUSSIAN = 0
CH_SQRT = 1
SENSOR_IDENTITY = 0
SENSOR_LINEAR = 1
SENSOR_MOS = 2

_U11 = np.uint64(11)
_U27 = np.uint64(27)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_MUL_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_MUL_2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / (1 << 53)
_TWO_PI = 2.0 * np.pi


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _U30)) * _MIX_MUL_1
    z = (z ^ (z >> _U27)) * _MIX_MUL_2
    return z ^ (z >> _U31)


@njit(cache=True, inline="always")
def _word(key, i):
    return _mix64(key + np.uint64(i + 1) * _GOLDEN)


@njit(cache=True, inline="always")
def _normal(key, j):
    w0 = _word(key, 2 * j)
    w1 = _word(key, 2 * j + 1)
    u1 = (np.float64(w0 >> _U11) + 1.0) * _INV_2_53
    u2 = np.float64(w1 >> _U11) * _INV_2_53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)


@njit(cache=True)
def simulate_chain(
    keys,
    sym,
    h,
    tx_mu,
    tx_chol,
    ch_kind,
    ch_mu,
    ch_chol,
    nu_c,
    rx_mu,
    rx_chol,
    sensor_kind,
    lin_a,
    mos_a,
    mos_b,
):
    n = keys.shape[0]
    s = sym.shape[1]
    r = rx_mu.shape[0]
    x = np.empty((n, s))
    y = np.empty((n, s))
    z = np.empty((n, r))
    nrm = np.empty(2 * s + r)
    for t in range(n):
        key = keys[t]
        for j in range(2 * s + r):
            nrm[j] = _normal(key, j)

        for i in range(s):
            acc = sym[t, i] + tx_mu[i]
            for k in range(s):
                acc += tx_chol[i, k] * nrm[k]
            x[t, i] = acc if acc > 0.0 else 0.0

        for i in range(s):
            base = x[t, i] * h[i]
            if ch_kind == CH_GAUSSIAN:
                acc = base + ch_mu[i]
                for k in range(s):
                    acc += ch_chol[i, k] * nrm[s + k]
            else:
                acc = base + np.sqrt(nu_c * base) * nrm[s + i]
            y[t, i] = acc if acc > 0.0 else 0.0

        if sensor_kind == SENSOR_MOS:
            for rr in range(2):
                p1 = y[t, 0] ** mos_b[rr, 0]
                p2 = y[t, 1] ** mos_b[rr, 1]
                fz = mos_a[rr, 0] * p1 + mos_a[rr, 1] * p2 + mos_a[rr, 2] * p1 * p2 + mos_a[rr, 3]
                acc = fz + rx_mu[rr]
                for k in range(r):
                    acc += rx_chol[rr, k] * nrm[2 * s + k]
                z[t, rr] = acc
        else:
            for i in range(r):
                if sensor_kind == SENSOR_IDENTITY:
                    fz = y[t, i]
                else:
                    fz = 0.0
                    for k in range(s):
                        fz += lin_a[i, k] * y[t, k]
                acc = fz + rx_mu[i]
                for k in range(r):
                    acc += rx_chol[i, k] * nrm[2 * s + k]
                z[t, i] = acc
    return x, y, z


@njit(cache=True)
def symbol_picks(words, n_symbols):
    n = words.shape[0]
    out = np.empty(n, dtype=np.int64)
    for t in range(n):
        u = np.float64(words[t] >> _U11) * _INV_2_53
        idx = np.int64(u * n_symbols)
        out[t] = idx if idx < n_symbols - 1 else n_symbols - 1
    return out


@njit(cache=True)
def gauss_argmax(z, means, linvs, logks):
    n = z.shape[0]
    n_sym = means.shape[0]
    r = z.shape[1]
    out = np.empty(n, dtype=np.int64)
    d = np.empty(r)
    for t in range(n):
        best = -np.inf
        best_j = 0
        for j in range(n_sym):
            for a in range(r):
                d[a] = z[t, a] - means[j, a]
            q = 0.0
            for a in range(r):
                w = 0.0
                for b in range(r):
                    w += linvs[j, a, b] * d[b]
                q += w * w
            score = logks[j] - 0.5 * q
            if score > best:
                best = score
                best_j = j
        out[t] = best_j
    return out


@njit(cache=True)
def pep_overlap(mu_i, linv_i, nc_i, mu_j, linv_j, nc_j, lo, hi, points_per_axis):
    dim = mu_i.shape[0]
    if dim == 1:
        step = (hi[0] - lo[0]) / points_per_axis
        total = 0.0
        for a in range(points_per_axis):
            v = lo[0] + (a + 0.5) * step
            qi = (linv_i[0, 0] * (v - mu_i[0])) ** 2
            qj = (linv_j[0, 0] * (v - mu_j[0])) ** 2
            pi = nc_i * np.exp(-0.5 * qi)
            pj = nc_j * np.exp(-0.5 * qj)
            total += min(pi, pj)
        return total * step
    step0 = (hi[0] - lo[0]) / points_per_axis
    step1 = (hi[1] - lo[1]) / points_per_axis
    total = 0.0
    for a in range(points_per_axis):
        v0 = lo[0] + (a + 0.5) * step0
        for b in range(points_per_axis):
            v1 = lo[1] + (b + 0.5) * step1
            d0 = v0 - mu_i[0]
            d1 = v1 - mu_i[1]
            w0 = linv_i[0, 0] * d0
            w1 = linv_i[1, 0] * d0 + linv_i[1, 1] * d1
            pi = nc_i * np.exp(-0.5 * (w0 * w0 + w1 * w1))
            d0 = v0 - mu_j[0]
            d1 = v1 - mu_j[1]
            w0 = linv_j[0, 0] * d0
            w1 = linv_j[1, 0] * d0 + linv_j[1, 1] * d1
            pj = nc_j * np.exp(-0.5 * (w0 * w0 + w1 * w1))
            total += min(pi, pj)
    return total * step0 * step1
