"""Communication-system description and end-to-end observation sampling.

The chain per trial is: release x = clamp(xbar + tx noise, 0), propagation
y = clamp(H x + channel noise, 0), measurement z = f(y) + rx noise.  The
clamps keep the power-law sensor inputs and the sqrt-scaled channel noise
on their real domain; at the default operating point the noise never drives
concentrations near zero, so the induced bias is negligible.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from . import _backend
from .errors import DimensionMismatch, DomainError, InvalidSpec
from .gaussian import cholesky_psd, validate_belief, GaussianBelief
from .rng import RngStream
from .sensors import IdentityArray, LinearArray, MosPair, SensorArrayModel, response_dim


@dataclass(frozen=True, eq=False)
class GaussianNoise:
    """Signal-independent Gaussian noise with mean mu and covariance cov."""

    mu: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mu = np.atleast_1d(np.asarray(self.mu, dtype=np.float64)).copy()
        cov = np.asarray(self.cov, dtype=np.float64).copy()
        validate_belief(GaussianBelief(mu, cov))
        mu.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mu.size


@dataclass(frozen=True)
class SqrtChannelNoise:
    """Channel noise sqrt(nu_c * H * x) (element-wise) times a standard normal.

    nu_c = 1 corresponds to the Gaussian approximation of a Poisson channel;
    only permitted for the channel stage.
    """

    nu_c: float

    def __post_init__(self) -> None:
        if not (self.nu_c > 0 and np.isfinite(self.nu_c)):
            raise InvalidSpec(f"nu_c must be positive and finite, got {self.nu_c}")


NoiseSpec = Union[GaussianNoise, SqrtChannelNoise]


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Diagonal attenuation H = diag(h), entries finite and non-negative."""

    h: np.ndarray

    def __post_init__(self) -> None:
        h = np.atleast_1d(np.asarray(self.h, dtype=np.float64)).copy()
        if not np.all(np.isfinite(h)):
            raise InvalidSpec("channel attenuation must be finite")
        if np.any(h < 0):
            raise InvalidSpec("channel attenuation must be non-negative")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def dim(self) -> int:
        return self.h.size


@dataclass(frozen=True, eq=False)
class FeasibleBox:
    """Axis-aligned box of releasable concentration vectors."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64)).copy()
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64)).copy()
        if lo.shape != hi.shape:
            raise DimensionMismatch(f"lo {lo.shape} vs hi {hi.shape}")
        if np.any(lo < 0):
            raise InvalidSpec("box lower bounds must be non-negative")
        if np.any(lo > hi):
            raise InvalidSpec("box lower bounds must not exceed upper bounds")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size


@dataclass(frozen=True, eq=False)
class SystemDescription:
    """Everything needed to simulate and analyze one communication setup.

    Immutable after construction and safe to share across workers.
    """

    s: int
    r: int
    channel: ChannelMatrix
    tx_noise: GaussianNoise
    ch_noise: NoiseSpec
    rx_noise: GaussianNoise
    sensor: SensorArrayModel
    feasible: FeasibleBox

    def __post_init__(self) -> None:
        if not isinstance(self.tx_noise, GaussianNoise):
            raise InvalidSpec("release noise must be signal-independent Gaussian")
        if not isinstance(self.rx_noise, GaussianNoise):
            raise InvalidSpec("measurement noise must be signal-independent Gaussian")
        if self.channel.dim != self.s:
            raise DimensionMismatch(
                f"channel has dimension {self.channel.dim}, S = {self.s}"
            )
        if self.tx_noise.dim != self.s:
            raise DimensionMismatch(
                f"release noise has dimension {self.tx_noise.dim}, S = {self.s}"
            )
        if isinstance(self.ch_noise, GaussianNoise) and self.ch_noise.dim != self.s:
            raise DimensionMismatch(
                f"channel noise has dimension {self.ch_noise.dim}, S = {self.s}"
            )
        if response_dim(self.sensor, self.s) != self.r:
            raise DimensionMismatch(
                f"sensor produces {response_dim(self.sensor, self.s)} outputs, R = {self.r}"
            )
        if self.rx_noise.dim != self.r:
            raise DimensionMismatch(
                f"measurement noise has dimension {self.rx_noise.dim}, R = {self.r}"
            )
        if self.feasible.dim != self.s:
            raise DimensionMismatch(
                f"feasible box has dimension {self.feasible.dim}, S = {self.s}"
            )


def validate_symbol(sym, s: int) -> np.ndarray:
    """Coerce a concentration vector, enforcing length and non-negativity."""
    sym = np.atleast_1d(np.asarray(sym, dtype=np.float64))
    if sym.shape != (s,):
        raise DimensionMismatch(f"symbol has shape {sym.shape}, expected ({s},)")
    if np.any(sym < 0):
        raise DomainError("symbol concentrations must be non-negative")
    return sym


def validate_alphabet(alphabet, s: int) -> np.ndarray:
    """Coerce an (N, S) array of symbols."""
    arr = np.atleast_2d(np.asarray(alphabet, dtype=np.float64))
    if arr.ndim != 2 or arr.shape[1] != s:
        raise DimensionMismatch(f"alphabet has shape {arr.shape}, expected (N, {s})")
    if np.any(arr < 0):
        raise DomainError("symbol concentrations must be non-negative")
    return arr


def scale_noise(sys: SystemDescription, nu: float) -> SystemDescription:
    """Copy of the system with every Gaussian covariance scaled by nu.

    A sqrt-scaled channel noise gets nu_c set to nu; means are unchanged.
    """
    if not (nu > 0 and np.isfinite(nu)):
        raise InvalidSpec(f"noise scale must be positive and finite, got {nu}")
    tx = GaussianNoise(sys.tx_noise.mu, nu * sys.tx_noise.cov)
    rx = GaussianNoise(sys.rx_noise.mu, nu * sys.rx_noise.cov)
    if isinstance(sys.ch_noise, GaussianNoise):
        ch: NoiseSpec = GaussianNoise(sys.ch_noise.mu, nu * sys.ch_noise.cov)
    else:
        ch = SqrtChannelNoise(nu_c=float(nu))
    return replace(sys, tx_noise=tx, ch_noise=ch, rx_noise=rx)


def _chain_args(sys: SystemDescription) -> tuple:
    """Kernel argument pack for simulate_chain (dummies where unused)."""
    s, r = sys.s, sys.r
    tx_chol = cholesky_psd(sys.tx_noise.cov)
    rx_chol = cholesky_psd(sys.rx_noise.cov)
    if isinstance(sys.ch_noise, GaussianNoise):
        ch_kind = _backend.CH_GAUSSIAN
        ch_mu = sys.ch_noise.mu
        ch_chol = cholesky_psd(sys.ch_noise.cov)
        nu_c = 0.0
    else:
        if np.any(sys.channel.h < 0):
            raise InvalidSpec(
                "sqrt-scaled channel noise needs non-negative attenuation"
            )
        ch_kind = _backend.CH_SQRT
        ch_mu = np.zeros(s)
        ch_chol = np.zeros((s, s))
        nu_c = float(sys.ch_noise.nu_c)
    if isinstance(sys.sensor, IdentityArray):
        sensor_kind = _backend.SENSOR_IDENTITY
        lin_a = np.zeros((r, s))
        mos_a = np.zeros((2, 4))
        mos_b = np.ones((2, 2))
    elif isinstance(sys.sensor, LinearArray):
        sensor_kind = _backend.SENSOR_LINEAR
        lin_a = np.ascontiguousarray(sys.sensor.matrix)
        mos_a = np.zeros((2, 4))
        mos_b = np.ones((2, 2))
    else:
        sensor_kind = _backend.SENSOR_MOS
        lin_a = np.zeros((r, s))
        mos_a = np.ascontiguousarray(
            np.stack([sys.sensor.s1.a, sys.sensor.s2.a])
        )
        mos_b = np.ascontiguousarray(
            np.stack([sys.sensor.s1.b, sys.sensor.s2.b])
        )
    return (
        np.ascontiguousarray(sys.channel.h),
        np.ascontiguousarray(sys.tx_noise.mu),
        np.ascontiguousarray(tx_chol),
        ch_kind,
        np.ascontiguousarray(ch_mu),
        np.ascontiguousarray(ch_chol),
        nu_c,
        np.ascontiguousarray(sys.rx_noise.mu),
        np.ascontiguousarray(rx_chol),
        sensor_kind,
        lin_a,
        mos_a,
        mos_b,
    )


def sample_chain_batch(
    syms: np.ndarray, sys: SystemDescription, keys: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x, y, z) draws for one trial key per row of syms."""
    syms = np.ascontiguousarray(syms, dtype=np.float64)
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    if syms.shape != (keys.shape[0], sys.s):
        raise DimensionMismatch(
            f"symbols have shape {syms.shape}, expected ({keys.shape[0]}, {sys.s})"
        )
    return _backend.simulate_chain(keys, syms, *_chain_args(sys))


def sample_observation(sym, sys: SystemDescription, rng: RngStream) -> np.ndarray:
    """One sensor-output vector z for the transmitted symbol.

    Pure in the stream identity: the same (master_seed, stream_index)
    reproduces the same z bit for bit.
    """
    sym = validate_symbol(sym, sys.s)
    keys = np.array([rng.key], dtype=np.uint64)
    _, _, z = sample_chain_batch(sym[None, :], sys, keys)
    return z[0]
