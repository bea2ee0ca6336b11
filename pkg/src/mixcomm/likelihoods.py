"""Per-symbol approximate Gaussian likelihoods of the sensor outputs.

Moments are pushed through the chain stage by stage: release (exact,
additive Gaussian), channel (exact for additive Gaussian; unscented
estimate of the sqrt-scaled noise otherwise), sensor (unscented).  A
sampling-based estimator covers arbitrary noise and doubles as the
validation oracle for the deterministic pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedSpec
from .gaussian import GaussianBelief
from .rng import RngStream
from .sensors import MosPair, SensorArrayModel, array_response
from .system import (
    ChannelMatrix,
    GaussianNoise,
    SqrtChannelNoise,
    SystemDescription,
    sample_chain_batch,
    validate_alphabet,
    validate_symbol,
)
from .unscented import ut_propagate


@dataclass(frozen=True, eq=False)
class SymbolLikelihoodTable:
    """One sensor-output belief per alphabet symbol, in alphabet order."""

    symbols: np.ndarray
    beliefs: tuple[GaussianBelief, ...]

    def __post_init__(self) -> None:
        symbols = np.atleast_2d(np.asarray(self.symbols, dtype=np.float64)).copy()
        beliefs = tuple(self.beliefs)
        if symbols.shape[0] != len(beliefs):
            raise DomainError(
                f"{symbols.shape[0]} symbols but {len(beliefs)} beliefs"
            )
        symbols.setflags(write=False)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "beliefs", beliefs)

    def __len__(self) -> int:
        return len(self.beliefs)


def moments_x(sym, tx: GaussianNoise) -> GaussianBelief:
    """Release-stage moments: mean xbar + mu_tx, covariance C_tx."""
    if not isinstance(tx, GaussianNoise):
        raise UnsupportedSpec(
            "release noise must be Gaussian; use moments_mc for general noise"
        )
    sym = validate_symbol(sym, tx.dim)
    return GaussianBelief(sym + tx.mu, tx.cov)


def moments_y_sin(
    bx: GaussianBelief, channel: ChannelMatrix, ch: GaussianNoise
) -> GaussianBelief:
    """Channel-stage moments under additive Gaussian channel noise."""
    if not isinstance(ch, GaussianNoise):
        raise UnsupportedSpec("moments_y_sin needs Gaussian channel noise")
    h = channel.h
    mean = h * bx.mean + ch.mu
    cov = (h[:, None] * bx.cov) * h[None, :] + ch.cov
    return GaussianBelief(mean, cov)


def moments_y_sdcn(
    bx: GaussianBelief, channel: ChannelMatrix, nu_c: float
) -> GaussianBelief:
    """Channel-stage moments under sqrt-scaled channel noise.

    The noise amplitude a = sqrt(nu_c * H * x) is pushed through the
    unscented transform; its second moment enters the covariance on the
    diagonal only (the per-type noises are independent).
    """
    h = channel.h
    mean = h * bx.mean
    if np.any(mean < 0):
        raise DomainError("sqrt-scaled channel noise needs non-negative H @ mean")
    amp = ut_propagate(
        bx, lambda x: np.sqrt(nu_c * h * np.maximum(x, 0.0))
    )
    cov = (h[:, None] * bx.cov) * h[None, :]
    cov = cov + np.diag(np.diag(amp.cov)) + np.diag(amp.mean**2)
    return GaussianBelief(mean, cov)


def moments_y(bx: GaussianBelief, sys: SystemDescription) -> GaussianBelief:
    """Channel-stage moments for whichever channel noise the system carries."""
    if isinstance(sys.ch_noise, SqrtChannelNoise):
        return moments_y_sdcn(bx, sys.channel, sys.ch_noise.nu_c)
    return moments_y_sin(bx, sys.channel, sys.ch_noise)


def moments_z(
    by: GaussianBelief, m: SensorArrayModel, rx: GaussianNoise
) -> GaussianBelief:
    """Sensor-output moments: unscented pass through f plus Gaussian rx noise.

    Sigma points are clamped at zero only for the power-law sensor, whose
    domain requires it; linear/identity maps stay exact on all of R^S.
    """
    if not isinstance(rx, GaussianNoise):
        raise UnsupportedSpec("measurement noise must be Gaussian")
    if isinstance(m, MosPair):
        f = lambda y: array_response(np.maximum(y, 0.0), m)
    else:
        f = lambda y: array_response(y, m)
    pushed = ut_propagate(by, f)
    return GaussianBelief(pushed.mean + rx.mu, pushed.cov + rx.cov)


def symbol_belief(sym, sys: SystemDescription, stage: str = "z") -> GaussianBelief:
    """Belief for one symbol at the requested stage ('y' or 'z')."""
    bx = moments_x(sym, sys.tx_noise)
    by = moments_y(bx, sys)
    if stage == "y":
        return by
    if stage == "z":
        return moments_z(by, sys.sensor, sys.rx_noise)
    raise ValueError(f"stage must be 'y' or 'z', got {stage!r}")


def build_symbol_likelihoods(
    alphabet, sys: SystemDescription, stage: str = "z"
) -> SymbolLikelihoodTable:
    """Likelihood table for an alphabet, in alphabet order."""
    symbols = validate_alphabet(alphabet, sys.s)
    beliefs = tuple(symbol_belief(sym, sys, stage) for sym in symbols)
    return SymbolLikelihoodTable(symbols, beliefs)


def moments_mc(
    sym, sys: SystemDescription, n: int, rng: RngStream
) -> GaussianBelief:
    """Sample mean/covariance (denominator n) of n end-to-end observations.

    The general-noise path, and the oracle the unscented pipeline is checked
    against.
    """
    if n < 2:
        raise DomainError(f"need at least 2 samples, got {n}")
    sym = validate_symbol(sym, sys.s)
    keys = rng.substream_keys(n)
    syms = np.broadcast_to(sym, (n, sys.s))
    _, _, z = sample_chain_batch(np.ascontiguousarray(syms), sys, keys)
    mean = z.mean(axis=0)
    centered = z - mean
    cov = (centered.T @ centered) / n
    return GaussianBelief(mean, 0.5 * (cov + cov.T))
