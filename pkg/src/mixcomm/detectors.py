"""Symbol detectors over sensor outputs.

The moment-based detector scores each symbol's Gaussian belief at the
observed output; the centroid detector is the same with unit covariances
(nearest mean).  The data-driven baselines, k-nearest-neighbors and a
sparse histogram density estimate, are trained on simulated observations.

Single-observation functions define the semantics; the *_batch variants
produce identical labels and carry the Monte Carlo load.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InvalidK, InvalidSpec
from .gaussian import gauss_score_params, log_gauss_pdf
from .likelihoods import SymbolLikelihoodTable
from .rng import RngStream
from .system import SystemDescription, sample_chain_batch, validate_alphabet

_PACK_SHIFT = np.int64(1) << np.int64(32)
_PACK_LIMIT = 1 << 31


def aml_detect(z, table: SymbolLikelihoodTable) -> int:
    """Index of the symbol with the highest approximate log likelihood."""
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    scores = [log_gauss_pdf(z, b) for b in table.beliefs]
    return int(np.argmax(scores))


def aml_detect_batch(z: np.ndarray, table: SymbolLikelihoodTable) -> np.ndarray:
    means, linvs, logks = gauss_score_params(table.beliefs)
    z = np.ascontiguousarray(np.atleast_2d(z), dtype=np.float64)
    return _backend.gauss_argmax(z, means, linvs, logks)


def centroid_detect(z, table: SymbolLikelihoodTable) -> int:
    """Index of the symbol whose belief mean is nearest in Euclidean distance.

    Equals aml_detect with every covariance replaced by the identity.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    means = np.stack([b.mean for b in table.beliefs])
    return int(np.argmin(np.linalg.norm(means - z, axis=1)))


def centroid_detect_batch(z: np.ndarray, table: SymbolLikelihoodTable) -> np.ndarray:
    means = np.stack([b.mean for b in table.beliefs])
    n_sym, r = means.shape
    linvs = np.broadcast_to(np.eye(r), (n_sym, r, r)).copy()
    logks = np.zeros(n_sym)
    z = np.ascontiguousarray(np.atleast_2d(z), dtype=np.float64)
    return _backend.gauss_argmax(z, means, linvs, logks)


@dataclass(frozen=True, eq=False)
class TrainedKnn:
    """Stored (observation, symbol index) pairs plus the neighbor count k."""

    samples: np.ndarray
    labels: np.ndarray
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidK(f"k must be >= 1, got {self.k}")
        if self.k > self.samples.shape[0]:
            raise InvalidK(
                f"k = {self.k} exceeds the {self.samples.shape[0]} stored samples"
            )


def knn_fit(
    sys: SystemDescription,
    alphabet,
    samples_per_symbol: int,
    k: int,
    rng: RngStream,
) -> TrainedKnn:
    """Draw samples_per_symbol observations per symbol and store them."""
    symbols = validate_alphabet(alphabet, sys.s)
    if samples_per_symbol < 1:
        raise InvalidSpec("need at least one training sample per symbol")
    n_sym = symbols.shape[0]
    samples = np.empty((n_sym * samples_per_symbol, sys.r))
    labels = np.empty(n_sym * samples_per_symbol, dtype=np.int64)
    for j in range(n_sym):
        keys = rng.substream(j).substream_keys(samples_per_symbol)
        syms = np.ascontiguousarray(
            np.broadcast_to(symbols[j], (samples_per_symbol, sys.s))
        )
        _, _, z = sample_chain_batch(syms, sys, keys)
        samples[j * samples_per_symbol : (j + 1) * samples_per_symbol] = z
        labels[j * samples_per_symbol : (j + 1) * samples_per_symbol] = j
    return TrainedKnn(samples=samples, labels=labels, k=int(k))


def _vote(ordered_labels: np.ndarray, n_classes: int) -> int:
    """Majority vote; vote ties fall to the class of the nearest tied sample."""
    counts = np.bincount(ordered_labels, minlength=n_classes)
    top = counts.max()
    tied = counts == top
    if tied.sum() == 1:
        return int(np.argmax(counts))
    for label in ordered_labels:
        if tied[label]:
            return int(label)
    raise AssertionError("unreachable: some voted label must be tied")


def knn_detect(z, m: TrainedKnn) -> int:
    """Majority vote among the k nearest stored samples.

    Distance ties resolve by insertion order (stable sort).
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    dists = np.linalg.norm(m.samples - z, axis=1)
    order = np.argsort(dists, kind="stable")[: m.k]
    n_classes = int(m.labels.max()) + 1
    return _vote(m.labels[order], n_classes)


def knn_detect_batch(z: np.ndarray, m: TrainedKnn, chunk: int = 4096) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=np.float64))
    n = z.shape[0]
    n_classes = int(m.labels.max()) + 1
    out = np.empty(n, dtype=np.int64)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        d = np.linalg.norm(z[lo:hi, None, :] - m.samples[None, :, :], axis=2)
        order = np.argsort(d, axis=1, kind="stable")[:, : m.k]
        nearest_labels = m.labels[order]
        for i in range(hi - lo):
            out[lo + i] = _vote(nearest_labels[i], n_classes)
    return out


@dataclass(frozen=True, eq=False)
class TrainedHistogram:
    """Per-symbol sparse histograms over a fixed integer binning of outputs."""

    bin_width: float
    origin: np.ndarray
    keys: tuple          # per symbol: sorted packed bin keys (int64)
    counts: tuple        # per symbol: counts aligned with keys
    centers: tuple       # per symbol: (B, R) bin centers for the fallback rule
    totals: tuple        # per symbol: total sample count
    dim: int


def _bin_coords(z: np.ndarray, origin: np.ndarray, bin_width: float) -> np.ndarray:
    return np.floor((z - origin) / bin_width).astype(np.int64)


def _pack_coords(coords: np.ndarray) -> np.ndarray:
    """Collision-free int64 key per bin coordinate row (R <= 2)."""
    if np.any(np.abs(coords) >= _PACK_LIMIT):
        raise InvalidSpec("histogram bin coordinates exceed the packable range")
    if coords.shape[1] == 1:
        return coords[:, 0].copy()
    return coords[:, 0] * _PACK_SHIFT + coords[:, 1]


def hist_fit(
    sys: SystemDescription,
    alphabet,
    samples_per_symbol: int,
    bin_width: float,
    rng: RngStream,
) -> TrainedHistogram:
    """Simulate observations per symbol and bin them at the given width."""
    symbols = validate_alphabet(alphabet, sys.s)
    if bin_width <= 0:
        raise InvalidSpec(f"bin width must be positive, got {bin_width}")
    if sys.r > 2:
        raise InvalidSpec("histogram detector supports R <= 2")
    origin = np.zeros(sys.r)
    keys, counts, centers, totals = [], [], [], []
    for j in range(symbols.shape[0]):
        trial_keys = rng.substream(j).substream_keys(samples_per_symbol)
        syms = np.ascontiguousarray(
            np.broadcast_to(symbols[j], (samples_per_symbol, sys.s))
        )
        _, _, z = sample_chain_batch(syms, sys, trial_keys)
        coords = _bin_coords(z, origin, bin_width)
        packed = _pack_coords(coords)
        uniq, cnt = np.unique(packed, return_counts=True)
        order = np.argsort(uniq)
        uniq, cnt = uniq[order], cnt[order]
        if sys.r == 1:
            coord_rows = uniq[:, None].astype(np.float64)
        else:
            hi32 = np.floor_divide(uniq, int(_PACK_SHIFT))
            lo32 = uniq - hi32 * _PACK_SHIFT
            coord_rows = np.stack([hi32, lo32], axis=1).astype(np.float64)
        keys.append(uniq)
        counts.append(cnt.astype(np.int64))
        centers.append((coord_rows + 0.5) * bin_width + origin)
        totals.append(int(samples_per_symbol))
    return TrainedHistogram(
        bin_width=float(bin_width),
        origin=origin,
        keys=tuple(keys),
        counts=tuple(counts),
        centers=tuple(centers),
        totals=tuple(totals),
        dim=sys.r,
    )


def _hist_counts(m: TrainedHistogram, packed: np.ndarray) -> np.ndarray:
    """(n, N) matrix of per-symbol counts for packed bin keys."""
    n = packed.shape[0]
    out = np.zeros((n, len(m.keys)), dtype=np.int64)
    for j, (keys, counts) in enumerate(zip(m.keys, m.counts)):
        if len(keys) == 0:
            continue
        idx = np.searchsorted(keys, packed)
        idx_c = np.minimum(idx, len(keys) - 1)
        hit = keys[idx_c] == packed
        out[hit, j] = counts[idx_c[hit]]
    return out


def _nearest_bin_labels(m: TrainedHistogram, z_centers: np.ndarray) -> np.ndarray:
    """Fallback for observations outside every histogram's support."""
    n = z_centers.shape[0]
    best = np.full((n, len(m.keys)), np.inf)
    for j, centers in enumerate(m.centers):
        if centers.shape[0] == 0:
            continue
        d = np.linalg.norm(z_centers[:, None, :] - centers[None, :, :], axis=2)
        best[:, j] = d.min(axis=1)
    return np.argmin(best, axis=1).astype(np.int64)


def hist_detect_batch(z: np.ndarray, m: TrainedHistogram) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=np.float64))
    coords = _bin_coords(z, m.origin, m.bin_width)
    packed = _pack_coords(coords)
    counts = _hist_counts(m, packed)
    densities = counts / np.asarray(m.totals, dtype=np.float64)[None, :]
    labels = np.argmax(densities, axis=1).astype(np.int64)
    empty = ~np.any(counts > 0, axis=1)
    if np.any(empty):
        z_centers = (coords[empty] + 0.5) * m.bin_width + m.origin
        labels[empty] = _nearest_bin_labels(m, z_centers)
    return labels


def hist_detect(z, m: TrainedHistogram) -> int:
    """Highest estimated bin density; empty bins fall back to the symbol
    whose nearest non-empty bin center is closest."""
    return int(hist_detect_batch(np.atleast_1d(z)[None, :], m)[0])
