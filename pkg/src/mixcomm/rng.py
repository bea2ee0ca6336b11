"""Counter-based random streams.

Every random draw in the package is a pure function of a stream identity
(master_seed, stream_index).  Streams are cheap values, not stateful
generator objects: calling the same method on the same stream twice yields
the same numbers, and independent draws are obtained from substreams.  This
makes Monte Carlo results independent of how trials are partitioned across
workers, and lets the hot kernels derive per-trial randomness from plain
uint64 keys in either the numpy or the numba backend.

The word generator is SplitMix64 used as a PRF: word i of a stream with key
k is mix64(k + (i+1)*GOLDEN), where mix64 is the SplitMix64 finalizer.
Normals use the fixed-consumption trigonometric Box-Muller transform (two
words per normal), so the word layout of any composite draw is static.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_MUL_1 = 0xBF58476D1CE4E5B9
MIX_MUL_2 = 0x94D049BB133111EB
# Distinct salts keep key derivation, substream indexing, and word counters
# in unrelated regions of the mix64 input space.
_STREAM_SALT = 0xD1B54A32D192ED03
_CHILD_SALT = 0x8CB92BA72F3D8DD7

_U64 = np.uint64
_INV_2_53 = 1.0 / (1 << 53)
TWO_PI = 2.0 * np.pi


def mix64_scalar(z: int) -> int:
    """SplitMix64 finalizer on a Python int, wrapped to 64 bits."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    z = (z ^ (z >> _U64(30))) * _U64(MIX_MUL_1)
    z = (z ^ (z >> _U64(27))) * _U64(MIX_MUL_2)
    return z ^ (z >> _U64(31))


def stream_key(master_seed: int, stream_index: int) -> int:
    """64-bit key identifying the stream (master_seed, stream_index)."""
    a = mix64_scalar((master_seed + GOLDEN) & MASK64)
    b = mix64_scalar(stream_index ^ _STREAM_SALT)
    return mix64_scalar(a ^ b)


def words_for_key(key: int, n: int, start: int = 0) -> np.ndarray:
    """Words [start, start+n) of the stream with the given key."""
    idx = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    return mix64(_U64(key) + idx * _U64(GOLDEN))


def trial_words(keys: np.ndarray, n_words: int) -> np.ndarray:
    """Words 0..n_words-1 for each key in `keys`; shape (len(keys), n_words)."""
    steps = np.arange(1, n_words + 1, dtype=np.uint64) * _U64(GOLDEN)
    return mix64(keys[:, None] + steps[None, :])


def uniforms_from_words(words: np.ndarray) -> np.ndarray:
    """Map uint64 words to float64 in [0, 1)."""
    return (words >> _U64(11)).astype(np.float64) * _INV_2_53


def normals_from_words(w0: np.ndarray, w1: np.ndarray) -> np.ndarray:
    """One standard normal per word pair (Box-Muller, cosine branch).

    u1 is shifted into (0, 1] so the log never sees zero.
    """
    u1 = ((w0 >> _U64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (w1 >> _U64(11)).astype(np.float64) * _INV_2_53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)


@dataclass(frozen=True)
class RngStream:
    """Identity of a reproducible random stream.

    Identical (master_seed, stream_index) always reproduce identical draws;
    the draw methods are pure (no hidden cursor).  Use :meth:`substream` to
    obtain independent streams for separate draw sites.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "master_seed", self.master_seed & MASK64)
        object.__setattr__(self, "stream_index", self.stream_index & MASK64)
        object.__setattr__(
            self, "key", stream_key(self.master_seed, self.stream_index)
        )

    def substream(self, i: int) -> "RngStream":
        """Independent child stream i of this stream."""
        inner = mix64_scalar((int(i) + _CHILD_SALT) & MASK64)
        return RngStream(self.master_seed, mix64_scalar(self.key ^ inner))

    def substream_keys(self, n: int, start: int = 0) -> np.ndarray:
        """Keys of substream(start), ..., substream(start+n-1) as uint64."""
        idx = np.arange(start, start + n, dtype=np.uint64)
        inner = mix64(idx + _U64(_CHILD_SALT))
        child_index = mix64(_U64(self.key) ^ inner)
        a = _U64(mix64_scalar((self.master_seed + GOLDEN) & MASK64))
        return mix64(a ^ mix64(child_index ^ _U64(_STREAM_SALT)))

    def uniform_words(self, n: int, start: int = 0) -> np.ndarray:
        return words_for_key(self.key, n, start)

    def uniforms(self, n: int, start: int = 0) -> np.ndarray:
        """n float64 draws in [0, 1) (words start..start+n-1)."""
        return uniforms_from_words(self.uniform_words(n, start))

    def normals(self, n: int, start: int = 0) -> np.ndarray:
        """n standard-normal draws (words 2*start..2*(start+n)-1)."""
        w = words_for_key(self.key, 2 * n, 2 * start)
        return normals_from_words(w[0::2], w[1::2])

    def integers(self, n: int, bound: int, start: int = 0) -> np.ndarray:
        """n int64 draws uniform on {0, ..., bound-1}."""
        u = self.uniforms(n, start)
        return np.minimum((u * bound).astype(np.int64), bound - 1)
