"""Counter-based random numbers.

Every draw is a pure function of a key tuple and a counter, so a value can be
regenerated without replaying the stream that produced it. This is what makes
the quenched environments lazily extensible and the ensembles independent of
how work is split across threads.

The mixing function is the SplitMix64 finaliser; keys are folded in one word
at a time.
"""

import numba as nb
import numpy as np

__all__ = ["mix64", "hash_key", "uniform", "uniform_array", "STREAM_ENV", "STREAM_COIN",
           "STREAM_PARTICLE"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

# stream tags keep independent uses of one seed apart
STREAM_PARTICLE = 1
STREAM_ENV = 2
STREAM_COIN = 3

MASK64 = (1 << 64) - 1


@nb.njit(nb.uint64(nb.uint64), cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def _fold(h, word):
    return mix64(h ^ (np.uint64(word) + _GOLDEN))


@nb.njit(cache=True)
def hash_key(seed, a, b, c, d):
    """Fold a seed and four stream words into one 64-bit key."""
    h = mix64(np.uint64(seed) + _GOLDEN)
    h = _fold(h, a)
    h = _fold(h, b)
    h = _fold(h, c)
    h = _fold(h, d)
    return h


@nb.njit(cache=True)
def uniform(key, counter):
    """Uniform double in the open interval (0, 1) for ``(key, counter)``."""
    h = mix64(np.uint64(key) ^ mix64(np.uint64(counter) * _GOLDEN + _GOLDEN))
    return (np.float64(h >> _S11) + 0.5) * _INV53


@nb.njit(cache=True)
def _uniform_fill(key, start, out):
    for i in range(out.shape[0]):
        out[i] = uniform(key, start + np.uint64(i))


def uniform_array(seed: int, stream: tuple, start: int, count: int) -> np.ndarray:
    """Draws ``start, ..., start+count-1`` of the stream keyed by ``(seed, *stream)``.

    ``stream`` holds up to four non-negative integers; missing words are zero.
    """
    words = list(stream) + [0] * (4 - len(stream))
    if len(words) != 4:
        raise ValueError("stream key has at most four words")
    key = np.uint64(hash_key(np.uint64(seed & MASK64), *(np.uint64(w & MASK64) for w in words)))
    out = np.empty(count, dtype=np.float64)
    _uniform_fill(key, np.uint64(start), out)
    return out
