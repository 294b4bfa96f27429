"""Bit-level conventions shared by every backend.

The packed layout of a symmetric sign matrix and the counter-based bit
stream used for sampling are defined here exactly once.  The compiled
kernels re-implement the same arithmetic in C; the equivalence tests in
``tests/test_kernels.py`` pin the two against each other.

Layout: an n-by-n symmetric sign matrix is determined by the m = n(n+1)/2
upper-triangle entries (diagonal included), read row by row.  Entry
(i, j) with i <= j sits at triangle index ``tri_index(n, i, j)``.  Bit
value 0 encodes +1 and 1 encodes -1.  Two equivalent containers are used:

* a single packed integer whose most significant bit is triangle index 0
  (so enumeration in increasing integer order starts at the all +1
  matrix, and any contiguous code range fixes a high-bit prefix);
* a little-endian vector of 64-bit words, where triangle index t is bit
  ``t % 64`` of word ``t // 64`` (the natural container for the sampler,
  which produces whole 64-bit words).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def packed_length(n: int) -> int:
    """Number of packed bits for an n-by-n symmetric sign matrix."""
    return n * (n + 1) // 2


def words_per_matrix(n: int) -> int:
    """Number of 64-bit stream words consumed per sampled matrix."""
    return (packed_length(n) + 63) // 64


def tri_index(n: int, i: int, j: int) -> int:
    """Index of entry (i, j), i <= j, in the row-major upper triangle."""
    return i * (2 * n - i + 1) // 2 + (j - i)


def splitmix64(seed: int, counter: int) -> int:
    """Word ``counter`` of the SplitMix64 output stream keyed by ``seed``.

    Pure function of (seed, counter), so any sub-range of sample indices
    can be generated independently and in any order.
    """
    z = (seed + ((counter & MASK64) + 1) * _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64_array(seed: int, counters: np.ndarray) -> np.ndarray:
    """Vectorised :func:`splitmix64` over a uint64 counter array."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + (counters.astype(np.uint64) + np.uint64(1)) * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def sample_words(seed: int, index: int, n: int) -> list[int]:
    """The 64-bit words feeding the bits of sampled matrix ``index``."""
    w = words_per_matrix(n)
    return [splitmix64(seed, index * w + k) for k in range(w)]


def words_to_code(words, n: int) -> int:
    """Packed big-endian code from little-endian stream words."""
    m = packed_length(n)
    code = 0
    for t in range(m):
        bit = (int(words[t >> 6]) >> (t & 63)) & 1
        code |= bit << (m - 1 - t)
    return code


def code_to_words(code: int, n: int) -> np.ndarray:
    """Little-endian word vector for a packed big-endian code."""
    m = packed_length(n)
    out = np.zeros(words_per_matrix(n), dtype=np.uint64)
    for t in range(m):
        if (code >> (m - 1 - t)) & 1:
            out[t >> 6] |= np.uint64(1) << np.uint64(t & 63)
    return out
