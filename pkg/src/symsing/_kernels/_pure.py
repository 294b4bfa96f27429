"""Numpy implementations of the hot kernels.

Same call surface as the compiled extension ``symsing._kernels._core``,
selected by ``symsing._kernels`` when the extension is unavailable or
explicitly disabled.  Everything is chunk-vectorised (batched row
reduction, batched fraction-free determinants, table-driven character
sums), so the fallback stays usable at desk scale, just a few times
slower than the extension.

All reductions that feed reported numbers are exact integer counts;
floating point appears only inside the character sums, where per-chunk
partial sums are combined with ``math.fsum`` so results do not depend on
chunk boundaries at the 1e-12 level.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .._bits import packed_length, splitmix64_array, words_per_matrix

BACKEND = "python"

_ENUM_CHUNK = 4096
_MC_CHUNK = 1024


@lru_cache(maxsize=None)
def _inverse_table(q: int) -> np.ndarray:
    inv = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv[x] = pow(x, q - 2, q)
    return inv


def _codes_to_pm1(codes: np.ndarray, n: int) -> np.ndarray:
    """Expand packed codes into a (B, n, n) batch of +-1 matrices."""
    m = packed_length(n)
    shifts = (m - 1 - np.arange(m)).astype(np.int64)
    bits = (codes[:, None] >> shifts[None, :]) & 1
    vals = 1 - 2 * bits
    iu, ju = np.triu_indices(n)
    mats = np.empty((codes.shape[0], n, n), dtype=np.int64)
    mats[:, iu, ju] = vals
    mats[:, ju, iu] = vals
    return mats


def _batched_rank_mod(mats: np.ndarray, q: int) -> np.ndarray:
    """Row-echelon rank of each matrix mod q.  ``mats`` is consumed."""
    B, n, _ = mats.shape
    inv = _inverse_table(q)
    np.mod(mats, q, out=mats)
    filled = np.zeros(B, dtype=np.int64)
    rows = np.arange(n)
    for col in range(n):
        elig = (mats[:, :, col] != 0) & (rows[None, :] >= filled[:, None])
        has = elig.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        r0 = filled[b]
        r1 = np.argmax(elig[b], axis=1)
        tmp = mats[b, r0].copy()
        mats[b, r0] = mats[b, r1]
        mats[b, r1] = tmp
        piv = mats[b, r0, col]
        pivrow = (mats[b, r0] * inv[piv][:, None]) % q
        mats[b, r0] = pivrow
        sub = mats[b]
        below = rows[None, :] > r0[:, None]
        factors = np.where(below, sub[:, :, col], 0)
        mats[b] = (sub - factors[:, :, None] * pivrow[:, None, :]) % q
        filled[b] = r0 + 1
    return filled


def _batched_det(mats: np.ndarray) -> np.ndarray:
    """Exact integer determinants via fraction-free elimination.

    int64 is safe for sign matrices up to n = 12: every intermediate is a
    minor of the input, bounded by 12**6, and products of two such stay
    far below 2**63.
    """
    B, n, _ = mats.shape
    M = mats.astype(np.int64, copy=True)
    sign = np.ones(B, dtype=np.int64)
    prev = np.ones(B, dtype=np.int64)
    alive = np.ones(B, dtype=bool)
    rows = np.arange(n)
    for k in range(n - 1):
        elig = (M[:, :, k] != 0) & (rows[None, :] >= k) & alive[:, None]
        alive &= elig.any(axis=1)
        b = np.nonzero(alive)[0]
        if b.size == 0:
            break
        r1 = np.argmax(elig[b], axis=1)
        need = r1 != k
        bs, rs = b[need], r1[need]
        tmp = M[bs, k].copy()
        M[bs, k] = M[bs, rs]
        M[bs, rs] = tmp
        sign[bs] = -sign[bs]
        sub = M[b]
        pivval = sub[:, k, k]
        block = sub[:, k + 1 :, k + 1 :] * pivval[:, None, None] - sub[:, k + 1 :, k : k + 1] * sub[:, k : k + 1, k + 1 :]
        block //= prev[b][:, None, None]
        sub[:, k + 1 :, k + 1 :] = block
        M[b] = sub
        prev[b] = pivval
    return np.where(alive, sign * M[:, n - 1, n - 1], 0)


def enum_scan(n: int, q: int, start: int, stop: int):
    """Scan packed codes [start, stop): nullity histogram plus oracle counts.

    Returns ``(hist, det_zero, mismatches, implication_failures)`` where
    ``hist[k]`` counts matrices of nullity k mod q, ``det_zero`` counts
    vanishing integer determinants, ``mismatches`` counts disagreements
    between det == 0 mod q and rank < n (two independent singularity
    oracles) and ``implication_failures`` counts matrices singular over
    the rationals but invertible mod q, which would contradict the
    containment of the rational event in the mod-q event.
    """
    hist = np.zeros(n + 1, dtype=np.int64)
    det_zero = 0
    mismatches = 0
    implication = 0
    for lo in range(start, stop, _ENUM_CHUNK):
        codes = np.arange(lo, min(lo + _ENUM_CHUNK, stop), dtype=np.int64)
        mats = _codes_to_pm1(codes, n)
        dets = _batched_det(mats)
        nullity = n - _batched_rank_mod(mats, q)
        hist += np.bincount(nullity, minlength=n + 1)
        det_zero += int((dets == 0).sum())
        mismatches += int(((dets % q == 0) != (nullity > 0)).sum())
        implication += int(((dets == 0) & (nullity == 0)).sum())
    return hist, det_zero, mismatches, implication


def matvec_match_count(n: int, q: int, start: int, stop: int, a: np.ndarray, v: np.ndarray) -> int:
    """Count codes in [start, stop) whose matrix M satisfies M a = v mod q."""
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    count = 0
    for lo in range(start, stop, _ENUM_CHUNK):
        codes = np.arange(lo, min(lo + _ENUM_CHUNK, stop), dtype=np.int64)
        res = (_codes_to_pm1(codes, n) @ a) % q
        count += int((res == v[None, :]).all(axis=1).sum())
    return count


def mc_nullity_hist(n: int, q: int, seed: int, index_start: int, count: int) -> np.ndarray:
    """Nullity histogram of sampled matrices index_start .. index_start+count-1."""
    m = packed_length(n)
    W = words_per_matrix(n)
    t = np.arange(m)
    widx = t >> 6
    shift = (t & 63).astype(np.uint64)
    iu, ju = np.triu_indices(n)
    hist = np.zeros(n + 1, dtype=np.int64)
    for lo in range(index_start, index_start + count, _MC_CHUNK):
        hi = min(lo + _MC_CHUNK, index_start + count)
        idx = np.arange(lo, hi, dtype=np.uint64)
        with np.errstate(over="ignore"):
            counters = idx[:, None] * np.uint64(W) + np.arange(W, dtype=np.uint64)[None, :]
        words = splitmix64_array(seed, counters)
        bits = ((words[:, widx] >> shift[None, :]) & np.uint64(1)).astype(np.int64)
        vals = np.where(bits == 0, 1, q - 1)
        mats = np.empty((idx.shape[0], n, n), dtype=np.int64)
        mats[:, iu, ju] = vals
        mats[:, ju, iu] = vals
        hist += np.bincount(n - _batched_rank_mod(mats, q), minlength=n + 1)
    return hist


def _words_to_mats(words: np.ndarray, n: int) -> np.ndarray:
    m = packed_length(n)
    words = np.asarray(words, dtype=np.uint64)
    t = np.arange(m)
    bits = ((words[t >> 6] >> (t & 63).astype(np.uint64)) & np.uint64(1)).astype(np.int64)
    return bits


def rank_mod(words: np.ndarray, n: int, q: int) -> int:
    """Rank mod q of the matrix packed into little-endian words."""
    bits = _words_to_mats(words, n)
    iu, ju = np.triu_indices(n)
    vals = np.where(bits == 0, 1, q - 1)
    mat = np.empty((1, n, n), dtype=np.int64)
    mat[0, iu, ju] = vals
    mat[0, ju, iu] = vals
    return int(_batched_rank_mod(mat, q)[0])


def det_bareiss(words: np.ndarray, n: int) -> int:
    """Exact integer determinant of the packed matrix.

    Runs over Python integers, so it is exact for any n; callers enforce
    their own size guard for time rather than overflow.
    """
    bits = _words_to_mats(words, n)
    mat = [[0] * n for _ in range(n)]
    t = 0
    for i in range(n):
        for j in range(i, n):
            val = 1 if bits[t] == 0 else -1
            mat[i][j] = val
            mat[j][i] = val
            t += 1
    sign, prev = 1, 1
    for k in range(n - 1):
        p = k
        while p < n and mat[p][k] == 0:
            p += 1
        if p == n:
            return 0
        if p != k:
            mat[k], mat[p] = mat[p], mat[k]
            sign = -sign
        pk = mat[k][k]
        rowk = mat[k]
        for i in range(k + 1, n):
            rowi = mat[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pk - mik * rowk[j]) // prev
            rowi[k] = 0
        prev = pk
    return sign * mat[n - 1][n - 1]


def _mixed_radix_powers(n: int, q: int) -> np.ndarray:
    return np.array([q ** k for k in range(n - 1, -1, -1)], dtype=np.int64)


def fourier_sum(a: np.ndarray, v: np.ndarray, q: int, start: int, stop: int):
    """Unnormalised character sum over frequency codes [start, stop).

    Frequency vectors are enumerated mixed-radix (digit 0 most
    significant).  Each term is the product of pair and diagonal cosine
    factors times the character at the phase <l, v>.  Returns the real
    and imaginary accumulations.
    """
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    n = int(a.shape[0])
    cos_tab = np.cos(2.0 * math.pi * np.arange(q) / q)
    sin_tab = np.sin(2.0 * math.pi * np.arange(q) / q)
    pi_, pj = np.triu_indices(n, k=1)
    powers = _mixed_radix_powers(n, q)
    re_parts: list[float] = []
    im_parts: list[float] = []
    chunk = max(1, (1 << 22) // max(1, pi_.size + n))
    for lo in range(start, stop, chunk):
        codes = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % q
        pair_args = (digits[:, pi_] * a[pj][None, :] + digits[:, pj] * a[pi_][None, :]) % q
        w = cos_tab[pair_args].prod(axis=1) * cos_tab[(digits * a[None, :]) % q].prod(axis=1)
        phase = (digits @ v) % q
        re_parts.append(float(np.sum(w * cos_tab[phase])))
        im_parts.append(float(np.sum(-w * sin_tab[phase])))
    return math.fsum(re_parts), math.fsum(im_parts)


def error_sums(a: np.ndarray, q: int, start: int, stop: int):
    """Off-centre mass and its term-wise exponential bound over [start, stop).

    For each nonzero frequency vector the first accumulator takes the
    product of |cos| pair factors and the second takes exp(-2 N / q**2)
    with N the number of non-vanishing pair arguments; the zero frequency
    is skipped automatically when the range contains it.
    """
    a = np.asarray(a, dtype=np.int64)
    n = int(a.shape[0])
    abs_tab = np.abs(np.cos(2.0 * math.pi * np.arange(q) / q))
    pi_, pj = np.triu_indices(n, k=1)
    exp_tab = np.exp(-2.0 * np.arange(pi_.size + 1) / (q * q))
    powers = _mixed_radix_powers(n, q)
    val_parts: list[float] = []
    bound_parts: list[float] = []
    chunk = max(1, (1 << 22) // max(1, pi_.size + n))
    for lo in range(start, stop, chunk):
        codes = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % q
        pair_args = (digits[:, pi_] * a[pj][None, :] + digits[:, pj] * a[pi_][None, :]) % q
        keep = codes != 0
        prod = abs_tab[pair_args].prod(axis=1)
        nonzero = (pair_args != 0).sum(axis=1)
        val_parts.append(float(np.sum(prod[keep])))
        bound_parts.append(float(np.sum(exp_tab[nonzero[keep]])))
    return math.fsum(val_parts), math.fsum(bound_parts)
