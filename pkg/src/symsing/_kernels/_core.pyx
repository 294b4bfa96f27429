# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: enumeration scans, sampled rank histograms and
character sums.

Mirrors ``symsing._kernels._pure`` exactly; the packing and bit-stream
conventions are documented in ``symsing._bits``.  Character sums walk the
frequency vectors with a mixed-radix odometer and keep per-digit prefix
products, so advancing by one code costs O(n) multiplies amortised;
accumulation is Kahan-compensated.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport cos, sin, exp, M_PI

import numpy as np

BACKEND = "compiled"

ctypedef unsigned long long u64
ctypedef long long i64

cdef u64 _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 _MIX2 = 0x94D049BB133111EBULL

DEF MAXN = 64
DEF MAXW = 33          # words_per_matrix(64)


cdef inline u64 _splitmix(u64 seed, u64 counter) nogil:
    cdef u64 z = seed + (counter + 1ULL) * _GOLDEN
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline i64 _modpow(i64 base, i64 e, i64 q) nogil:
    cdef i64 r = 1 % q
    base = base % q
    while e > 0:
        if e & 1:
            r = (r * base) % q
        base = (base * base) % q
        e >>= 1
    return r


cdef int _rank_mod_dense(i64* mat, int n, i64 q) nogil:
    # In-place row echelon over Z_q; entries must arrive reduced to [0, q).
    cdef int rank = 0, col, r, i, j, piv
    cdef i64 inv, f, t
    for col in range(n):
        piv = -1
        for r in range(rank, n):
            if mat[r * n + col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(n):
                t = mat[piv * n + j]
                mat[piv * n + j] = mat[rank * n + j]
                mat[rank * n + j] = t
        inv = _modpow(mat[rank * n + col], q - 2, q)
        for j in range(n):
            mat[rank * n + j] = (mat[rank * n + j] * inv) % q
        for i in range(rank + 1, n):
            f = mat[i * n + col]
            if f != 0:
                for j in range(n):
                    t = (mat[i * n + j] - f * mat[rank * n + j]) % q
                    if t < 0:
                        t += q
                    mat[i * n + j] = t
        rank += 1
    return rank


cdef i64 _det_bareiss_dense(i64* m, int n) nogil:
    # Fraction-free elimination; divisions are exact so C truncation is exact.
    cdef int k, i, j, p
    cdef i64 sign = 1, prev = 1, pk, mik, tmp
    for k in range(n - 1):
        p = -1
        for i in range(k, n):
            if m[i * n + k] != 0:
                p = i
                break
        if p < 0:
            return 0
        if p != k:
            for j in range(n):
                tmp = m[p * n + j]
                m[p * n + j] = m[k * n + j]
                m[k * n + j] = tmp
            sign = -sign
        pk = m[k * n + k]
        for i in range(k + 1, n):
            mik = m[i * n + k]
            for j in range(k + 1, n):
                m[i * n + j] = (m[i * n + j] * pk - mik * m[k * n + j]) / prev
            m[i * n + k] = 0
        prev = pk
    return sign * m[(n - 1) * n + (n - 1)]


def enum_scan(int n, long long q, long long start, long long stop):
    """See symsing._kernels._pure.enum_scan."""
    cdef int m = n * (n + 1) // 2
    hist_np = np.zeros(n + 1, dtype=np.int64)
    cdef i64[::1] hist = hist_np
    cdef i64 det_zero = 0, mismatches = 0, implication = 0
    cdef i64* mr = <i64*> malloc(n * n * sizeof(i64))
    cdef i64* md = <i64*> malloc(n * n * sizeof(i64))
    cdef i64 code, detv
    cdef int i, j, t, bit, nullity, sing_det
    if mr == NULL or md == NULL:
        free(mr)
        free(md)
        raise MemoryError()
    try:
        with nogil:
            for code in range(start, stop):
                t = 0
                for i in range(n):
                    for j in range(i, n):
                        bit = <int> ((code >> (m - 1 - t)) & 1)
                        if bit:
                            mr[i * n + j] = q - 1
                            md[i * n + j] = -1
                        else:
                            mr[i * n + j] = 1
                            md[i * n + j] = 1
                        mr[j * n + i] = mr[i * n + j]
                        md[j * n + i] = md[i * n + j]
                        t += 1
                detv = _det_bareiss_dense(md, n)
                nullity = n - _rank_mod_dense(mr, n, q)
                hist[nullity] += 1
                if detv == 0:
                    det_zero += 1
                sing_det = 1 if detv % q == 0 else 0
                if sing_det != (1 if nullity > 0 else 0):
                    mismatches += 1
                if detv == 0 and nullity == 0:
                    implication += 1
    finally:
        free(mr)
        free(md)
    return hist_np, int(det_zero), int(mismatches), int(implication)


def matvec_match_count(int n, long long q, long long start, long long stop, a_arr, v_arr):
    """See symsing._kernels._pure.matvec_match_count."""
    a_c = np.ascontiguousarray(a_arr, dtype=np.int64)
    v_c = np.ascontiguousarray(v_arr, dtype=np.int64)
    cdef i64[::1] a = a_c
    cdef i64[::1] v = v_c
    cdef int m = n * (n + 1) // 2
    cdef i64 code, count = 0, r
    cdef i64 acc[MAXN]
    cdef int i, j, t, bit, ok
    with nogil:
        for code in range(start, stop):
            for i in range(n):
                acc[i] = 0
            t = 0
            for i in range(n):
                for j in range(i, n):
                    bit = <int> ((code >> (m - 1 - t)) & 1)
                    if bit:
                        acc[i] -= a[j]
                        if j != i:
                            acc[j] -= a[i]
                    else:
                        acc[i] += a[j]
                        if j != i:
                            acc[j] += a[i]
                    t += 1
            ok = 1
            for i in range(n):
                r = acc[i] % q
                if r < 0:
                    r += q
                if r != v[i]:
                    ok = 0
                    break
            count += ok
    return int(count)


def mc_nullity_hist(int n, long long q, unsigned long long seed, long long index_start, long long count):
    """See symsing._kernels._pure.mc_nullity_hist."""
    cdef int m = n * (n + 1) // 2
    cdef int W = (m + 63) // 64
    hist_np = np.zeros(n + 1, dtype=np.int64)
    cdef i64[::1] hist = hist_np
    cdef u64 words[MAXW]
    cdef i64* mr = <i64*> malloc(n * n * sizeof(i64))
    cdef i64 k
    cdef u64 idx
    cdef int i, j, t, w, bit
    if mr == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(count):
                idx = <u64> (index_start + k)
                for w in range(W):
                    words[w] = _splitmix(seed, idx * <u64> W + <u64> w)
                t = 0
                for i in range(n):
                    for j in range(i, n):
                        bit = <int> ((words[t >> 6] >> (t & 63)) & 1ULL)
                        mr[i * n + j] = q - 1 if bit else 1
                        mr[j * n + i] = mr[i * n + j]
                        t += 1
                hist[n - _rank_mod_dense(mr, n, q)] += 1
    finally:
        free(mr)
    return hist_np


def rank_mod(words_arr, int n, long long q):
    """See symsing._kernels._pure.rank_mod."""
    w_c = np.ascontiguousarray(words_arr, dtype=np.uint64)
    cdef u64[::1] words = w_c
    cdef i64* mr = <i64*> malloc(n * n * sizeof(i64))
    cdef int i, j, t = 0, bit, rank
    if mr == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            for j in range(i, n):
                bit = <int> ((words[t >> 6] >> (t & 63)) & 1ULL)
                mr[i * n + j] = q - 1 if bit else 1
                mr[j * n + i] = mr[i * n + j]
                t += 1
        with nogil:
            rank = _rank_mod_dense(mr, n, q)
    finally:
        free(mr)
    return rank


def det_bareiss(words_arr, int n):
    """See symsing._kernels._pure.det_bareiss (here int64, so n <= 12)."""
    w_c = np.ascontiguousarray(words_arr, dtype=np.uint64)
    cdef u64[::1] words = w_c
    cdef i64* md = <i64*> malloc(n * n * sizeof(i64))
    cdef int i, j, t = 0, bit
    cdef i64 det
    if md == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            for j in range(i, n):
                bit = <int> ((words[t >> 6] >> (t & 63)) & 1ULL)
                md[i * n + j] = -1 if bit else 1
                md[j * n + i] = md[i * n + j]
                t += 1
        with nogil:
            det = _det_bareiss_dense(md, n)
    finally:
        free(md)
    return int(det)


cdef void _refresh_levels(int d, int n, i64 q, i64* digits, i64* a, i64* v,
                          double* cos_tab, double* prod, i64* phase) nogil:
    # Rebuild prefix products for digit positions d .. n-1.
    cdef int e, i
    cdef double f
    for e in range(d, n):
        f = cos_tab[(digits[e] * a[e]) % q]
        for i in range(e):
            f *= cos_tab[(digits[i] * a[e] + digits[e] * a[i]) % q]
        prod[e + 1] = prod[e] * f
        phase[e + 1] = (phase[e] + digits[e] * v[e]) % q


def fourier_sum(a_arr, v_arr, long long q, long long start, long long stop):
    """See symsing._kernels._pure.fourier_sum."""
    a_c = np.ascontiguousarray(a_arr, dtype=np.int64)
    v_c = np.ascontiguousarray(v_arr, dtype=np.int64)
    cdef i64[::1] a = a_c
    cdef i64[::1] v = v_c
    cdef int n = a.shape[0]
    cdef double* cos_tab = <double*> malloc(q * sizeof(double))
    cdef double* sin_tab = <double*> malloc(q * sizeof(double))
    cdef i64 digits[MAXN]
    cdef i64 phase[MAXN + 1]
    cdef double prod[MAXN + 1]
    cdef i64 code, r, rem
    cdef int i, d
    cdef double s_re = 0.0, c_re = 0.0, s_im = 0.0, c_im = 0.0
    cdef double term, y, tm
    if cos_tab == NULL or sin_tab == NULL:
        free(cos_tab)
        free(sin_tab)
        raise MemoryError()
    try:
        for r in range(q):
            cos_tab[r] = cos(2.0 * M_PI * r / q)
            sin_tab[r] = sin(2.0 * M_PI * r / q)
        rem = start
        for i in range(n - 1, -1, -1):
            digits[i] = rem % q
            rem = rem // q
        prod[0] = 1.0
        phase[0] = 0
        with nogil:
            _refresh_levels(0, n, q, digits, &a[0], &v[0], cos_tab, prod, phase)
            code = start
            while code < stop:
                term = prod[n]
                y = term * cos_tab[phase[n]] - c_re
                tm = s_re + y
                c_re = (tm - s_re) - y
                s_re = tm
                y = -term * sin_tab[phase[n]] - c_im
                tm = s_im + y
                c_im = (tm - s_im) - y
                s_im = tm
                code += 1
                if code >= stop:
                    break
                d = n - 1
                while True:
                    digits[d] += 1
                    if digits[d] == q:
                        digits[d] = 0
                        d -= 1
                    else:
                        break
                _refresh_levels(d, n, q, digits, &a[0], &v[0], cos_tab, prod, phase)
    finally:
        free(cos_tab)
        free(sin_tab)
    return s_re, s_im


cdef void _refresh_error_levels(int d, int n, i64 q, i64* digits, i64* a,
                                double* abs_tab, double* prod, i64* nz) nogil:
    cdef int e, i
    cdef double f
    cdef i64 c, arg
    for e in range(d, n):
        f = 1.0
        c = 0
        for i in range(e):
            arg = (digits[i] * a[e] + digits[e] * a[i]) % q
            f *= abs_tab[arg]
            if arg != 0:
                c += 1
        prod[e + 1] = prod[e] * f
        nz[e + 1] = nz[e] + c


def error_sums(a_arr, long long q, long long start, long long stop):
    """See symsing._kernels._pure.error_sums."""
    a_c = np.ascontiguousarray(a_arr, dtype=np.int64)
    cdef i64[::1] a = a_c
    cdef int n = a.shape[0]
    cdef int pairs = n * (n - 1) // 2
    cdef double* abs_tab = <double*> malloc(q * sizeof(double))
    cdef double* exp_tab = <double*> malloc((pairs + 1) * sizeof(double))
    cdef i64 digits[MAXN]
    cdef i64 nz[MAXN + 1]
    cdef double prod[MAXN + 1]
    cdef i64 code, r
    cdef i64 rem
    cdef int i, d
    cdef double s_val = 0.0, c_val = 0.0, s_bnd = 0.0, c_bnd = 0.0
    cdef double y, tm
    if abs_tab == NULL or exp_tab == NULL:
        free(abs_tab)
        free(exp_tab)
        raise MemoryError()
    try:
        for r in range(q):
            abs_tab[r] = cos(2.0 * M_PI * r / q)
            if abs_tab[r] < 0:
                abs_tab[r] = -abs_tab[r]
        for i in range(pairs + 1):
            exp_tab[i] = exp(-2.0 * i / (q * q))
        rem = start
        for i in range(n - 1, -1, -1):
            digits[i] = rem % q
            rem = rem // q
        prod[0] = 1.0
        nz[0] = 0
        with nogil:
            _refresh_error_levels(0, n, q, digits, &a[0], abs_tab, prod, nz)
            code = start
            while code < stop:
                if code != 0:
                    y = prod[n] - c_val
                    tm = s_val + y
                    c_val = (tm - s_val) - y
                    s_val = tm
                    y = exp_tab[nz[n]] - c_bnd
                    tm = s_bnd + y
                    c_bnd = (tm - s_bnd) - y
                    s_bnd = tm
                code += 1
                if code >= stop:
                    break
                d = n - 1
                while True:
                    digits[d] += 1
                    if digits[d] == q:
                        digits[d] = 0
                        d -= 1
                    else:
                        break
                _refresh_error_levels(d, n, q, digits, &a[0], abs_tab, prod, nz)
    finally:
        free(abs_tab)
        free(exp_tab)
    return s_val, s_bnd
