# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels for truncated q-series.

Only the fixed-width fast paths live here. Inputs that do not fit are
signalled by returning ``None`` and the caller falls back to the pure
Python implementation in :mod:`halfint4._kernels_py`.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    typedef __int128 hi_int128;
    """
    ctypedef long long hi_int128


cdef object _from_int128(hi_int128 x):
    cdef bint neg = x < 0
    cdef unsigned long long lo, hi
    if neg:
        x = -x
    lo = <unsigned long long>(x & <hi_int128>0xFFFFFFFFFFFFFFFF)
    hi = <unsigned long long>(x >> 64)
    v = (<object>hi << 64) | <object>lo
    return -v if neg else v


def convolve(list a, list b, Py_ssize_t n):
    """Truncated Cauchy product of integer lists, or None if out of range.

    Uses int64 accumulators when the worst-case coefficient bound fits,
    __int128 accumulators when it fits in 126 bits.
    """
    cdef Py_ssize_t la = min(len(a), n), lb = min(len(b), n)
    cdef Py_ssize_t i, j, k, top, nnz = 0
    cdef int64_t *ca
    cdef int64_t *cb
    cdef Py_ssize_t *nz
    cdef int64_t ai
    cdef int64_t *acc64
    cdef hi_int128 *acc128
    cdef hi_int128 ai128

    if n <= 0:
        return []
    if la == 0 or lb == 0:
        return [0] * n

    ma = max(abs(x) for x in a[:la])
    mb = max(abs(x) for x in b[:lb])
    if ma >= (1 << 63) or mb >= (1 << 63):
        return None
    bound = ma * mb * min(la, lb)
    if bound >= (1 << 126):
        return None

    ca = <int64_t *>malloc(la * sizeof(int64_t))
    cb = <int64_t *>malloc(lb * sizeof(int64_t))
    nz = <Py_ssize_t *>malloc(la * sizeof(Py_ssize_t))
    if ca == NULL or cb == NULL or nz == NULL:
        free(ca); free(cb); free(nz)
        raise MemoryError()
    try:
        for i in range(la):
            ca[i] = a[i]
            if ca[i] != 0:
                nz[nnz] = i
                nnz += 1
        for j in range(lb):
            cb[j] = b[j]

        if bound < (1 << 63):
            acc64 = <int64_t *>malloc(n * sizeof(int64_t))
            if acc64 == NULL:
                raise MemoryError()
            try:
                for i in range(n):
                    acc64[i] = 0
                for j in range(nnz):
                    i = nz[j]
                    ai = ca[i]
                    top = min(lb, n - i)
                    for k in range(top):
                        acc64[i + k] += ai * cb[k]
                return [acc64[i] for i in range(n)]
            finally:
                free(acc64)

        acc128 = <hi_int128 *>malloc(n * sizeof(hi_int128))
        if acc128 == NULL:
            raise MemoryError()
        try:
            for i in range(n):
                acc128[i] = 0
            for j in range(nnz):
                i = nz[j]
                ai128 = ca[i]
                top = min(lb, n - i)
                for k in range(top):
                    acc128[i + k] += ai128 * cb[k]
            return [_from_int128(acc128[i]) for i in range(n)]
        finally:
            free(acc128)
    finally:
        free(ca)
        free(cb)
        free(nz)


def sigma1_table(Py_ssize_t n):
    """sigma_1(m) for 0 <= m < n, with sigma_1(0) = 0."""
    cdef Py_ssize_t d, m
    cdef int64_t *s
    if n <= 0:
        return []
    s = <int64_t *>malloc(n * sizeof(int64_t))
    if s == NULL:
        raise MemoryError()
    try:
        for m in range(n):
            s[m] = 0
        for d in range(1, n):
            for m in range(d, n, d):
                s[m] += d
        return [s[m] for m in range(n)]
    finally:
        free(s)
