# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled gate kernels (hot path).

Same contract as ``py_kernels``: in-place mutation of the flat complex128
amplitude array, MSB-first qubit indices. Loops are arranged so the
innermost run is contiguous (length 2**lowest_shift), which keeps the
kernels near memory bandwidth for any qubit placement.
"""

from libc.math cimport sqrt

import numpy as np

name = "compiled"

ctypedef double complex cplx

cdef double _ISQ2 = 1.0 / sqrt(2.0)
cdef cplx _J = 1j


def apply_h(cplx[::1] a, int n, int q):
    cdef int s = n - 1 - q
    cdef Py_ssize_t half = <Py_ssize_t>1 << s
    cdef Py_ssize_t nseg = (<Py_ssize_t>1 << n) >> (s + 1)
    cdef Py_ssize_t seg, j, base
    cdef cplx x, y
    with nogil:
        for seg in range(nseg):
            base = seg << (s + 1)
            for j in range(base, base + half):
                x = a[j]
                y = a[j + half]
                a[j] = (x + y) * _ISQ2
                a[j + half] = (x - y) * _ISQ2


def apply_x(cplx[::1] a, int n, int q):
    cdef int s = n - 1 - q
    cdef Py_ssize_t half = <Py_ssize_t>1 << s
    cdef Py_ssize_t nseg = (<Py_ssize_t>1 << n) >> (s + 1)
    cdef Py_ssize_t seg, j, base
    cdef cplx x
    with nogil:
        for seg in range(nseg):
            base = seg << (s + 1)
            for j in range(base, base + half):
                x = a[j]
                a[j] = a[j + half]
                a[j + half] = x


def apply_y(cplx[::1] a, int n, int q):
    cdef int s = n - 1 - q
    cdef Py_ssize_t half = <Py_ssize_t>1 << s
    cdef Py_ssize_t nseg = (<Py_ssize_t>1 << n) >> (s + 1)
    cdef Py_ssize_t seg, j, base
    cdef cplx x
    cdef cplx J = 1j
    with nogil:
        for seg in range(nseg):
            base = seg << (s + 1)
            for j in range(base, base + half):
                x = a[j]
                a[j] = -J * a[j + half]
                a[j + half] = J * x


def apply_z(cplx[::1] a, int n, int q):
    cdef int s = n - 1 - q
    cdef Py_ssize_t half = <Py_ssize_t>1 << s
    cdef Py_ssize_t nseg = (<Py_ssize_t>1 << n) >> (s + 1)
    cdef Py_ssize_t seg, j, base
    with nogil:
        for seg in range(nseg):
            base = (seg << (s + 1)) | half
            for j in range(base, base + half):
                a[j] = -a[j]


def apply_unitary1(cplx[::1] a, int n, int q, cplx m00, cplx m01, cplx m10, cplx m11):
    cdef int s = n - 1 - q
    cdef Py_ssize_t half = <Py_ssize_t>1 << s
    cdef Py_ssize_t nseg = (<Py_ssize_t>1 << n) >> (s + 1)
    cdef Py_ssize_t seg, j, base
    cdef cplx x, y
    with nogil:
        for seg in range(nseg):
            base = seg << (s + 1)
            for j in range(base, base + half):
                x = a[j]
                y = a[j + half]
                a[j] = m00 * x + m01 * y
                a[j + half] = m10 * x + m11 * y


def apply_cnot(cplx[::1] a, int n, int c, int t):
    cdef int sc = n - 1 - c
    cdef int st = n - 1 - t
    cdef int lo = sc if sc < st else st
    cdef int hi = st if sc < st else sc
    cdef Py_ssize_t cmask = <Py_ssize_t>1 << sc
    cdef Py_ssize_t tmask = <Py_ssize_t>1 << st
    cdef Py_ssize_t lo_len = <Py_ssize_t>1 << lo
    cdef Py_ssize_t mid_len = <Py_ssize_t>1 << (hi - lo - 1)
    cdef Py_ssize_t hi_seg = (<Py_ssize_t>1 << n) >> (hi + 1)
    cdef Py_ssize_t u, v, j, base, i1
    cdef cplx x
    with nogil:
        for u in range(hi_seg):
            for v in range(mid_len):
                base = ((u << (hi + 1)) | (v << (lo + 1))) | cmask
                for j in range(base, base + lo_len):
                    i1 = j | tmask
                    x = a[j]
                    a[j] = a[i1]
                    a[i1] = x


def apply_cz(cplx[::1] a, int n, int p, int q):
    cdef int sp = n - 1 - p
    cdef int sq = n - 1 - q
    cdef int lo = sp if sp < sq else sq
    cdef int hi = sq if sp < sq else sp
    cdef Py_ssize_t both = (<Py_ssize_t>1 << sp) | (<Py_ssize_t>1 << sq)
    cdef Py_ssize_t lo_len = <Py_ssize_t>1 << lo
    cdef Py_ssize_t mid_len = <Py_ssize_t>1 << (hi - lo - 1)
    cdef Py_ssize_t hi_seg = (<Py_ssize_t>1 << n) >> (hi + 1)
    cdef Py_ssize_t u, v, j, base
    with nogil:
        for u in range(hi_seg):
            for v in range(mid_len):
                base = ((u << (hi + 1)) | (v << (lo + 1))) | both
                for j in range(base, base + lo_len):
                    a[j] = -a[j]


def dominant_factor(cplx[::1] a, Py_ssize_t nrows, Py_ssize_t ncols):
    """Best rank-1 split of ``a`` viewed as (nrows, ncols).

    Returns (v, residual): v is the normalized dominant row (the trailing
    register's state when the split is a product) and residual the
    probability mass outside the rank-1 component row x v.
    """
    cdef Py_ssize_t i, j, best = 0
    cdef double w, bestw = -1.0, nv = 0.0, acc = 0.0
    cdef cplx s, x
    with nogil:
        for i in range(nrows):
            w = 0.0
            for j in range(i * ncols, (i + 1) * ncols):
                x = a[j]
                w += x.real * x.real + x.imag * x.imag
            if w > bestw:
                bestw = w
                best = i
    v_arr = np.empty(ncols, dtype=np.complex128)
    cdef cplx[::1] v = v_arr
    with nogil:
        for j in range(ncols):
            x = a[best * ncols + j]
            nv += x.real * x.real + x.imag * x.imag
        nv = sqrt(nv)
        for j in range(ncols):
            v[j] = a[best * ncols + j] / nv
        for i in range(nrows):
            s = 0.0
            for j in range(ncols):
                x = v[j]
                s = s + a[i * ncols + j] * (x.real - _J * x.imag)
            acc += s.real * s.real + s.imag * s.imag
    cdef double residual = 1.0 - acc
    if residual < 0.0:
        residual = 0.0
    return v_arr, residual


def apply_ccx(cplx[::1] a, int n, int c1, int c2, int t):
    cdef int s0 = n - 1 - c1
    cdef int s1 = n - 1 - c2
    cdef int s2 = n - 1 - t
    cdef Py_ssize_t cmask = (<Py_ssize_t>1 << s0) | (<Py_ssize_t>1 << s1)
    cdef Py_ssize_t tmask = <Py_ssize_t>1 << s2
    cdef int lo, mid, hi
    lo, mid, hi = s0, s1, s2
    if lo > mid:
        lo, mid = mid, lo
    if mid > hi:
        mid, hi = hi, mid
    if lo > mid:
        lo, mid = mid, lo
    cdef Py_ssize_t lo_len = <Py_ssize_t>1 << lo
    cdef Py_ssize_t mid_len = <Py_ssize_t>1 << (mid - lo - 1)
    cdef Py_ssize_t hi_len = <Py_ssize_t>1 << (hi - mid - 1)
    cdef Py_ssize_t hi_seg = (<Py_ssize_t>1 << n) >> (hi + 1)
    cdef Py_ssize_t u, v, w, j, base, i1
    cdef cplx x
    with nogil:
        for u in range(hi_seg):
            for v in range(hi_len):
                for w in range(mid_len):
                    base = ((u << (hi + 1)) | (v << (mid + 1)) |
                            (w << (lo + 1))) | cmask
                    for j in range(base, base + lo_len):
                        i1 = j | tmask
                        x = a[j]
                        a[j] = a[i1]
                        a[i1] = x
