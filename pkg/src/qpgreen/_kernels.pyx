# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot kernels (see kernels_py for the contract)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

ctypedef unsigned long long u64


cdef inline void _weights(double t, double* w) nogil:
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0
    w[1] = (t * t - 1.0) * (t - 2.0) / 2.0
    w[2] = -t * (t + 1.0) * (t - 2.0) / 2.0
    w[3] = t * (t * t - 1.0) / 6.0


cdef inline Py_ssize_t _wrap(Py_ssize_t i, Py_ssize_t m) nogil:
    i = i % m
    if i < 0:
        i += m
    return i


def interp2(const double complex[:, ::1] data, const double[::1] u,
            const double[::1] v):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t m0 = data.shape[0], m1 = data.shape[1]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t p, a, b, b0, b1
    cdef Py_ssize_t i0[4]
    cdef Py_ssize_t i1[4]
    cdef double w0[4]
    cdef double w1[4]
    cdef double fu, fv
    cdef double complex acc, row
    with nogil:
        for p in range(n):
            fu = floor(u[p])
            fv = floor(v[p])
            _weights(u[p] - fu, w0)
            _weights(v[p] - fv, w1)
            b0 = <Py_ssize_t>fu - 1
            b1 = <Py_ssize_t>fv - 1
            for a in range(4):
                i0[a] = _wrap(b0 + a, m0)
                i1[a] = _wrap(b1 + a, m1)
            acc = 0
            for a in range(4):
                row = 0
                for b in range(4):
                    row = row + w1[b] * data[i0[a], i1[b]]
                acc = acc + w0[a] * row
            out[p] = acc
    return out_arr


def interp3(const double complex[:, :, ::1] data, const double[::1] u,
            const double[::1] v, const double[::1] w):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t m0 = data.shape[0], m1 = data.shape[1], m2 = data.shape[2]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t p, a, b, c, b0, b1, b2
    cdef Py_ssize_t i0[4]
    cdef Py_ssize_t i1[4]
    cdef Py_ssize_t i2[4]
    cdef double w0[4]
    cdef double w1[4]
    cdef double w2[4]
    cdef double f0, f1, f2
    cdef double complex acc, plane, row
    with nogil:
        for p in range(n):
            f0 = floor(u[p])
            f1 = floor(v[p])
            f2 = floor(w[p])
            _weights(u[p] - f0, w0)
            _weights(v[p] - f1, w1)
            _weights(w[p] - f2, w2)
            b0 = <Py_ssize_t>f0 - 1
            b1 = <Py_ssize_t>f1 - 1
            b2 = <Py_ssize_t>f2 - 1
            for a in range(4):
                i0[a] = _wrap(b0 + a, m0)
                i1[a] = _wrap(b1 + a, m1)
                i2[a] = _wrap(b2 + a, m2)
            acc = 0
            for a in range(4):
                plane = 0
                for b in range(4):
                    row = 0
                    for c in range(4):
                        row = row + w2[c] * data[i0[a], i1[b], i2[c]]
                    plane = plane + w1[b] * row
                acc = acc + w0[a] * plane
            out[p] = acc
    return out_arr


cdef u64 _CRC_POLY = 0xC96C5795D7870F42ULL
cdef u64[256] _CRC_TABLE

cdef void _init_table() nogil:
    cdef u64 crc
    cdef int i, j
    for i in range(256):
        crc = <u64>i
        for j in range(8):
            if crc & 1ULL:
                crc = (crc >> 1) ^ _CRC_POLY
            else:
                crc = crc >> 1
        _CRC_TABLE[i] = crc

_init_table()


def crc64(data, u64 crc=0):
    """CRC-64/XZ of a bytes-like object (composable across chunks)."""
    cdef const unsigned char[::1] buf = memoryview(data).cast("B")
    cdef Py_ssize_t n = buf.shape[0], i
    cdef u64 state = crc ^ 0xFFFFFFFFFFFFFFFFULL
    with nogil:
        for i in range(n):
            state = _CRC_TABLE[(state ^ buf[i]) & 0xFFULL] ^ (state >> 8)
    return state ^ 0xFFFFFFFFFFFFFFFFULL
