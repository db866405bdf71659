"""Pure-Python (numpy) implementations of the hot kernels.

These are the fallbacks selected at import time when the compiled
extension is unavailable (see ``_dispatch``).  Semantics are identical:
tensor-product cubic Lagrange interpolation on the 4 nearest nodes per
axis with periodic wraparound, and CRC-64/XZ checksums.
"""

import numpy as np

_CHUNK = 16384


def _lagrange_weights(t):
    # nodes at offsets -1, 0, 1, 2 relative to floor(u); t = frac(u)
    w = np.empty(t.shape + (4,), dtype=float)
    w[..., 0] = -t * (t - 1.0) * (t - 2.0) / 6.0
    w[..., 1] = (t * t - 1.0) * (t - 2.0) / 2.0
    w[..., 2] = -t * (t + 1.0) * (t - 2.0) / 2.0
    w[..., 3] = t * (t * t - 1.0) / 6.0
    return w


def _axis_stencil(u, extent):
    iu = np.floor(u)
    t = u - iu
    base = (iu.astype(np.int64) - 1) % extent
    idx = (base[:, None] + np.arange(4)) % extent
    return idx, _lagrange_weights(t)


def interp2(data, u, v):
    """Bicubic values of ``data`` at fractional index coordinates (u, v)."""
    m0, m1 = data.shape
    out = np.empty(u.shape, dtype=np.complex128)
    for lo in range(0, u.size, _CHUNK):
        hi = min(lo + _CHUNK, u.size)
        i0, w0 = _axis_stencil(u[lo:hi], m0)
        i1, w1 = _axis_stencil(v[lo:hi], m1)
        vals = data[i0[:, :, None], i1[:, None, :]]
        out[lo:hi] = np.einsum("na,nb,nab->n", w0, w1, vals)
    return out


def interp3(data, u, v, w):
    """Tricubic values of ``data`` at fractional index coordinates (u, v, w)."""
    m0, m1, m2 = data.shape
    out = np.empty(u.shape, dtype=np.complex128)
    for lo in range(0, u.size, _CHUNK):
        hi = min(lo + _CHUNK, u.size)
        i0, w0 = _axis_stencil(u[lo:hi], m0)
        i1, w1 = _axis_stencil(v[lo:hi], m1)
        i2, w2 = _axis_stencil(w[lo:hi], m2)
        vals = data[i0[:, :, None, None], i1[:, None, :, None], i2[:, None, None, :]]
        out[lo:hi] = np.einsum("na,nb,nc,nabc->n", w0, w1, w2, vals)
    return out


# CRC-64/XZ: reflected polynomial 0xC96C5795D7870F42, init/xorout all ones.
_CRC_POLY = 0xC96C5795D7870F42
_MASK = 0xFFFFFFFFFFFFFFFF


def _make_table():
    table = []
    for i in range(256):
        crc = i
        for _ in range(8):
            crc = (crc >> 1) ^ _CRC_POLY if crc & 1 else crc >> 1
        table.append(crc)
    return tuple(table)


_CRC_TABLE = _make_table()


def crc64(data, crc=0):
    """CRC-64/XZ of a bytes-like object.

    Composable: ``crc64(b) == crc64(b[n:], crc64(b[:n]))``.
    """
    table = _CRC_TABLE
    state = crc ^ _MASK
    for b in memoryview(data).cast("B"):
        state = table[(state ^ b) & 0xFF] ^ (state >> 8)
    return state ^ _MASK
