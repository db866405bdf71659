"""Binary persistence for prepared tables and coefficient caches.

Layout (everything little-endian):

    magic   8 bytes  b"QPGREENT"
    version u2
    kind    u2
    n_ints  u2, n_doubles u2, n_grids u2, 6 pad bytes
    ints    n_ints  x i8     (kind-specific, e.g. n_modes, fft_res, flags)
    doubles n_doubles x f8   (kind-specific, e.g. k, alpha, c, c_tilde, eps)
    per grid: ndim u2 + 6 pad, extents ndim x u8, cells ndim x f8
    payload: per grid, complex128 samples row-major (interleaved re/im f8)
    crc     u8  CRC-64 of the payload bytes

Round-trips are bit-exact; the loader rejects mismatched magic, version or
checksum and truncated files.
"""

import struct
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from ._dispatch import crc64
from .errors import FormatError, TruncatedFileError
from .grid import ComplexGrid

MAGIC = b"QPGREENT"
VERSION = 1

_HEAD = struct.Struct("<8sHHHHH6x")
_GRIDHEAD = struct.Struct("<H6x")


class TableKind(IntEnum):
    F12CACHE2D = 1
    GREEN2D = 2
    DERIV2D = 3
    DIFF2D = 4
    GREEN3D = 5
    MAXWELL3D = 6


@dataclass
class TableRecord:
    """Header metadata plus payload grids, as stored on disk."""

    kind: TableKind
    ints: tuple = ()
    doubles: tuple = ()
    grids: list = field(default_factory=list)


def save_table(path, record):
    """Write a TableRecord; see the module docstring for the format."""
    kind = TableKind(record.kind)
    ints = tuple(int(v) for v in record.ints)
    doubles = tuple(float(v) for v in record.doubles)
    with open(path, "wb") as fh:
        fh.write(_HEAD.pack(MAGIC, VERSION, kind, len(ints), len(doubles),
                            len(record.grids)))
        fh.write(struct.pack(f"<{len(ints)}q", *ints))
        fh.write(struct.pack(f"<{len(doubles)}d", *doubles))
        for g in record.grids:
            fh.write(_GRIDHEAD.pack(g.ndim))
            fh.write(struct.pack(f"<{g.ndim}Q", *g.extents))
            fh.write(struct.pack(f"<{g.ndim}d", *g.cells))
        crc = 0
        for g in record.grids:
            buf = np.ascontiguousarray(g.data, dtype="<c16").tobytes()
            fh.write(buf)
            crc = crc64(buf, crc)
        fh.write(struct.pack("<Q", crc))


def _read_exact(fh, n, what):
    buf = fh.read(n)
    if len(buf) != n:
        raise TruncatedFileError(f"file ends inside {what} ({len(buf)}/{n} bytes)")
    return buf


def load_table(path):
    """Read a table file back into a TableRecord.

    Raises FormatError on magic/version/kind/checksum mismatch and
    TruncatedFileError when the file is shorter than its header declares.
    """
    with open(path, "rb") as fh:
        magic, version, kind, n_ints, n_doubles, n_grids = _HEAD.unpack(
            _read_exact(fh, _HEAD.size, "header"))
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")
        try:
            kind = TableKind(kind)
        except ValueError:
            raise FormatError(f"unknown table kind {kind}") from None
        ints = struct.unpack(f"<{n_ints}q", _read_exact(fh, 8 * n_ints, "ints"))
        doubles = struct.unpack(
            f"<{n_doubles}d", _read_exact(fh, 8 * n_doubles, "doubles"))
        shapes = []
        for _ in range(n_grids):
            (ndim,) = _GRIDHEAD.unpack(_read_exact(fh, _GRIDHEAD.size, "grid header"))
            extents = struct.unpack(f"<{ndim}Q", _read_exact(fh, 8 * ndim, "extents"))
            cells = struct.unpack(f"<{ndim}d", _read_exact(fh, 8 * ndim, "cells"))
            shapes.append((extents, cells))
        grids = []
        crc = 0
        for extents, cells in shapes:
            count = int(np.prod(extents))
            buf = _read_exact(fh, 16 * count, "payload")
            crc = crc64(buf, crc)
            data = np.frombuffer(buf, dtype="<c16").astype(np.complex128)
            grids.append(ComplexGrid(extents, cells, data.reshape(extents)))
        (stored,) = struct.unpack("<Q", _read_exact(fh, 8, "checksum"))
        if stored != crc:
            raise FormatError(
                f"payload checksum mismatch (stored {stored:#x}, computed {crc:#x})")
        return TableRecord(kind=kind, ints=ints, doubles=doubles, grids=grids)
