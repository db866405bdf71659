"""Order-4 local interpolation on periodic grids.

Tensor-product cubic Lagrange interpolation from the 4 nearest nodes per
axis (16 nodes in 2D, 64 in 3D), with periodic index wraparound.  The
interpolant reproduces nodal values exactly, is exact on cubics, and has
O(h^4) error on smooth periodic data.
"""

import numpy as np

from . import _dispatch
from .grid import ComplexGrid


def interpolate(grid: ComplexGrid, points):
    """Interpolate a periodic grid at physical points.

    Parameters
    ----------
    grid : ComplexGrid
    points : array_like, shape (ndim,) or (n, ndim)
        Physical coordinates; wrapped periodically per axis.

    Returns
    -------
    complex or (n,) complex ndarray
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != grid.ndim:
        raise ValueError(f"points have {pts.shape[1]} coords, grid is {grid.ndim}D")
    # fractional index coordinates; the kernels wrap modulo the extents
    fracs = [
        np.ascontiguousarray(pts[:, ax] * (grid.extents[ax] / grid.cells[ax]))
        for ax in range(grid.ndim)
    ]
    data = grid.data
    if grid.ndim == 2:
        out = _dispatch.interp2(data, fracs[0], fracs[1])
    elif grid.ndim == 3:
        out = _dispatch.interp3(data, fracs[0], fracs[1], fracs[2])
    else:
        raise ValueError("only 2D and 3D grids are supported")
    return out[0] if single else out
