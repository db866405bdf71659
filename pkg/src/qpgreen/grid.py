"""Periodic uniform grids of complex samples."""

from dataclasses import dataclass, field

import numpy as np


def freq_integers(extent):
    """Integer frequencies j in [-extent/2, extent/2) in storage (wraparound) order."""
    return np.fft.fftfreq(extent, d=1.0 / extent).astype(np.int64)


def wrap_coord(x, period):
    """Wrap coordinates into [-period/2, period/2)."""
    half = 0.5 * period
    return np.mod(np.asarray(x, dtype=float) + half, period) - half


@dataclass
class ComplexGrid:
    """Uniform periodic grid of complex double samples.

    ``extents`` gives the number of samples per axis and ``cells`` the
    physical period per axis.  Index 0 sits at the physical origin and
    index j along an axis corresponds to coordinate j*(period/extent)
    wrapped into [-period/2, period/2); indexing is modulo each extent.
    Data is row-major with axis order (x1, x2[, x3]).
    """

    extents: tuple
    cells: tuple
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.extents = tuple(int(m) for m in self.extents)
        self.cells = tuple(float(p) for p in self.cells)
        if len(self.extents) != len(self.cells):
            raise ValueError("extents and cells must have the same length")
        data = np.ascontiguousarray(self.data, dtype=np.complex128)
        if data.shape != self.extents:
            if data.size != int(np.prod(self.extents)):
                raise ValueError(
                    f"data size {data.size} != prod(extents) {np.prod(self.extents)}"
                )
            data = data.reshape(self.extents)
        self.data = data

    @property
    def ndim(self):
        return len(self.extents)

    def node_coords(self, axis):
        """Wrapped physical coordinates of the nodes along one axis."""
        m = self.extents[axis]
        period = self.cells[axis]
        return wrap_coord(np.arange(m) * (period / m), period)

    def spacing(self, axis):
        return self.cells[axis] / self.extents[axis]
