"""Discrete Fourier transforms with the layout used throughout the package.

Convention: the forward transform of samples g_m on a uniform periodic grid
computes sums of g_m * exp(-i <frequency, point>) with no normalization,
frequencies being 2*pi*j/period with integer j in [-M/2, M/2) stored in
wraparound order; the inverse carries the 1/(product of extents) factor.
This is exactly the numpy/scipy convention, so the wrappers below are thin;
they exist to pin the contract (and the worker count) in one place.
"""

import os

import numpy as np
import scipy.fft as _sfft

_WORKERS = min(os.cpu_count() or 1, 4)


def forward(a, axes=None):
    return _sfft.fftn(np.asarray(a, dtype=np.complex128), axes=axes, workers=_WORKERS)


def inverse(a, axes=None):
    return _sfft.ifftn(np.asarray(a, dtype=np.complex128), axes=axes, workers=_WORKERS)


def forward1d(a, axis=-1):
    return _sfft.fft(np.asarray(a, dtype=np.complex128), axis=axis, workers=_WORKERS)


def synthesize_nodes(coeffs, basis_norm):
    """Grid values of sum_j c_j * phi_j from coefficients in wraparound order.

    phi_j(x) = exp(i <freq_j, x>)/basis_norm, so the node values are
    (prod extents / basis_norm) * ifftn(c).
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    return (c.size / basis_norm) * _sfft.ifftn(c, workers=_WORKERS)


def analyze_samples(samples, cell_volume, basis_norm):
    """Coefficients <f, conj(phi_j)> from samples, by the periodic trapezoid rule."""
    s = np.asarray(samples, dtype=np.complex128)
    scale = cell_volume / (s.size * basis_norm)
    return scale * _sfft.fftn(s, workers=_WORKERS)
