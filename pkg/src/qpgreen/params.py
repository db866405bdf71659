"""Physical and discretization parameters, vertical wavenumbers, validation."""

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, WoodAnomalyError

#: Default absolute floor on |beta_n|.  The defining series and the
#: coefficient formulas divide by beta_n and by beta_n -+ j*pi/c_tilde, so
#: "away from Wood anomalies" needs a concrete tolerance; configurable via
#: the ``wood_tol`` argument of :func:`validate`.
WOOD_TOL = 1e-6

#: Modes checked by the Wood guard: [-3N, 3N] covers both the coefficient
#: formulas (|j| < N) and the wider windows used by the series oracles.
GUARD_FACTOR = 3


def beta2d(n, k, alpha):
    """Vertical wavenumber sqrt(k^2 - (alpha+n)^2), evanescent branch i*sqrt(...).

    Vectorized over ``n``.  The result always has non-negative real and
    imaginary parts, exactly one of which is zero (away from anomalies).
    """
    an = np.asarray(n, dtype=float) + alpha
    d = k * k - an * an
    pos = np.sqrt(np.maximum(d, 0.0))
    neg = np.sqrt(np.maximum(-d, 0.0))
    return np.where(d >= 0.0, pos + 0.0j, 1j * neg)


def beta3d(n1, n2, k, alpha1, alpha2):
    """Doubly indexed vertical wavenumber for the 3D expansion."""
    a1 = np.asarray(n1, dtype=float) + alpha1
    a2 = np.asarray(n2, dtype=float) + alpha2
    d = k * k - a1 * a1 - a2 * a2
    pos = np.sqrt(np.maximum(d, 0.0))
    neg = np.sqrt(np.maximum(-d, 0.0))
    return np.where(d >= 0.0, pos + 0.0j, 1j * neg)


@dataclass(frozen=True)
class Params2D:
    """Parameters of the 2D pipeline.

    k : wavenumber (> 0)
    alpha : quasi-momentum
    n_modes : spectral half-width N; the working grid is 2N x 2N
    c : evaluation half-height (table used for |x2| < c)
    c_tilde : periodization half-height (> c)
    eps : radius of the singularity cutoff (support radius 2*eps)
    fft_res : resolution of the auxiliary FFTs for the singular-part
        coefficients (k-independent, cached)
    """

    k: float
    alpha: float
    n_modes: int
    c: float = 0.6
    c_tilde: float = 1.0
    eps: float = 0.2
    fft_res: int = 2048


@dataclass(frozen=True)
class Params3D:
    """Parameters of the 3D (Helmholtz / Maxwell) pipeline."""

    k: float
    alpha1: float
    alpha2: float
    n_modes: int
    c: float = 0.6
    c_tilde: float = 1.0
    eps: float = 0.2


def beta(n, params):
    """Vertical wavenumber for an integer index (2D) or index pair (3D)."""
    if isinstance(params, Params2D):
        return beta2d(n, params.k, params.alpha)
    n1, n2 = n
    return beta3d(n1, n2, params.k, params.alpha1, params.alpha2)


def _is_pow2(m):
    return m >= 1 and (m & (m - 1)) == 0


def _check_geometry(p):
    if p.k <= 0:
        raise GeometryError(f"wavenumber must be positive, got {p.k}")
    if p.c <= 0:
        raise GeometryError(f"evaluation half-height must be positive, got {p.c}")
    if p.c >= p.c_tilde:
        raise GeometryError(
            f"need c < c_tilde, got c={p.c}, c_tilde={p.c_tilde}"
        )
    if p.eps <= 0 or 2.0 * p.eps >= min(np.pi, p.c_tilde):
        raise GeometryError(
            f"need 0 < 2*eps < min(pi, c_tilde), got eps={p.eps}"
        )
    if 0.5 * (p.c + p.c_tilde) >= p.c_tilde:
        raise GeometryError("cutoff transition does not fit below c_tilde")
    if not _is_pow2(p.n_modes):
        raise GeometryError(f"n_modes must be a power of two, got {p.n_modes}")


def validate(params, wood_tol=WOOD_TOL):
    """Check all invariants of a parameter set; return it unchanged.

    Raises WoodAnomalyError when some |beta_n| over the guarded index range
    falls below ``wood_tol``, GeometryError for size violations.  Idempotent.
    """
    _check_geometry(params)
    lim = GUARD_FACTOR * params.n_modes
    if isinstance(params, Params2D):
        if not _is_pow2(params.fft_res):
            raise GeometryError(
                f"fft_res must be a power of two, got {params.fft_res}"
            )
        n = np.arange(-lim, lim + 1)
        babs = np.abs(beta2d(n, params.k, params.alpha))
        i = int(np.argmin(babs))
        if babs[i] < wood_tol:
            raise WoodAnomalyError(int(n[i]), float(babs[i]), wood_tol)
    else:
        n = np.arange(-lim, lim + 1)
        n1, n2 = np.meshgrid(n, n, indexing="ij")
        babs = np.abs(beta3d(n1, n2, params.k, params.alpha1, params.alpha2))
        flat = int(np.argmin(babs))
        i, j = np.unravel_index(flat, babs.shape)
        if babs[i, j] < wood_tol:
            raise WoodAnomalyError(
                (int(n[i]), int(n[j])), float(babs[i, j]), wood_tol
            )
    return params
