"""The 2D pipeline: spectral coefficients, prepared tables, evaluation.

Preparation computes the Fourier coefficients of the periodized kernel by
one oversampled 1D FFT per row plus the integration-by-parts weights,
subtracts the singular-part coefficients from the cache, and synthesizes
the regularized grid with a single 2D inverse FFT.  Evaluation then costs
one local interpolation plus closed-form add-backs per point; points with
|x2| beyond the table's half-height delegate to the eigenfunction series,
which is fast there.
"""

from dataclasses import dataclass, field

import numpy as np

from . import refseries, sing2d
from .cutoff import AxialCutoff
from .errors import EvalAtSourceError, NoConvergenceError, ParamMismatchError
from .fftops import forward1d, synthesize_nodes
from .grid import ComplexGrid, freq_integers, wrap_coord
from .interp import interpolate
from .params import Params2D, beta2d, validate
from .refseries import DEFAULT_CTL
from .tableio import TableKind, TableRecord

#: minimum length of the row FFT used for the cutoff correction integrals;
#: sampling only at 2N points aliases enough to spoil the coefficients'
#: ~1e-6 accuracy at small N, and longer rows are essentially free
MIN_ROW_FFT = 1024

#: |beta -+ j2*pi/c_tilde| below which the integration-by-parts form is
#: abandoned for direct quadrature of the defining integral (the 1 + C
#: factor cancels there and would amplify quadrature error)
RESONANCE_BAND = 1e-4

_SOURCE_RADIUS = 1e-14

STATUS_OK = 0
STATUS_AT_SOURCE = 1
STATUS_NO_CONVERGENCE = 2


def axial_transform(a, cutoff):
    """int_0^c_tilde exp(i a t) X(t) dt for an array of (possibly complex) a.

    Exact on the flat part of X, fixed Gauss rule on the transition band;
    used for near-resonant coefficients and by the coefficient oracles.
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    c = cutoff.c
    flat = np.where(
        np.abs(a) > 0.0,
        2.0 * np.exp(0.5j * a * c) * np.sin(0.5 * a * c) / np.where(a != 0, a, 1.0),
        c,
    )
    gx, gw = np.polynomial.legendre.leggauss(64)
    lo, hi = c, cutoff.outer
    t = 0.5 * (hi + lo) + 0.5 * (hi - lo) * gx
    w = 0.5 * (hi - lo) * gw
    band = (np.exp(1j * a[:, None] * t[None, :]) * (cutoff(t) * w)[None, :]).sum(axis=1)
    return flat + band


def compute_khat(params):
    """Spectral coefficients of the periodized kernel over the mode square.

    Returns a (2N, 2N) complex array, axes (j1, j2), wraparound order.
    """
    validate(params)
    n = params.n_modes
    m = 2 * n
    ct = params.c_tilde
    cutoff = AxialCutoff(params.c, ct)
    jrow = freq_integers(m)
    b = beta2d(jrow, params.k, params.alpha)[:, None]

    mq = max(m, MIN_ROW_FFT)
    t = np.arange(mq) * (2.0 * ct / mq)
    xp = cutoff(t, 1)
    w = np.exp(1j * b * t[None, :]) * xp[None, :]
    corr = (2.0 * ct / mq) * forward1d(w, axis=1)
    idx_minus = jrow % mq
    idx_plus = (-jrow) % mq

    q = (jrow.astype(float) * np.pi / ct)[None, :]
    total = np.zeros((m, m), dtype=np.complex128)
    for sign, idx in ((-1.0, idx_minus), (+1.0, idx_plus)):
        shift = b + sign * q
        ipart = 1j * (1.0 + corr[:, idx]) / shift
        res = np.abs(shift) < RESONANCE_BAND
        if res.any():
            rows, cols = np.nonzero(res)
            ipart[rows, cols] = axial_transform(shift[rows, cols], cutoff)
        total += ipart
    return total * 1j / (4.0 * np.sqrt(np.pi * ct) * b)


@dataclass
class GreenTable2D:
    """Prepared 2D evaluation table: regularized grid plus parameters."""

    params: Params2D
    l_grid: ComplexGrid
    lhat: np.ndarray = field(default=None, repr=False)


@dataclass
class DerivTable2D:
    """Prepared grids for the two regularized first-derivative kernels."""

    params: Params2D
    grid1: ComplexGrid
    grid2: ComplexGrid


@dataclass
class DiffTable2D:
    """Prepared grids for the second-derivative differences at two wavenumbers."""

    params_k1: Params2D
    params_k2: Params2D
    grid11: ComplexGrid
    grid12: ComplexGrid
    grid22: ComplexGrid


def _grid_cells(params):
    return (2.0 * np.pi, 2.0 * params.c_tilde)


def prepare2d(params, cache=None, keep_coeffs=False):
    """Build the evaluation table for one (k, alpha, N) parameter set."""
    validate(params)
    if cache is None:
        cache = sing2d.compute_f12cache(
            params.c_tilde, params.eps, params.fft_res, params.n_modes)
    sing2d.check_cache(cache, params)
    khat = compute_khat(params)
    lhat = khat - cache.f1hat + 1j * params.alpha * cache.f2hat
    nodes = synthesize_nodes(lhat, 2.0 * np.sqrt(np.pi * params.c_tilde))
    grid = ComplexGrid(nodes.shape, _grid_cells(params), nodes)
    return GreenTable2D(params, grid, lhat if keep_coeffs else None)


def _wrap_x1(x1):
    return wrap_coord(x1, 2.0 * np.pi)


def eval_g2d(table, x, ctl=DEFAULT_CTL):
    """Green's function value at one point (interpolation or series branch)."""
    p = table.params
    x1, x2 = float(x[0]), float(x[1])
    if abs(x2) >= p.c:
        return refseries.g2d_eigen((x1, x2), p, ctl)
    t = float(_wrap_x1(x1))
    if np.hypot(t, x2) < _SOURCE_RADIUS:
        raise EvalAtSourceError(f"point {x} coincides with a lattice source")
    pt = np.array([t, x2])
    val = interpolate(table.l_grid, pt)
    val += sing2d.f1(pt, p.eps) - 1j * p.alpha * sing2d.f2(pt, p.eps)
    return val * np.exp(1j * p.alpha * x1)


def eval_g2d_many(table, pts, ctl=DEFAULT_CTL):
    """Vectorized evaluation; returns (values, status) without raising.

    Status codes: 0 ok, 1 at-source, 2 series did not converge.
    """
    p = table.params
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    vals = np.full(pts.shape[0], np.nan, dtype=np.complex128)
    status = np.zeros(pts.shape[0], dtype=np.int8)

    series = np.abs(pts[:, 1]) >= p.c
    t = _wrap_x1(pts[:, 0])
    at_src = ~series & (np.hypot(t, pts[:, 1]) < _SOURCE_RADIUS)
    status[at_src] = STATUS_AT_SOURCE

    near = ~series & ~at_src
    if near.any():
        w = np.column_stack([t[near], pts[near, 1]])
        v = interpolate(table.l_grid, w)
        v += sing2d.f1(w, p.eps) - 1j * p.alpha * sing2d.f2(w, p.eps)
        vals[near] = v * np.exp(1j * p.alpha * pts[near, 0])
    for i in np.nonzero(series)[0]:
        try:
            vals[i] = refseries.g2d_eigen(pts[i], p, ctl)
        except NoConvergenceError:
            status[i] = STATUS_NO_CONVERGENCE
    return vals, status


def prepare2d_deriv(params, cache):
    """Build the first-derivative tables (needs a cache with derivative cores)."""
    validate(params)
    sing2d.check_cache(cache, params)
    if not cache.has_derivative_cores:
        raise ParamMismatchError("cache lacks derivative cores; rebuild with "
                                 "derivative_cores=True")
    n = params.n_modes
    ct = params.c_tilde
    al = params.alpha
    k2 = params.k**2
    khat = compute_khat(params)
    j1f = freq_integers(2 * n).astype(float)[:, None]
    q2 = (freq_integers(2 * n).astype(float) * np.pi / ct)[None, :]

    xln1 = -2.0 * np.pi * cache.f2hat         # coefficients of x1 ln r Y
    xln2 = -2.0 * np.pi * cache.f2bhat        # coefficients of x2 ln r Y
    bc = cache.bcores
    h1hat = (k2 / (4 * np.pi)) * xln1 - bc[(1, 0)] / (2 * np.pi) \
        + (1j * al / (2 * np.pi)) * bc[(2, 0)] + (al * al / (4 * np.pi)) * bc[(3, 0)]
    h2hat = (k2 / (4 * np.pi)) * xln2 - bc[(0, 1)] / (2 * np.pi) \
        + (1j * al / (2 * np.pi)) * bc[(1, 1)] + (al * al / (4 * np.pi)) * bc[(2, 1)]

    norm = 2.0 * np.sqrt(np.pi * ct)
    cells = _grid_cells(params)
    g1 = synthesize_nodes(1j * (al + j1f) * khat - h1hat, norm)
    g2 = synthesize_nodes(1j * q2 * khat - h2hat, norm)
    return DerivTable2D(params, ComplexGrid(g1.shape, cells, g1),
                        ComplexGrid(g2.shape, cells, g2))


def eval_g2d_deriv(table, x, ctl=DEFAULT_CTL):
    """Gradient (dG/dx1, dG/dx2) at one point."""
    p = table.params
    x1, x2 = float(x[0]), float(x[1])
    if abs(x2) >= p.c:
        return (refseries.g2d_deriv_eigen((x1, x2), p, ctl, "d1"),
                refseries.g2d_deriv_eigen((x1, x2), p, ctl, "d2"))
    t = float(_wrap_x1(x1))
    if np.hypot(t, x2) < _SOURCE_RADIUS:
        raise EvalAtSourceError(f"point {x} coincides with a lattice source")
    pt = np.array([t, x2])
    phase = np.exp(1j * p.alpha * x1)
    k1 = interpolate(table.grid1, pt) + sing2d.h1(pt, p.k, p.alpha, p.eps)
    k2 = interpolate(table.grid2, pt) + sing2d.h2(pt, p.k, p.alpha, p.eps)
    return phase * k1, phase * k2


def prepare2d_diff(params_k1, params_k2, cache):
    """Build the second-derivative-difference tables for two wavenumbers."""
    shared = ("alpha", "c", "c_tilde", "eps", "n_modes", "fft_res")
    for name in shared:
        if getattr(params_k1, name) != getattr(params_k2, name):
            raise ParamMismatchError(
                f"parameter {name} differs between the two wavenumber sets")
    validate(params_k1)
    validate(params_k2)
    sing2d.check_cache(cache, params_k1)
    if not cache.has_derivative_cores:
        raise ParamMismatchError("cache lacks derivative cores; rebuild with "
                                 "derivative_cores=True")
    n = params_k1.n_modes
    ct = params_k1.c_tilde
    al = params_k1.alpha
    dk2 = params_k1.k**2 - params_k2.k**2

    dkhat = compute_khat(params_k1) - compute_khat(params_k2)
    j1f = freq_integers(2 * n).astype(float)[:, None]
    q2 = (freq_integers(2 * n).astype(float) * np.pi / ct)[None, :]
    a1 = al + j1f

    ln = -2.0 * np.pi * cache.f1hat
    xln1 = -2.0 * np.pi * cache.f2hat
    bc = cache.bcores
    pref = dk2 / (2.0 * np.pi)
    h11hat = pref * (0.5 * ln - 0.5j * al * xln1 + 0.5 * bc[(2, 0)]
                     - 0.5j * al * bc[(3, 0)])
    h12hat = pref * (0.5 * bc[(1, 1)] - 0.5j * al * bc[(2, 1)])
    h22hat = pref * (0.5 * ln - 0.5j * al * xln1 + 0.5 * bc[(0, 2)]
                     - 0.5j * al * bc[(1, 2)])

    norm = 2.0 * np.sqrt(np.pi * ct)
    cells = _grid_cells(params_k1)
    g11 = synthesize_nodes(-(a1 * a1) * dkhat - h11hat, norm)
    g12 = synthesize_nodes(-(a1 * q2) * dkhat - h12hat, norm)
    g22 = synthesize_nodes(-(q2 * q2) * dkhat - h22hat, norm)
    return DiffTable2D(params_k1, params_k2,
                       ComplexGrid(g11.shape, cells, g11),
                       ComplexGrid(g12.shape, cells, g12),
                       ComplexGrid(g22.shape, cells, g22))


def eval_t_diff(table, x, ctl=DEFAULT_CTL):
    """Second-derivative differences (T11, T12, T22) between the two wavenumbers."""
    p1, p2 = table.params_k1, table.params_k2
    x1, x2 = float(x[0]), float(x[1])
    if abs(x2) >= p1.c:
        out = []
        for pq in ("11", "12", "22"):
            out.append(refseries.g2d_secondderiv_eigen((x1, x2), p1, ctl, pq)
                       - refseries.g2d_secondderiv_eigen((x1, x2), p2, ctl, pq))
        return tuple(out)
    t = float(_wrap_x1(x1))
    if np.hypot(t, x2) < _SOURCE_RADIUS:
        raise EvalAtSourceError(f"point {x} coincides with a lattice source")
    pt = np.array([t, x2])
    phase = np.exp(1j * p1.alpha * x1)
    k1, k2, al, eps = p1.k, p2.k, p1.alpha, p1.eps
    t11 = interpolate(table.grid11, pt) + sing2d.h11(pt, k1, k2, al, eps)
    t12 = interpolate(table.grid12, pt) + sing2d.h12(pt, k1, k2, al, eps)
    t22 = interpolate(table.grid22, pt) + sing2d.h22(pt, k1, k2, al, eps)
    return phase * t11, phase * t12, phase * t22


# ---------------------------------------------------------------------------
# persistence


def _params_doubles(p):
    return (p.k, p.alpha, p.c, p.c_tilde, p.eps)


def _params_from(doubles, ints):
    k, alpha, c, ct, eps = doubles[:5]
    return Params2D(k=k, alpha=alpha, n_modes=int(ints[0]), c=c, c_tilde=ct,
                    eps=eps, fft_res=int(ints[1]))


def table_to_record(table):
    if isinstance(table, GreenTable2D):
        return TableRecord(TableKind.GREEN2D, (table.params.n_modes,
                           table.params.fft_res), _params_doubles(table.params),
                           [table.l_grid])
    if isinstance(table, DerivTable2D):
        return TableRecord(TableKind.DERIV2D, (table.params.n_modes,
                           table.params.fft_res), _params_doubles(table.params),
                           [table.grid1, table.grid2])
    if isinstance(table, DiffTable2D):
        p1, p2 = table.params_k1, table.params_k2
        return TableRecord(TableKind.DIFF2D, (p1.n_modes, p1.fft_res),
                           (p1.k, p2.k, p1.alpha, p1.c, p1.c_tilde, p1.eps),
                           [table.grid11, table.grid12, table.grid22])
    raise TypeError(f"not a 2D table: {type(table)!r}")


def table_from_record(record):
    if record.kind == TableKind.GREEN2D:
        return GreenTable2D(_params_from(record.doubles, record.ints),
                            record.grids[0])
    if record.kind == TableKind.DERIV2D:
        return DerivTable2D(_params_from(record.doubles, record.ints),
                            record.grids[0], record.grids[1])
    if record.kind == TableKind.DIFF2D:
        k1, k2, alpha, c, ct, eps = record.doubles
        n, fft_res = int(record.ints[0]), int(record.ints[1])
        mk = lambda k: Params2D(k=k, alpha=alpha, n_modes=n, c=c, c_tilde=ct,
                                eps=eps, fft_res=fft_res)
        return DiffTable2D(mk(k1), mk(k2), *record.grids)
    raise TypeError(f"record kind {record.kind} is not a 2D table")
