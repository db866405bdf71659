"""Singular parts of the 2D pipeline and their spectral coefficients.

The periodized kernel and its derivatives are split into closed-form
singular parts (products of log/inverse-power monomials with the radial
cutoff) plus smooth remainders.  This module evaluates the singular parts
pointwise and computes their Fourier coefficients over the cell
``[-pi, pi] x [-c_tilde, c_tilde]``:

* the log cores come from two auxiliary smooth functions whose high
  resolution FFT, divided by the symbol of the Laplacian, yields the
  coefficients (the FFT resolution sets the ~1e-7 accuracy floor of the
  whole pipeline);
* the inverse-power cores (monomial/r^2 times the cutoff) separate in
  polar coordinates, so each coefficient reduces to a 1D radial integral
  against a Bessel function, tabulated densely in |frequency| and splined.

Everything here is independent of the wavenumber and of the
quasi-momentum, which is what makes the cache reusable across parameter
sets (and worth persisting).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import j0, j1, jv

from .cutoff import RadialCutoff
from .errors import CacheMismatchError, GeometryError
from .fftops import analyze_samples
from .grid import ComplexGrid, freq_integers, wrap_coord
from .tableio import TableKind, TableRecord

#: inverse-power cores x1^a x2^b / r^2 * Y(r) needed by the derivative and
#: second-derivative-difference singular parts, in persistence order
BCORE_ORDER = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2))


def _basis_norm(c_tilde):
    return 2.0 * np.sqrt(np.pi * c_tilde)


# ---------------------------------------------------------------------------
# pointwise closed forms


def _split(pts):
    pts = np.asarray(pts, dtype=float)
    return pts[..., 0], pts[..., 1]


def _safe_log_r(r):
    with np.errstate(divide="ignore"):
        return np.where(r > 0.0, np.log(np.maximum(r, 1e-300)), 0.0)


def f1(pts, eps):
    """Log singular part -(1/2pi) ln|x| Y(|x|) of the periodized kernel."""
    x1, x2 = _split(pts)
    r = np.hypot(x1, x2)
    return -(0.5 / np.pi) * _safe_log_r(r) * RadialCutoff(eps)(r)


def f2(pts, eps):
    """Odd companion -(1/2pi) x1 ln|x| Y(|x|) (first quasi-momentum correction)."""
    x1, x2 = _split(pts)
    r = np.hypot(x1, x2)
    return -(0.5 / np.pi) * x1 * _safe_log_r(r) * RadialCutoff(eps)(r)


def h1(pts, k, alpha, eps):
    """Singular part of the rephased first x1-derivative kernel."""
    x1, x2 = _split(pts)
    r2 = x1 * x1 + x2 * x2
    r = np.sqrt(r2)
    lnr = _safe_log_r(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(r2 > 0.0, 1.0 / np.maximum(r2, 1e-300), 0.0)
    core = (-(0.5 * k * k) * x1 * lnr + x1 * inv - 1j * alpha * x1 * x1 * inv
            - 0.5 * alpha * alpha * x1**3 * inv)
    return -(0.5 / np.pi) * core * RadialCutoff(eps)(r)


def h2(pts, k, alpha, eps):
    """Singular part of the rephased first x2-derivative kernel.

    The log term carries x2 (mirror of h1 under the axis swap); this is
    what the small-argument expansion of the differentiated kernel gives,
    and it is required for the remainder to be C^1 at the origin.
    """
    x1, x2 = _split(pts)
    r2 = x1 * x1 + x2 * x2
    r = np.sqrt(r2)
    lnr = _safe_log_r(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(r2 > 0.0, 1.0 / np.maximum(r2, 1e-300), 0.0)
    core = (-(0.5 * k * k) * x2 * lnr + x2 * inv - 1j * alpha * x1 * x2 * inv
            - 0.5 * alpha * alpha * x1 * x1 * x2 * inv)
    return -(0.5 / np.pi) * core * RadialCutoff(eps)(r)


def _h_second(pts, dk2, alpha, eps, pq):
    x1, x2 = _split(pts)
    r2 = x1 * x1 + x2 * x2
    r = np.sqrt(r2)
    lnr = _safe_log_r(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(r2 > 0.0, 1.0 / np.maximum(r2, 1e-300), 0.0)
    if pq == "11":
        core = 0.5 * lnr - 0.5j * alpha * x1 * lnr + 0.5 * x1 * x1 * inv \
            - 0.5j * alpha * x1**3 * inv
    elif pq == "12":
        core = 0.5 * x1 * x2 * inv - 0.5j * alpha * x1 * x1 * x2 * inv
    elif pq == "22":
        core = 0.5 * lnr - 0.5j * alpha * x1 * lnr + 0.5 * x2 * x2 * inv \
            - 0.5j * alpha * x1 * x2 * x2 * inv
    else:
        raise ValueError(f"unknown component {pq!r}")
    # sign: the difference kernel expands as +(k1^2-k2^2)/(4pi) (ln r + ...),
    # from the +k^2 r^2 ln(r)/(8pi) term of the kernel's origin expansion
    return (dk2 / (2.0 * np.pi)) * core * RadialCutoff(eps)(r)


def h11(pts, k1, k2, alpha, eps):
    """Singular part of the two-wavenumber x1x1 second-derivative difference."""
    return _h_second(pts, k1 * k1 - k2 * k2, alpha, eps, "11")


def h12(pts, k1, k2, alpha, eps):
    return _h_second(pts, k1 * k1 - k2 * k2, alpha, eps, "12")


def h22(pts, k1, k2, alpha, eps):
    return _h_second(pts, k1 * k1 - k2 * k2, alpha, eps, "22")


def phi1(pts, eps):
    """Smooth annulus function whose FFT feeds the log-core coefficients.

    Equal to the classical-function part of the Laplacian of ln|x| Y(|x|);
    supported on eps <= |x| <= 2*eps and C^6 there.
    """
    x1, x2 = _split(pts)
    r = np.hypot(x1, x2)
    rad = RadialCutoff(eps)
    band = (r > eps) & (r < 2.0 * eps)
    rr = np.where(band, r, 1.0)
    out = (2.0 + np.log(rr)) * rad(rr, 1) / rr + rad(rr, 2) * np.log(rr)
    return np.where(band, out, 0.0)


# ---------------------------------------------------------------------------
# coefficient cache


@dataclass
class F12Cache:
    """Wavenumber-independent spectral coefficients of the singular parts.

    ``f1hat``/``f2hat`` cover the base pipeline; ``f2bhat`` (the x2 log
    core) and ``bcores`` (inverse-power cores) are present only when the
    cache was built with ``derivative_cores=True``.
    Arrays are (2N, 2N), axes (j1, j2), wraparound frequency order.
    """

    c_tilde: float
    eps: float
    fft_res: int
    n_modes: int
    f1hat: np.ndarray = field(repr=False)
    f2hat: np.ndarray = field(repr=False)
    f2bhat: np.ndarray = field(default=None, repr=False)
    bcores: dict = field(default=None, repr=False)

    @property
    def has_derivative_cores(self):
        return self.f2bhat is not None and self.bcores is not None


def _sn_slice(full, fft_res, n_modes):
    idx = np.r_[0:n_modes, fft_res - n_modes:fft_res]
    return np.ascontiguousarray(full[np.ix_(idx, idx)])


def compute_f12cache(c_tilde, eps, fft_res, n_modes, derivative_cores=False):
    """Build the coefficient cache for one (c_tilde, eps, fft_res, N) key."""
    if fft_res < 4 * n_modes:
        raise GeometryError(
            f"fft_res = {fft_res} must be at least 4*n_modes = {4 * n_modes}")
    r = fft_res
    x1 = wrap_coord(np.arange(r) * (2.0 * np.pi / r), 2.0 * np.pi)[:, None]
    x2 = wrap_coord(np.arange(r) * (2.0 * c_tilde / r), 2.0 * c_tilde)[None, :]
    rad = np.hypot(x1, x2)
    rc = RadialCutoff(eps)
    band = (rad > eps) & (rad < 2.0 * eps)
    rr = np.where(band, rad, 1.0)
    p1 = np.where(band, (2.0 + np.log(rr)) * rc(rr, 1) / rr + rc(rr, 2) * np.log(rr), 0.0)

    vol = 4.0 * np.pi * c_tilde
    norm = _basis_norm(c_tilde)
    n = n_modes
    p1hat = _sn_slice(analyze_samples(p1, vol, norm), r, n)
    p2hat = _sn_slice(analyze_samples(x1 * p1, vol, norm), r, n)
    p2bhat = _sn_slice(analyze_samples(x2 * p1, vol, norm), r, n) \
        if derivative_cores else None
    del p1

    j1f = freq_integers(2 * n).astype(float)[:, None]
    q2 = (freq_integers(2 * n).astype(float) * np.pi / c_tilde)[None, :]
    rho2 = j1f * j1f + q2 * q2
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_rho2 = np.where(rho2 > 0.0, 1.0 / np.where(rho2 > 0, rho2, 1.0), 0.0)

    f1h = inv_rho2 * (1.0 / norm + p1hat / (2.0 * np.pi))
    mean, _ = quad(lambda t: t * np.log(t) * float(rc(t)), 0.0, 2.0 * eps,
                   points=[eps], limit=200)
    f1h[0, 0] = -mean / norm
    f2h = inv_rho2 * (-2j * j1f * f1h + p2hat / (2.0 * np.pi))
    f2h[0, 0] = 0.0

    f2bh = None
    bcores = None
    if derivative_cores:
        f2bh = inv_rho2 * (-2j * q2 * f1h + p2bhat / (2.0 * np.pi))
        f2bh[0, 0] = 0.0
        bcores = _compute_bcores(c_tilde, eps, n)

    return F12Cache(c_tilde=c_tilde, eps=eps, fft_res=fft_res, n_modes=n,
                    f1hat=f1h, f2hat=f2h, f2bhat=f2bh, bcores=bcores)


def _radial_bessel_table(c_tilde, eps, n_modes):
    """Splines of H_{d,l}(rho) = int_0^{2eps} r^(d-1) Y(r) J_l(rho r) dr."""
    n = n_modes
    rho_max = float(np.hypot(n, n * np.pi / c_tilde)) * 1.01 + 1.0
    rho_grid = np.arange(0.0, rho_max + 0.1, 0.1)

    panels = max(8, int(np.ceil(rho_max * 2.0 * eps / 3.0)))
    gx, gw = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(0.0, 2.0 * eps, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    rq = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    wq = (half[:, None] * gw[None, :]).ravel()
    y = RadialCutoff(eps)(rq)

    def bessel(order, z):
        if order == 0:
            return j0(z)
        if order == 1:
            return j1(z)
        return jv(order, z)

    tables = {}
    for d, l in ((1, 1), (2, 0), (2, 2), (3, 1), (3, 3)):
        w_rad = wq * rq ** (d - 1) * y
        vals = np.empty(rho_grid.size)
        step = 2048
        for lo in range(0, rho_grid.size, step):
            hi = min(lo + step, rho_grid.size)
            z = rho_grid[lo:hi, None] * rq[None, :]
            vals[lo:hi] = bessel(l, z) @ w_rad
        tables[(d, l)] = CubicSpline(rho_grid, vals)
    return tables


def _compute_bcores(c_tilde, eps, n_modes):
    """Coefficients of every x1^a x2^b / r^2 * Y core over the mode square."""
    n = n_modes
    tables = _radial_bessel_table(c_tilde, eps, n)
    j1f = freq_integers(2 * n).astype(float)[:, None]
    q2 = (freq_integers(2 * n).astype(float) * np.pi / c_tilde)[None, :]
    rho = np.hypot(j1f + 0 * q2, q2 + 0 * j1f)
    safe = np.where(rho > 0.0, rho, 1.0)
    cos_t = np.where(rho > 0.0, j1f / safe, 1.0)
    sin_t = np.where(rho > 0.0, q2 / safe, 0.0)
    eit = cos_t + 1j * sin_t

    hvals = {key: spl(rho) for key, spl in tables.items()}
    pref = 2.0 * np.pi / _basis_norm(c_tilde)

    theta8 = 2.0 * np.pi * np.arange(8) / 8.0
    out = {}
    for a, b in BCORE_ORDER:
        d = a + b
        ang = np.fft.fft(np.cos(theta8) ** a * np.sin(theta8) ** b) / 8.0
        acc = np.zeros_like(rho, dtype=np.complex128)
        phase = np.ones_like(eit)
        for l in range(0, d + 1):
            cpos = ang[l]
            cneg = ang[(8 - l) % 8] if l > 0 else 0.0
            if abs(cpos) + abs(cneg) > 1e-14:
                h = hvals[(d, l)]
                acc += ((-1j) ** l) * h * (cpos * phase + cneg * np.conj(phase))
            phase = phase * eit
        out[(a, b)] = pref * acc
    return out


# ---------------------------------------------------------------------------
# persistence


def cache_to_record(cache):
    cells = (2.0 * np.pi, 2.0 * cache.c_tilde)
    arrays = [cache.f1hat, cache.f2hat]
    if cache.has_derivative_cores:
        arrays.append(cache.f2bhat)
        arrays.extend(cache.bcores[key] for key in BCORE_ORDER)
    grids = [ComplexGrid(a.shape, cells, a) for a in arrays]
    return TableRecord(
        kind=TableKind.F12CACHE2D,
        ints=(cache.n_modes, cache.fft_res, int(cache.has_derivative_cores)),
        doubles=(cache.c_tilde, cache.eps),
        grids=grids,
    )


def cache_from_record(record):
    if record.kind != TableKind.F12CACHE2D:
        raise CacheMismatchError(f"record kind {record.kind} is not a cache")
    n_modes, fft_res, has_cores = record.ints
    c_tilde, eps = record.doubles
    arrays = [g.data for g in record.grids]
    f1h, f2h = arrays[0], arrays[1]
    f2bh = None
    bcores = None
    if has_cores:
        f2bh = arrays[2]
        bcores = dict(zip(BCORE_ORDER, arrays[3:]))
    return F12Cache(c_tilde=c_tilde, eps=eps, fft_res=int(fft_res),
                    n_modes=int(n_modes), f1hat=f1h, f2hat=f2h,
                    f2bhat=f2bh, bcores=bcores)


def check_cache(cache, params):
    """Verify a cache matches a parameter set; raise CacheMismatchError if not."""
    if cache.c_tilde != params.c_tilde or cache.eps != params.eps:
        raise CacheMismatchError(
            f"cache built for (c_tilde={cache.c_tilde}, eps={cache.eps}), "
            f"params have ({params.c_tilde}, {params.eps})")
    if cache.n_modes != params.n_modes:
        raise CacheMismatchError(
            f"cache built for n_modes={cache.n_modes}, params have {params.n_modes}")
    if cache.fft_res < 4 * params.n_modes:
        raise CacheMismatchError(
            f"cache fft_res={cache.fft_res} below 4*n_modes={4 * params.n_modes}")
    return cache
