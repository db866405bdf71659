"""Slow but trustworthy evaluators of the defining series.

Everything here is computed straight from the eigenfunction expansions or
the image expansion, with explicit tail control; no FFT machinery is
involved.  These functions are the correctness oracles for the fast
pipelines, so they favour transparency over speed.

The eigenfunction sums converge like exp(-|beta_n| |x_last|), so they are
fast away from the periodicity axis and fail as the last coordinate goes
to zero.  The image sum converges conditionally (Hankel terms decay like
n^(-1/2) with oscillation); with acceleration enabled it is usable on the
axis itself, where the eigenfunction route cannot go.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import hankel1

from .errors import EvalAtSourceError, NoConvergenceError
from .params import beta2d, beta3d

_SOURCE_RADIUS = 1e-12


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the reference series.

    tail_tol : absolute tolerance on the neglected tail
    max_terms : hard cap on 2D series terms
    max_cells : hard cap on 3D window cells
    accel : "none" or "euler_shanks"; acceleration applied to the
        conditionally convergent image sum (iterated Shanks via the
        epsilon algorithm on symmetric partial sums)
    """

    tail_tol: float = 1e-12
    max_terms: int = 10_000_000
    max_cells: int = 400_000_000
    accel: str = "euler_shanks"


DEFAULT_CTL = SeriesControl()


def _factor2d(which, an, bn, sgn):
    if which == "g":
        return 1.0
    if which == "d1":
        return 1j * an
    if which == "d2":
        return 1j * bn * sgn
    if which == "11":
        return -(an * an)
    if which == "12":
        return (1j * an) * (1j * bn * sgn)
    if which == "22":
        return -(bn * bn)
    raise ValueError(f"unknown derivative selector {which!r}")


def _eigen2d(x, params, ctl, which):
    x1, x2 = float(x[0]), float(x[1])
    ax2 = abs(x2)
    sgn = 1.0 if x2 >= 0 else -1.0
    if ax2 == 0.0:
        raise NoConvergenceError(
            "eigenfunction series does not converge on the axis x2 = 0")
    k, al = params.k, params.alpha
    m_edge = int(np.ceil(k + abs(al))) + 4
    total = 0.0 + 0.0j
    prev = 0
    n_used = 0
    while True:
        n_pos = np.arange(prev, m_edge + 1)
        n = np.concatenate([n_pos, -n_pos[n_pos > 0]])
        bn = beta2d(n, k, al)
        an = al + n
        terms = _factor2d(which, an, bn, sgn) * np.exp(1j * an * x1 + 1j * bn * ax2) / bn
        total += terms.sum()
        n_used += n.size
        if n_used > ctl.max_terms:
            raise NoConvergenceError(
                f"series needs more than {ctl.max_terms} terms at |x2| = {ax2:.3g}")
        # geometric tail bound once the window edge is evanescent
        b_next = np.abs(beta2d(np.array([m_edge + 1, -(m_edge + 1)]), k, al))
        b_edge = np.abs(beta2d(np.array([m_edge, -m_edge]), k, al))
        if b_edge.min() > k:
            ratio = np.exp(-float(b_next.min() - b_edge.min()) * ax2)
            ratio = min(ratio, np.exp(-0.5 * ax2))
            edge_mag = float(np.abs(terms[np.abs(n) == m_edge]).sum())
            tail = edge_mag * ratio / (1.0 - ratio)
            if tail < ctl.tail_tol * 4.0 * np.pi:
                break
        prev = m_edge + 1
        m_edge = int(np.ceil(m_edge * 1.5)) + 8
    return total * 1j / (4.0 * np.pi)


def g2d_eigen(x, params, ctl=DEFAULT_CTL):
    """2D quasi-periodic Green's function from the eigenfunction expansion."""
    return _eigen2d(x, params, ctl, "g")


def g2d_deriv_eigen(x, params, ctl=DEFAULT_CTL, which="d1"):
    """First derivative by term-wise differentiation ("d1" or "d2")."""
    return _eigen2d(x, params, ctl, which)


def g2d_secondderiv_eigen(x, params, ctl=DEFAULT_CTL, which="11"):
    """Second derivative by term-wise differentiation ("11", "12" or "22")."""
    return _eigen2d(x, params, ctl, which)


def _wynn_estimates(partial):
    """Diagonal estimates from the epsilon algorithm on a partial-sum sequence."""
    e_prev = np.zeros(len(partial) + 1, dtype=complex)
    e_cur = np.asarray(partial, dtype=complex)
    ests = [e_cur[-1]]
    for col in range(1, len(partial)):
        d = np.diff(e_cur)
        small = np.abs(d) < 1e-300
        d[small] = 1e-300
        e_next = e_prev[1:len(e_cur)] + 1.0 / d
        e_prev, e_cur = e_cur, e_next
        if col % 2 == 0:
            ests.append(e_cur[-1])
        if len(e_cur) < 2:
            break
    return ests


def g2d_image(x, params, ctl=DEFAULT_CTL):
    """2D quasi-periodic Green's function from the image expansion.

    Conditionally convergent; with ctl.accel == "euler_shanks" the
    symmetric partial sums are accelerated by the epsilon algorithm,
    which reaches near machine accuracy with a few hundred Hankel terms
    and works on the axis x2 = 0.
    """
    x1, x2 = float(x[0]), float(x[1])
    k, al = params.k, params.alpha
    if ctl.accel == "none":
        return _image_plain(x1, x2, k, al, ctl)
    n_sums = 96
    prev_est = None
    while n_sums <= 1600:
        n = np.arange(-n_sums, n_sums + 1)
        rn = np.hypot(x1 - 2.0 * np.pi * n, x2)
        if rn.min() < _SOURCE_RADIUS:
            raise EvalAtSourceError(f"point {x} sits on an image source")
        terms = 0.25j * np.exp(2j * np.pi * al * n) * hankel1(0, k * rn)
        center = n_sums
        ring = terms[center + 1:] + terms[center - 1::-1]
        partial = terms[center] + np.concatenate([[0.0], np.cumsum(ring)])
        ests = _wynn_estimates(partial[4:])
        gaps = np.abs(np.diff(ests))
        best = int(np.argmin(gaps)) + 1
        est, gap = ests[best], gaps[best - 1]
        if gap < ctl.tail_tol:
            return est
        if prev_est is not None and abs(est - prev_est) < ctl.tail_tol:
            return est
        prev_est = est
        n_sums *= 2
    raise NoConvergenceError(
        f"accelerated image sum did not stabilize to {ctl.tail_tol:g} at {x}")


def _image_plain(x1, x2, k, al, ctl):
    total = 0.0 + 0.0j
    m, prev = 256, 0
    last = np.inf
    while m <= ctl.max_terms:
        n = np.arange(prev, m + 1)
        n = np.concatenate([n, -n[1:]]) if prev == 0 else np.concatenate([n, -n])
        rn = np.hypot(x1 - 2.0 * np.pi * n, x2)
        if rn.min() < _SOURCE_RADIUS:
            raise EvalAtSourceError(f"point {(x1, x2)} sits on an image source")
        block = (0.25j * np.exp(2j * np.pi * al * n) * hankel1(0, k * rn)).sum()
        total += block
        if abs(block) < ctl.tail_tol and last < ctl.tail_tol:
            return total
        last = abs(block)
        prev, m = m + 1, 2 * m
    raise NoConvergenceError("plain image sum exhausted max_terms")


def g2d_oracle(x, params, ctl=DEFAULT_CTL):
    """Best-available 2D reference value.

    Uses the eigenfunction expansion away from the x2 = 0 axis and the
    accelerated image expansion near/on it.
    """
    if abs(float(x[1])) >= 0.05:
        return g2d_eigen(x, params, ctl)
    return g2d_image(x, params, ctl)


def _factor3d(pq, a1, a2, bn, sgn):
    comps = {"1": 1j * a1, "2": 1j * a2, "3": 1j * bn * sgn}
    return comps[pq[0]] * comps[pq[1]]


def _eigen3d(x, params, ctl, pq=None):
    x1, x2, x3 = (float(v) for v in x)
    ax3 = abs(x3)
    sgn = 1.0 if x3 >= 0 else -1.0
    if ax3 == 0.0:
        raise NoConvergenceError(
            "eigenfunction series does not converge on the plane x3 = 0")
    k, al1, al2 = params.k, params.alpha1, params.alpha2
    m_edge = int(np.ceil(k + abs(al1) + abs(al2))) + 4
    total = 0.0 + 0.0j
    prev = -1
    cells = 0
    while True:
        rng = np.arange(-m_edge, m_edge + 1)
        n1, n2 = np.meshgrid(rng, rng, indexing="ij")
        mask = np.maximum(np.abs(n1), np.abs(n2)) > prev
        n1, n2 = n1[mask], n2[mask]
        bn = beta3d(n1, n2, k, al1, al2)
        a1, a2 = al1 + n1, al2 + n2
        phase = np.exp(1j * a1 * x1 + 1j * a2 * x2 + 1j * bn * ax3)
        fac = 1.0 if pq is None else _factor3d(pq, a1, a2, bn, sgn)
        terms = fac * phase / bn
        total += terms.sum()
        cells += n1.size
        if cells > ctl.max_cells:
            raise NoConvergenceError(
                f"3D series needs more than {ctl.max_cells} cells at |x3| = {ax3:.3g}")
        on_ring = np.maximum(np.abs(n1), np.abs(n2)) == m_edge
        edge_mag = float(np.abs(terms[on_ring]).sum())
        b_ring = np.abs(bn[on_ring]).min()
        # next-ring minimum of |beta| sits where the free index is nearest
        # to -alpha; check the four candidate sides
        m1 = m_edge + 1
        nr1, nr2 = -round(al1), -round(al2)
        cand1 = np.array([m1, -m1, nr1, nr1])
        cand2 = np.array([nr2, nr2, m1, -m1])
        b_next = np.abs(beta3d(cand1, cand2, k, al1, al2)).min()
        if b_ring > k and b_next > b_ring:
            ratio = min(np.exp(-float(b_next - b_ring) * ax3), np.exp(-0.5 * ax3))
            tail = edge_mag * ratio / (1.0 - ratio)
            if tail < ctl.tail_tol * 8.0 * np.pi**2:
                break
        prev = m_edge
        m_edge = int(np.ceil(m_edge * 1.4)) + 8
    return total * 1j / (8.0 * np.pi**2)


def g3d_eigen(x, params, ctl=DEFAULT_CTL):
    """3D doubly quasi-periodic Green's function from its eigenfunction expansion."""
    return _eigen3d(x, params, ctl)


def g3d_secondderiv_eigen(x, params, ctl=DEFAULT_CTL, pq="11"):
    """Second derivative d^2 G / dx_p dx_q by term-wise differentiation."""
    return _eigen3d(x, params, ctl, pq=pq)


def maxwell_oracle(x, params, ctl=DEFAULT_CTL):
    """3x3 Green's tensor G*I + Hessian(G)/k^2 assembled from the series."""
    g = g3d_eigen(x, params, ctl)
    k2 = params.k**2
    out = np.zeros((3, 3), dtype=complex)
    for p in range(3):
        for q in range(p, 3):
            h = g3d_secondderiv_eigen(x, params, ctl, pq=f"{p + 1}{q + 1}")
            out[p, q] = h / k2
            out[q, p] = out[p, q]
    out[np.diag_indices(3)] += g
    return out
