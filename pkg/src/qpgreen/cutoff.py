"""Smooth cutoff functions of class C^8.

Two cutoffs are used throughout: an axial one that is 1 on ``[-c, c]``
and dies off before ``(c + c_tilde)/2``, and a radial one that is 1 on
``[0, eps]`` and dies off before ``2*eps``.  Both transition through the
same polynomial step profile whose first eight derivatives vanish at the
ends of the transition, so every product built from them stays C^8.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

# Step profile p(s) = int_0^s u^8(1-u)^8 du / int_0^1 u^8(1-u)^8 du.
# Expanding (1-u)^8 gives p as a degree-17 polynomial with exact rational
# coefficients; p(0)=0, p(1)=1 and p^(m)(0)=p^(m)(1)=0 for m=1..8.
_RAW = [Fraction(comb(8, m) * (-1) ** m, 9 + m) for m in range(9)]
_TOTAL = sum(_RAW)
_STEP_COEF = np.array([float(c / _TOTAL) for c in _RAW])
_STEP_NORM = float(1 / _TOTAL)


def smoothstep(s, order=0):
    """Evaluate the C^8 step profile or one of its first two derivatives.

    The argument is clipped to [0, 1]; outside that range the profile is
    constant so clipping matches the analytic continuation used by the
    cutoffs below.
    """
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    if order == 0:
        acc = np.zeros_like(s)
        for m in range(8, -1, -1):
            acc = acc * s + _STEP_COEF[m]
        return acc * s**9
    if order == 1:
        return _STEP_NORM * s**8 * (1.0 - s) ** 8
    if order == 2:
        return _STEP_NORM * 8.0 * s**7 * (1.0 - s) ** 7 * (1.0 - 2.0 * s)
    raise ValueError(f"derivative order {order} not supported (0, 1 or 2)")


@dataclass(frozen=True)
class AxialCutoff:
    """Even cutoff in the non-periodic coordinate.

    Equals 1 for ``|t| <= c`` and 0 for ``|t| >= (c + c_tilde)/2``; the
    transition band has width ``(c_tilde - c)/2``.
    """

    c: float
    c_tilde: float

    @property
    def outer(self):
        return 0.5 * (self.c + self.c_tilde)

    def eval(self, t, order=0):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        width = 0.5 * (self.c_tilde - self.c)
        s = (a - self.c) / width
        band = (a > self.c) & (a < self.outer)
        if order == 0:
            out = np.where(a <= self.c, 1.0, 0.0)
            return np.where(band, 1.0 - smoothstep(s), out)
        if order == 1:
            # odd: d|t|/dt = sign(t)
            return np.where(band, -np.sign(t) * smoothstep(s, 1) / width, 0.0)
        if order == 2:
            return np.where(band, -smoothstep(s, 2) / width**2, 0.0)
        raise ValueError(f"derivative order {order} not supported (0, 1 or 2)")

    def __call__(self, t, order=0):
        return self.eval(t, order)


@dataclass(frozen=True)
class RadialCutoff:
    """Cutoff in the radial variable ``t >= 0``.

    Equals 1 on ``[0, eps]`` and 0 on ``[2*eps, inf)``.
    """

    eps: float

    def eval(self, t, order=0):
        t = np.asarray(t, dtype=float)
        s = (t - self.eps) / self.eps
        band = (t > self.eps) & (t < 2.0 * self.eps)
        if order == 0:
            out = np.where(t <= self.eps, 1.0, 0.0)
            return np.where(band, 1.0 - smoothstep(s), out)
        if order == 1:
            return np.where(band, -smoothstep(s, 1) / self.eps, 0.0)
        if order == 2:
            return np.where(band, -smoothstep(s, 2) / self.eps**2, 0.0)
        raise ValueError(f"derivative order {order} not supported (0, 1 or 2)")

    def __call__(self, t, order=0):
        return self.eval(t, order)


def eval_cutoff(which, t, order=0):
    """Evaluate a cutoff (an AxialCutoff or RadialCutoff instance)."""
    return which.eval(t, order)
