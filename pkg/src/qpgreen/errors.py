"""Exception types shared across the package."""


class QpgreenError(Exception):
    """Base class for all qpgreen errors."""


class ValidationError(QpgreenError, ValueError):
    """Parameter set violates a documented invariant."""


class WoodAnomalyError(ValidationError):
    """Some vertical wavenumber is (numerically) zero.

    Attributes
    ----------
    n : int or tuple of int
        Offending mode index.
    beta_abs : float
        Magnitude of the vanishing vertical wavenumber.
    """

    def __init__(self, n, beta_abs, tol):
        self.n = n
        self.beta_abs = beta_abs
        self.tol = tol
        super().__init__(
            f"Wood anomaly: |beta_{n}| = {beta_abs:.3e} < tolerance {tol:.1e}"
        )


class GeometryError(ValidationError):
    """Cutoff geometry or discretization sizes do not fit together."""


class CacheMismatchError(QpgreenError):
    """A precomputed coefficient cache does not match the requested parameters."""


class ParamMismatchError(ValidationError):
    """Two parameter sets that must share geometry do not."""


class EvalAtSourceError(QpgreenError):
    """Evaluation point coincides with a lattice source point."""


class NoConvergenceError(QpgreenError):
    """A reference series failed to reach the requested tolerance."""


class FormatError(QpgreenError):
    """A table file has a bad magic tag, version, kind or checksum."""


class TruncatedFileError(FormatError):
    """A table file ends before the declared payload is complete."""
