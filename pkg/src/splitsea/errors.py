"""Exception types shared across the splitsea package."""


class SplitSeaError(Exception):
    """Base class for all numerical / domain failures raised by splitsea."""


class SolverFailure(SplitSeaError):
    """Root polishing did not converge to the requested residual."""


class DegenerateEdge(SplitSeaError):
    """The dispersion is constant (all hopping weights zero)."""


class OracleMismatch(SplitSeaError):
    """Two supposedly-equivalent exact routes disagree beyond tolerance."""


class BandTooNarrow(SplitSeaError):
    """Fourier band of a symbol not captured after retries."""


class NoConvergence(SplitSeaError):
    """Contour quadrature did not stabilise within the node budget."""


class TruncationFailure(SplitSeaError):
    """Integrand tail bound unmet after enlarging the truncation window."""


class NodeCountInsufficient(SplitSeaError):
    """Fredholm determinant changed too much under node doubling."""


class UnsupportedEdge(SplitSeaError):
    """Edge prediction requested outside the supported two-cut regime."""


class NotPositiveDefinite(SplitSeaError):
    """Toeplitz matrix of the symbol failed Cholesky; symbol/band error upstream."""


class WindowTooSmall(SplitSeaError):
    """Discrete Fredholm window cannot meet the dropped-trace bound."""


class LeakageTooLarge(SplitSeaError):
    """Sampling window truncation leaks too much mass."""


class SubcriticalPhase(SplitSeaError):
    """Eigenvalue density requested below the critical coupling."""


class CoincidentAngles(SplitSeaError):
    """Joint eigenvalue density evaluated at coinciding angles (weight zero)."""
