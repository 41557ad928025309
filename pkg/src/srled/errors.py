"""Exception types shared across the package."""


class ModelError(Exception):
    """Base class for srled errors."""


class InvalidParamsError(ModelError, ValueError):
    """Raised for nonpositive rates, bad counts, or malformed inputs."""


class AboveThresholdError(ModelError, ValueError):
    """Raised when the inversion reaches the threshold inversion.

    Above threshold the loop denominator s(0) vanishes and every spectral
    integral in the linear model diverges, so this is a hard error.
    """


class NonConvergenceError(ModelError, RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget."""


class GridMismatchError(ModelError, ValueError):
    """Two spectral densities (or a density and a config) use different grids."""


class StepTooLargeError(ModelError, ValueError):
    """Time step too coarse to resolve the population decay rate."""


class TooFewRecordsError(ModelError, ValueError):
    """Moment estimation needs a minimum ensemble size."""


class TailTruncationWarning(UserWarning):
    """A spectral density does not decay enough at the grid edge."""
