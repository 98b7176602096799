"""Exception hierarchy shared by the simulation and evaluation modules."""


class RcarError(Exception):
    """Base class for all package errors."""


class InvalidLawError(RcarError, ValueError):
    """Parameters that violate the constraints of a distribution descriptor."""


class NonIntegrable(RcarError, ValueError):
    """An expectation or integral that diverges for the requested parameters."""


class NumericalFailure(RcarError, RuntimeError):
    """Quadrature did not reach the requested tolerance.

    ``error_estimate`` carries the best error estimate that was achieved.
    """

    def __init__(self, message, error_estimate=float("nan")):
        super().__init__(message)
        self.error_estimate = error_estimate


class TruncationError(RcarError, ValueError):
    """Truncation bounds for the Poisson simulator cannot meet the tolerance."""


class FitError(RcarError, ValueError):
    """Log-log regression attempted over non-positive values."""


class UnsupportedRegime(RcarError, ValueError):
    """Parameter combination excluded from the limit theory (alpha == beta, alpha < beta == 1)."""


class ConfigError(RcarError, ValueError):
    """Run configuration failed validation."""
