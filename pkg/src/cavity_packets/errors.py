"""Exception types shared across the package.

Exit-code mapping used by the CLI: ConfigError -> 2, numerical failures
(TruncationOverflow, StepUnstable, GridTooSmall, NonuniformGrid,
PoleAtTwoF, UnstableBranch) -> 3, NoConvergence -> 4.
"""


class CavityPacketsError(Exception):
    """Base class for all package errors."""


class ConfigError(CavityPacketsError):
    """Invalid or missing configuration key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


class NumericalError(CavityPacketsError):
    """Base class for failures of a numerical run."""


class TruncationOverflow(NumericalError):
    """Occupation leaked into the top photon levels of the truncated basis."""


class StepUnstable(NumericalError):
    """Time step violates the stability rule or the norm drifted."""


class NoConvergence(CavityPacketsError):
    """Stationary-state search did not converge within the time budget."""


class GridTooSmall(NumericalError):
    """Phase-space grid does not cover the state support."""


class NonuniformGrid(NumericalError):
    """Time series is not sampled on a uniform grid."""


class PoleAtTwoF(NumericalError):
    """Dressed-state coefficients are singular at |delta| = 2 f."""


class UnstableBranch(NumericalError):
    """Requested analytic branch has an imaginary eigenfrequency."""
