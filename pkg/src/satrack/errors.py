"""Exception types shared across the package."""


class SatrackError(Exception):
    """Base class for package-specific failures."""


class ConfigError(SatrackError):
    """Invalid configuration (bad key, bad value, inconsistent settings)."""


class NonConvergenceError(SatrackError):
    """An iterative solver exhausted its budget.

    Carries the last iterate and residual so callers can diagnose or
    restart.
    """

    def __init__(self, message, iterate=None, residual=None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual


class DomainExitError(SatrackError):
    """Too many Monte Carlo paths left the configured domain box."""

    def __init__(self, message, exits=0, paths=0):
        super().__init__(message)
        self.exits = exits
        self.paths = paths
