"""Exception types raised by the library."""


class NMLambdaError(Exception):
    """Base class for all library errors."""


class NumericalError(NMLambdaError):
    """Base class for numerical failures (CLI exit code 3)."""


class NearDegenerateRoots(NumericalError):
    pass


class UndefinedRegime(NMLambdaError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class NotHermitian(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class StepTooLarge(NumericalError):
    pass


class NoPhoton(NumericalError):
    """The Bell-state projection has (numerically) zero probability."""


class ConfigError(NMLambdaError):
    """Malformed or inconsistent scenario configuration (CLI exit code 2)."""
