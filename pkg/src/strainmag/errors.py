"""Package-level exception types, mapped to CLI exit codes."""


class StrainmagError(Exception):
    """Base class for errors raised by this package."""

    exit_code = 1


class ConfigError(StrainmagError):
    """Invalid configuration input (unknown key, missing unit, bad value)."""

    exit_code = 1


class DivergenceError(StrainmagError):
    """Numerical integration produced a non-finite or runaway state."""

    exit_code = 2


class InfeasiblePlanError(StrainmagError):
    """A requested barrier/retention target cannot be reached."""

    exit_code = 3
