"""Exception types shared across the package."""


class SttsimError(Exception):
    """Base class for all errors raised by sttsim."""


class TraceParseError(SttsimError):
    """A trace file line does not conform to the trace grammar."""


class TraceValidationError(SttsimError):
    """A trace violates a semantic invariant (e.g. timestamp regression)."""


class ConfigError(SttsimError):
    """A configuration value is invalid or inconsistent."""
