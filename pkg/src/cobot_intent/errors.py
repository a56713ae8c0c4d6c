"""Exception types shared across the package."""


class CobotError(Exception):
    """Base class for all package-specific errors."""


class LimitViolation(CobotError):
    """A joint angle lies outside its configured limit interval."""


class Unreachable(CobotError):
    """A requested Cartesian point lies outside the arm's reach sphere."""


class Infeasible(CobotError):
    """The scene geometry admits no valid pick-and-place plan."""


class NotConverged(CobotError):
    """IK iteration hit the iteration cap; carries the best-effort result."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class OutOfRange(CobotError):
    """A time parameter lies outside the valid interval."""


class DegeneratePlan(CobotError):
    """The plan yields no path direction (already finished)."""


class ParseError(CobotError):
    """A protocol line or log file could not be parsed."""


class UnknownTag(ParseError):
    """A protocol line carries a tag no message variant defines."""


class VersionError(CobotError):
    """Protocol version mismatch at the Hello handshake."""


class ConfigError(CobotError):
    """A scenario configuration file is missing, malformed, or invalid."""
