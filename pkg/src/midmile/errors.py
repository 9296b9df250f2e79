"""Exception types shared across the package."""


class MidmileError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(MidmileError, ValueError):
    """Malformed or incomplete configuration input."""


class ValidationError(MidmileError, ValueError):
    """Domain object violates a stated invariant."""


class InvariantError(MidmileError, RuntimeError):
    """Internal consistency check failed; indicates a bug, not bad input."""
