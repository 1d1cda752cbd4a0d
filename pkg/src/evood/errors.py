"""Exception types shared across the package.

Keeping these in one place lets the CLI map error classes onto distinct
exit codes.
"""


class DomainError(ValueError):
    """An argument violates a mathematical precondition (negative evidence,
    non-one-hot label, non-positive radius, ...)."""


class ShapeError(ValueError):
    """Tensor shapes do not match what an operation expects."""


class ConfigError(ValueError):
    """A run configuration is invalid or incomplete."""


class DataError(ValueError):
    """An input corpus or data file is missing or malformed."""
