"""Exception types shared across the package."""


class SpimError(Exception):
    """Base class for all package errors."""


class DomainError(SpimError, ValueError):
    """An input value lies outside its documented domain."""


class ContractViolation(SpimError, ValueError):
    """Caller broke an API contract (shape/length/index mismatch)."""


class NumericError(SpimError, ArithmeticError):
    """A numeric computation produced a non-finite or invalid result."""


class ConfigError(SpimError, ValueError):
    """A scenario/configuration file is malformed or inconsistent."""
