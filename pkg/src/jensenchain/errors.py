"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad input: dimension mismatch, constraint violation, out-of-range value."""


class DomainError(ValidationError):
    """A point fell outside the declared domain of a function."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to converge within its budget."""
