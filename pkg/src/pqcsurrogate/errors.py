"""Exception and warning types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class SizeError(ValidationError):
    """An input exceeds a hard size guard (qubit or order cap)."""


class NumericError(RuntimeError):
    """A numeric routine failed or lost too much accuracy to trust."""


class ConditioningWarning(RuntimeWarning):
    """A linear system was solved through a fallback path due to conditioning."""
