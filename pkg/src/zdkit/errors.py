"""Exception types shared across the package."""


class DomainError(ValueError):
    """Invalid input or unmet precondition (bad parameters, malformed data)."""


class InternalCheckError(RuntimeError):
    """A self-check that should be impossible to fail has failed.

    These guards verify identities that hold by theorem for valid inputs,
    so a failure indicates a bug rather than a user error.
    """
