"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called with input violating its contract
    (wrong dimensions, wrong operator class, point outside a domain, ...)."""


class NumericalError(RuntimeError):
    """A numerical routine could not reach its accuracy contract
    (eigensolver failure, series that does not converge, singular node, ...)."""
