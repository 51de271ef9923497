"""Exception types shared across the package."""


class GhzError(ValueError):
    """Base class for invalid input to any ghzeig routine."""


class ParseError(GhzError):
    pass


class SizeError(GhzError):
    pass


class DimensionError(GhzError):
    pass


class PreconditionError(GhzError):
    """Raised when a routine's stated hypothesis does not hold (e.g. m >= n)."""


class HamiltonianFormatError(GhzError):
    """Malformed Hamiltonian file or term list."""
