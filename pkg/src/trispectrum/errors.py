"""Exception hierarchy."""


class TrispectrumError(Exception):
    """Base class for all library errors."""


class DomainError(TrispectrumError, ValueError):
    """An argument lies outside the domain of an operation."""


class ParameterError(DomainError):
    """Invalid triangle-group parameters (p, q)."""


class OrderingError(ParameterError):
    pass


class NonHyperbolicError(ParameterError):
    pass


class PrecisionError(TrispectrumError, ArithmeticError):
    """Floating point resolution is insufficient for a requested comparison."""


class ConstructionError(TrispectrumError):
    """Generator relations failed to hold after construction."""


class BallTooSmallError(TrispectrumError):
    """A tiling ball does not contain a path needed to answer a query."""


class InconsistencyError(TrispectrumError, ValueError):
    """Inputs are not of the form an inversion assumes."""
