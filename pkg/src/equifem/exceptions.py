"""Exception types raised by equifem."""


class EquifemError(Exception):
    """Base class for all library errors."""


class InvalidArgument(EquifemError, ValueError):
    pass


class InvalidAdaptationFunction(EquifemError, ValueError):
    """Adaptation function has a non-positive cell value."""


class NumericError(EquifemError, ArithmeticError):
    """A non-finite value appeared where a finite one is required."""


class IllPosedProblem(EquifemError, ValueError):
    """Coefficients violate a > 0 or c - b'/2 >= 0."""


class SingularSystem(EquifemError, ArithmeticError):
    pass


class OutOfDomain(EquifemError, ValueError):
    pass


class Unsupported(EquifemError):
    """Requested quantity needs data the problem does not carry."""
