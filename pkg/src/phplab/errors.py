"""Exception hierarchy shared by every module of the package."""


class LabError(Exception):
    """Base class for all errors raised by phplab."""


class RegimeError(LabError, ValueError):
    """Parameters fall outside the finite regime an operation is defined for."""


class BudgetExceeded(LabError):
    """An enumeration or search would exceed its configured budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ShapeError(LabError, ValueError):
    """A formula has a syntactic shape the operation does not support."""


class FormulaSyntaxError(LabError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnboundVariableError(FormulaSyntaxError):
    pass


class NegativeBoundError(FormulaSyntaxError):
    pass


class GraftError(LabError, ValueError):
    """Attachment trees do not fit the leaves they are appended to."""


class PreconditionError(LabError, ValueError):
    """Input violates an operation's precondition; ``report`` carries details."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IdentityViolation(LabError):
    """The array size identity does not hold because cells are not disjoint."""


class ConfigError(LabError, ValueError):
    """An experiment configuration is malformed (bad key, empty range, ...)."""
