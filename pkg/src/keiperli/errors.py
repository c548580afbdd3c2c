"""Exception hierarchy shared by all modules."""


class KeiperLiError(Exception):
    """Base class for errors raised by keiperli."""


class DomainError(KeiperLiError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionError(KeiperLiError, ArithmeticError):
    """Stored or requested precision cannot deliver the requested digits."""


class BranchError(DomainError):
    """Argument lies on a branch cut or at a pole."""


class ResolutionError(KeiperLiError, ArithmeticError):
    """Contour sampling too coarse to track the logarithm continuously."""


class InsufficientDataError(KeiperLiError, ValueError):
    """Series too short for the requested fit."""


class SchemaError(KeiperLiError, ValueError):
    """Input file does not follow the expected layout."""
