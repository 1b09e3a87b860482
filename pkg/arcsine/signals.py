from typing import Any, Optional


class ArcsineError(Exception):
    """Base class for every error raised by the engine."""
    pass

class ExactArithmeticError(ArcsineError, ArithmeticError):
    """Exception raised when an exact operation has no representable result."""

    def __init__(self, message: str, *operands: Any):
        super().__init__(message)
        self.operands = operands

class DegreeOverflowError(ExactArithmeticError):
    """Exception raised when a product would need a pi^4 term."""
    pass

class DomainError(ArcsineError, ValueError):
    """Exception raised for an argument outside an operation's domain."""
    pass

class SeriesError(ArcsineError, ValueError):
    """Exception raised for malformed series or out-of-range coefficient access."""
    pass

class NotDivisibleError(SeriesError):
    """Exception raised when a negative shift would drop a nonzero coefficient."""
    pass

class ArgumentError(ArcsineError, ValueError):
    """Exception raised for unknown identity ids, forms or invalid ranges."""
    pass

class InternalConsistencyError(ArcsineError):
    """Exception raised when a trigamma bracket leaves a nonzero pi^2 residue."""
    pass

class DslError(ArcsineError):
    """Base class for positioned identity-language errors."""

    def __init__(self, message: str, line: int = 1, column: int = 1, fragment: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.fragment = fragment
        super().__init__(f"line {line}, column {column}: {message}")

class LexicalError(DslError):
    pass

class DslSyntaxError(DslError):
    pass

class UnknownFunctionError(DslError):
    pass

class UnboundVariableError(DslError):
    pass

class EvaluationError(DslError):
    """Exception raised while evaluating a parsed identity; `fragment` names the subexpression."""
    pass
