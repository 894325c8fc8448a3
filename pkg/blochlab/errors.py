"""
Exception hierarchy for blochlab.
"""

from typing import Optional


class BlochLabError(Exception):
    """Base class for every error raised by blochlab."""


class InvalidArgumentError(BlochLabError, ValueError):
    """An argument is outside the domain an operation accepts."""


class ConfigError(BlochLabError):
    """Run configuration failed validation."""


class ExpressionError(BlochLabError):
    """
    Problem with an expression text.

    Args:
        message: Human readable description
        line: 1-based line of the offending token
        column: 1-based column of the offending token
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class ExpressionSyntaxError(ExpressionError):
    """Text does not follow the expression grammar."""


class UnknownIdentifierError(ExpressionError):
    """Identifier is neither a constant, the variable nor a known function."""


class NonIntegerExponentError(ExpressionError):
    """Exponent after ``^`` is not an integer."""


class SingularityError(BlochLabError):
    """
    Evaluation produced a non-finite value, or a pole lies inside the disk.

    Args:
        message: Human readable description
        location: Point of the disk where it happened
        value: Offending value, when one was computed
    """

    def __init__(self, message: str, location: complex, value: Optional[complex] = None):
        self.location = complex(location)
        self.value = value
        super().__init__(f"{message} at z = {self.location:.6g}")


class RefusalError(BlochLabError):
    """Analysis declines to produce a result for the given symbols."""


class SelfMapViolation(RefusalError):
    """
    phi does not map the disk into itself.

    Args:
        witness: Point where |phi| exceeded the bound
        modulus: |phi(witness)|
    """

    def __init__(self, witness: complex, modulus: float, reason: str = "phi is not a self-map of the disk"):
        self.witness = complex(witness)
        self.modulus = float(modulus)
        super().__init__(f"{reason}: |phi({self.witness:.6g})| = {self.modulus:.9g}")


class DivergentOperatorError(RefusalError):
    """Essential norm requested for an operator judged not continuous."""


class ReportWriteError(BlochLabError):
    """
    An artifact could not be written.

    Args:
        path: Destination that failed
        reason: Underlying error text
    """

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"cannot write {path}: {reason}")
