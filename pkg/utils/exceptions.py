"""
Exception hierarchy for the lattice toolkit

Library code raises these; only the command-line entry point turns them into
exit codes (see utils.constants).
"""

from typing import Any, Dict, Optional

from utils.constants import (
    EXIT_BUDGET_EXCEEDED,
    EXIT_CHECKS_FAILED,
    EXIT_OUTPUT_ERROR,
    EXIT_STRUCTURAL_ERROR,
    EXIT_VALIDATION_ERROR,
)


class WexError(Exception):
    """Base class for every error raised by this package"""

    exit_code = EXIT_CHECKS_FAILED

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class ValidationError(WexError, ValueError):
    """Malformed input: bad category file, bad flag, non-brick indecomposable..."""

    exit_code = EXIT_VALIDATION_ERROR


class DimensionMismatchError(ValidationError):
    """Shapes or objects of two operands do not match"""


class BudgetExceededError(WexError):
    """Enumeration would exceed the configured budget"""

    exit_code = EXIT_BUDGET_EXCEEDED

    def __init__(self, message: str, bound: int, required: int):
        super().__init__(message, {"bound": bound, "required": required})
        self.bound = bound
        self.required = required


class StructuralError(WexError):
    """A computed structure contradicts a proven property (e.g. two socle-maximal nodes)"""

    exit_code = EXIT_STRUCTURAL_ERROR


class LiftError(StructuralError):
    """A lift through a projective presentation failed; the presentation is broken"""


class OutputError(WexError):
    """A report, DOT or category file could not be written"""

    exit_code = EXIT_OUTPUT_ERROR

    def __init__(self, message: str, path: str):
        super().__init__(message, {"path": path})
        self.path = path
