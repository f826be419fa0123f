"""
Error Handling and Custom Exceptions for copforge
Provides consistent error handling across parser, prover and certifier.
"""
from __future__ import annotations

from typing import Any


class CopForgeError(Exception):
    """Base exception for all copforge errors"""
    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "details": self.details
        }


class TPTPSyntaxError(CopForgeError):
    """Raised when problem text cannot be parsed"""
    def __init__(self, message: str, line: int = 0, column: int = 0, details: dict | None = None):
        super().__init__(f"{message} (line {line}, column {column})", details)
        self.line = line
        self.column = column
        self.details.setdefault("line", line)
        self.details.setdefault("column", column)


class IncludeNotFoundError(CopForgeError):
    """Raised when an include directive names a file on no search path"""
    pass


class DuplicateConjectureError(CopForgeError):
    """Raised when a problem has more than one conjecture"""
    pass


class UnboundVariableError(CopForgeError):
    """Raised when a formula uses a variable outside any quantifier"""
    pass


class ConfigurationError(CopForgeError):
    """Raised when configuration or flag combinations are invalid"""
    pass


class SearchTimeout(CopForgeError):
    """Raised when proof search runs past its deadline"""
    pass


class SearchExhausted(CopForgeError):
    """Raised when a deepening level completes without pruning and without a proof"""
    pass


class SkolemBoundError(CopForgeError):
    """Raised when skolemised output is not smaller than the squared input size"""
    pass


class UnsupportedProofError(CopForgeError):
    """Raised when a proof cannot be certified (lifted beta order)"""
    pass


class ProofReplayError(CopForgeError):
    """Raised when a proof tree violates a calculus side condition"""
    pass


class TranslationError(CopForgeError):
    """Raised on an internal invariant breach during LK translation"""
    pass


class StaleMarkError(CopForgeError):
    """Raised when undoing to a trail mark that is no longer valid"""
    pass


class TrainingDataError(CopForgeError):
    """Raised when a TrainDB file is malformed"""
    pass


class LKFormatError(CopForgeError):
    """Raised when an LK proof file cannot be read"""
    pass


def handle_exception(exc: Exception) -> dict[str, Any]:
    """Convert any exception to a standardized error response"""
    if isinstance(exc, CopForgeError):
        return exc.to_dict()

    # Handle standard library exceptions
    error_mapping = {
        FileNotFoundError: "File not found",
        IsADirectoryError: "Is a directory",
        PermissionError: "Permission denied",
        ValueError: "Invalid value",
        TypeError: "Type error",
        KeyError: "Key not found",
        RecursionError: "Recursion limit reached",
    }

    error_class = type(exc).__name__
    message = str(exc)

    for exc_type, msg in error_mapping.items():
        if isinstance(exc, exc_type):
            message = f"{msg}: {message}"
            break

    return {
        "error": error_class,
        "message": message,
        "details": {}
    }


def exit_code_for(exc: Exception) -> int:
    """Map an exception to the cli exit code"""
    if isinstance(exc, (SearchTimeout, SearchExhausted)):
        return 1
    if isinstance(exc, (ProofReplayError, UnsupportedProofError, TranslationError)):
        return 1
    # usage, IO and syntax errors
    return 2
