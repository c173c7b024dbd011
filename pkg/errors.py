"""
Synthesis Engine Errors

Every domain failure raised by the engine derives from SynthError so the
command line can map it to a single exit status.
"""

from typing import Optional


class SynthError(Exception):
    """Base exception for all synthesis engine failures."""
    def __init__(self, message: str, error_type: str = "synth", stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.error_type = error_type
        self.stage = stage

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class FormulaSyntaxError(SynthError):
    """Raised when formula text does not parse. Column and line are 1-based."""
    def __init__(self, message: str, column: int, line: Optional[int] = None):
        text = f"{message} at column {column}"
        if line is not None:
            text = f"line {line}: {text}"
        super().__init__(text, error_type="syntax")
        self.reason = message
        self.column = column
        self.line = line


class PartitionError(SynthError):
    """Raised for malformed partition files or ill-formed instances."""
    def __init__(self, message: str):
        super().__init__(message, error_type="partition")


class UnsupportedInputError(SynthError):
    """Raised for inputs outside the supported fragment."""
    def __init__(self, message: str):
        super().__init__(message, error_type="unsupported")


class EnumerationCapError(SynthError):
    """Raised when a brute-force oracle would exceed its enumeration cap."""
    def __init__(self, message: str):
        super().__init__(message, error_type="enumeration")


class ResourceLimitError(SynthError):
    """Raised when an automaton construction exceeds a configured limit."""
    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message, error_type="resource", stage=stage)


class WidthMismatchError(SynthError):
    """Raised when automata, letters or partitions disagree on alphabet width."""
    def __init__(self, message: str):
        super().__init__(message, error_type="width")


class StrategyError(SynthError):
    """Raised when a strategy cannot be extracted."""
    def __init__(self, message: str):
        super().__init__(message, error_type="strategy")


class GeneratorError(SynthError):
    """Raised for invalid benchmark parameters or graph text."""
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, error_type="generator")
        self.line = line
