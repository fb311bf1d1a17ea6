"""Exception types shared across the engine."""
from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EngineError):
    """Syntax or resolution error, with source position."""

    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.bare_message = message
        self.line = line
        self.column = column


class SignatureError(EngineError):
    """A signature failed validation."""


class SortError(EngineError):
    """Ill-sorted term, atom, or equation."""


class ResourceLimitError(EngineError):
    """A configured generation bound was exceeded."""


class UninhabitedSortError(EngineError):
    """Quantification over a sort with an empty universe."""


class InconsistencyError(EngineError):
    """An assignment or axiom instance contradicts the model."""


class CommandError(EngineError):
    """Bad REPL/wire command."""


class SessionFormatError(EngineError):
    """Unreadable or incompatible saved-session file."""
