"""Exception hierarchy shared by every tds module.

All errors raised on purpose derive from :class:`TdsError`, carry a plain
message, and optionally a source location (``source`` is a file or script
path, ``line``/``col`` are 1-based).  The CLI renders them uniformly as
``source:line:col: error: message`` diagnostics.
"""

from __future__ import annotations


class TdsError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(
        self,
        message: str,
        *,
        source: str | None = None,
        line: int | None = None,
        col: int | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.source = source
        self.line = line
        self.col = col

    def attach_span(self, source: str | None, line: int | None, col: int | None) -> None:
        """Fill in location info that was unknown where the error was raised."""
        if self.source is None:
            self.source = source
        if self.line is None:
            self.line = line
            self.col = col

    def location(self) -> str:
        parts = []
        if self.source is not None:
            parts.append(self.source)
        if self.line is not None:
            parts.append(str(self.line))
            if self.col is not None:
                parts.append(str(self.col))
        return ":".join(parts)

    def __str__(self) -> str:
        loc = self.location()
        return f"{loc}: {self.message}" if loc else self.message


# Dataset construction and manipulation.

class LengthMismatchError(TdsError):
    """Columns of one dataset do not all have the same number of cases."""


class DuplicateColumnError(TdsError):
    """Two columns share a name (names are compared case-insensitively)."""


class TypeViolationError(TdsError):
    """A cell value does not match its column's declared type."""


class UnknownColumnError(TdsError):
    """A named column does not exist in the dataset."""


class InvalidNameError(TdsError):
    """A column name is empty or otherwise unusable."""


# File I/O and formats.

class IoError(TdsError):
    """A file could not be read, written, or decoded."""


class FormatError(TdsError):
    """A persisted dataset (or CSV input) is structurally corrupt."""


class RaggedRowError(TdsError):
    """A CSV data row has a different field count than the header."""


class EmptyHeaderError(TdsError):
    """A CSV header is missing or contains an empty column name."""


# Script language.

class ScriptError(TdsError):
    """Base class for tokenizer and parser errors."""


class UnterminatedStringError(ScriptError):
    """A quoted string literal never closes on its line."""


class IllegalCharacterError(ScriptError):
    """The tokenizer met a character that belongs to no token."""


class ParseError(ScriptError):
    """A statement does not match the command grammar."""


# Execution.

class NoActiveDatasetError(TdsError):
    """A command needs an active dataset but none has been established."""
