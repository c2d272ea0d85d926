"""Source positions and diagnostic records shared by every compiler phase."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Phase(enum.Enum):
    LEXICAL = "lexical"
    SYNTAX = "syntax"
    SEMANTIC = "semantic"
    RUNTIME = "runtime"


@dataclass(frozen=True)
class SourcePos:
    """1-based line and column of a character in the source text."""

    line: int
    column: int

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError(f"source positions are 1-based, got ({self.line}, {self.column})")

    def __str__(self) -> str:
        return f"Line {self.line}, column {self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """One reported problem; `message` is the exact text shown to the user.

    `pos` is None for messages that have no source location (runtime errors,
    for instance).
    """

    phase: Phase
    pos: SourcePos | None
    message: str

    def __str__(self) -> str:
        return self.message


def advance_position(pos: SourcePos, text: str) -> SourcePos:
    """Fold `text` into `pos`, character by character.

    A newline starts the next line at column 1; every other character,
    tabs included, advances the column by one.
    """
    line, column = pos.line, pos.column
    for ch in text:
        if ch == "\n":
            line += 1
            column = 1
        else:
            column += 1
    return SourcePos(line, column)
