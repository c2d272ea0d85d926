"""Tokenizer: longest match wins, keywords beat identifiers on equal length,
whitespace and block comments are skipped while positions stay accurate."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagnostics import Diagnostic, Phase, SourcePos, advance_position


class TokenKind(enum.Enum):
    IDENTIFIER = enum.auto()
    NATURAL = enum.auto()
    DECIMAL = enum.auto()
    STRLIT = enum.auto()
    INTEGER = enum.auto()
    DOUBLE = enum.auto()
    IF = enum.auto()
    THEN = enum.auto()
    ELSE = enum.auto()
    LPAREN = enum.auto()
    RPAREN = enum.auto()
    EQUALS = enum.auto()
    COMMA = enum.auto()
    STAR = enum.auto()
    SLASH = enum.auto()
    PLUS = enum.auto()
    MINUS = enum.auto()
    END_OF_INPUT = enum.auto()


KEYWORDS = {
    "integer": TokenKind.INTEGER,
    "double": TokenKind.DOUBLE,
    "if": TokenKind.IF,
    "then": TokenKind.THEN,
    "else": TokenKind.ELSE,
}

PUNCTUATION = {
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "=": TokenKind.EQUALS,
    ",": TokenKind.COMMA,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
}

VALUE_KINDS = frozenset(
    {TokenKind.IDENTIFIER, TokenKind.NATURAL, TokenKind.DECIMAL, TokenKind.STRLIT}
)
KEYWORD_KINDS = frozenset(KEYWORDS.values())

_ESCAPABLE = 'fnrt\\"'
_WHITESPACE = " \t\n"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    pos: SourcePos


def _is_letter(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


class Scanner:
    """Single pass over the source.

    `consumed` records every span in consumption order as (tag, text) pairs
    with tag one of "token", "space", "comment" or "error"; joining the texts
    reproduces the input exactly.
    """

    def __init__(self, source: str) -> None:
        self.source = source
        self.index = 0
        self.pos = SourcePos(1, 1)
        self.tokens: list[Token] = []
        self.diagnostics: list[Diagnostic] = []
        self.consumed: list[tuple[str, str]] = []

    def scan(self) -> tuple[list[Token], list[Diagnostic]]:
        src = self.source
        while self.index < len(src):
            pos = self.pos
            ch = src[self.index]
            if ch in _WHITESPACE:
                end = self.index
                while end < len(src) and src[end] in _WHITESPACE:
                    end += 1
                self._take(end - self.index, "space")
            elif src.startswith("/*", self.index):
                end = src.find("*/", self.index + 2)
                # unterminated comments silently run to the end of input
                end = len(src) if end < 0 else end + 2
                self._take(end - self.index, "comment")
            elif ch == '"':
                self._scan_string()
            elif _is_letter(ch):
                end = self.index + 1
                while end < len(src) and (_is_letter(src[end]) or _is_digit(src[end])):
                    end += 1
                lexeme = self._take(end - self.index, "token")
                self.tokens.append(Token(KEYWORDS.get(lexeme, TokenKind.IDENTIFIER), lexeme, pos))
            elif _is_digit(ch) or (ch == "." and _is_digit(src[self.index + 1 : self.index + 2])):
                self._scan_number()
            elif ch in PUNCTUATION:
                lexeme = self._take(1, "token")
                self.tokens.append(Token(PUNCTUATION[lexeme], lexeme, pos))
            else:
                self._take(1, "error")
                self._error(pos, f"{pos}: unrecognized character ({ch})")
        self.tokens.append(Token(TokenKind.END_OF_INPUT, "", self.pos))
        return self.tokens, self.diagnostics

    def _take(self, length: int, tag: str) -> str:
        text = self.source[self.index : self.index + length]
        self.index += length
        self.pos = advance_position(self.pos, text)
        self.consumed.append((tag, text))
        return text

    def _error(self, pos: SourcePos, message: str) -> None:
        self.diagnostics.append(Diagnostic(Phase.LEXICAL, pos, message))

    def _scan_number(self) -> None:
        src = self.source
        pos = self.pos
        end = self.index
        while end < len(src) and _is_digit(src[end]):
            end += 1
        # a dot extends the number only when at least one digit follows it
        if end < len(src) and src[end] == "." and _is_digit(src[end + 1 : end + 2]):
            end += 1
            while end < len(src) and _is_digit(src[end]):
                end += 1
            kind = TokenKind.DECIMAL
        else:
            kind = TokenKind.NATURAL
        lexeme = self._take(end - self.index, "token")
        self.tokens.append(Token(kind, lexeme, pos))

    def _scan_string(self) -> None:
        src = self.source
        start = self.index
        open_pos = self.pos
        i = start + 1
        valid = True
        while True:
            if i >= len(src) or src[i] in "\r\n":
                # line or input ended before the closing quote
                self._take(i - start, "error")
                self._error(open_pos, f"{open_pos}: unterminated string literal")
                return
            ch = src[i]
            if ch == '"':
                i += 1
                if valid:
                    lexeme = self._take(i - start, "token")
                    self.tokens.append(Token(TokenKind.STRLIT, lexeme, open_pos))
                else:
                    # a string with a bad escape produces no token
                    self._take(i - start, "error")
                return
            if ch == "\\":
                if i + 1 >= len(src) or src[i + 1] in "\r\n":
                    i += 1  # lone backslash at line end: handled as unterminated
                    continue
                if src[i + 1] not in _ESCAPABLE:
                    bs_pos = advance_position(open_pos, src[start:i])
                    self._error(bs_pos, f"{bs_pos}: invalid escape sequence (\\{src[i + 1]})")
                    valid = False
                i += 2
                continue
            i += 1


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Tokenize `source`; the token list always ends with END_OF_INPUT."""
    return Scanner(source).scan()


def dump_tokens(tokens: list[Token]) -> str:
    """One line per token: KIND(lexeme) for value-carrying kinds, the keyword
    name for keywords, the bare character for punctuation. END_OF_INPUT is
    omitted."""
    lines = []
    for token in tokens:
        if token.kind is TokenKind.END_OF_INPUT:
            continue
        if token.kind in VALUE_KINDS:
            lines.append(f"{token.kind.name}({token.lexeme})")
        elif token.kind in KEYWORD_KINDS:
            lines.append(token.kind.name)
        else:
            lines.append(token.lexeme)
    return "".join(line + "\n" for line in lines)
