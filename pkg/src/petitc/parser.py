"""Recursive-descent parser with binding powers for operator precedence.

Precedence, loosest to tightest: if-then-else, then '+'/'-', then '*'/'/'.
The four binary operators are left associative; the else branch of an if
extends as far right as possible, so the construct behaves like the C
ternary operator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import Category, Node, add_child, new_node
from .diagnostics import Diagnostic, Phase, SourcePos
from .lexer import Token, TokenKind


@dataclass(frozen=True)
class BindingPower:
    level: int
    assoc: str = "left"


# if-then-else sits below every binary operator: its sub-expressions are
# parsed at level 0, so an else branch keeps absorbing operators.
IF_LEVEL = 0

BINARY_OPS: dict[TokenKind, tuple[Category, BindingPower]] = {
    TokenKind.PLUS: (Category.Add, BindingPower(1)),
    TokenKind.MINUS: (Category.Sub, BindingPower(1)),
    TokenKind.STAR: (Category.Mul, BindingPower(2)),
    TokenKind.SLASH: (Category.Div, BindingPower(2)),
}


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class Parser:
    """Cursor over a token stream ending in END_OF_INPUT."""

    def __init__(self, tokens: list[Token]) -> None:
        if not tokens or tokens[-1].kind is not TokenKind.END_OF_INPUT:
            raise ValueError("token stream must end with END_OF_INPUT")
        self.tokens = tokens
        self.index = 0
        self.diagnostics: list[Diagnostic] = []

    def peek(self) -> Token:
        return self.tokens[self.index]

    def at(self, kind: TokenKind) -> bool:
        return self.peek().kind is kind

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _fail(self) -> _SyntaxError:
        pos = self.peek().pos
        return _SyntaxError(Diagnostic(Phase.SYNTAX, pos, f"{pos}: syntax error"))

    def _expect(self, kind: TokenKind) -> Token:
        if not self.at(kind):
            raise self._fail()
        return self.advance()

    def parse_program(self) -> tuple[Node | None, list[Diagnostic]]:
        program: Node | None = None
        while not self.at(TokenKind.END_OF_INPUT):
            fn_start = self.index
            try:
                function = self.parse_function()
            except _SyntaxError as err:
                self.diagnostics.append(err.diagnostic)
                self._recover(fn_start)
                continue
            if program is None:
                program = new_node(Category.Program, None, SourcePos(1, 1))
            add_child(program, function)
        if program is None and not self.diagnostics:
            # empty input: the grammar requires at least one function
            self.diagnostics.append(self._fail().diagnostic)
        if self.diagnostics:
            return None, self.diagnostics
        return program, self.diagnostics

    def _recover(self, fn_start: int) -> None:
        # resync at the next IDENTIFIER followed by '(' outside parentheses,
        # skipping at least one token past the failed attempt's start
        self.index = max(self.index, fn_start + 1)
        depth = 0
        while not self.at(TokenKind.END_OF_INPUT):
            kind = self.peek().kind
            if kind is TokenKind.LPAREN:
                depth += 1
            elif kind is TokenKind.RPAREN:
                depth = max(0, depth - 1)
            elif (
                kind is TokenKind.IDENTIFIER
                and depth == 0
                and self.tokens[self.index + 1].kind is TokenKind.LPAREN
            ):
                return
            self.index += 1

    def parse_function(self) -> Node:
        name = self._expect(TokenKind.IDENTIFIER)
        function = new_node(Category.Function, None, name.pos)
        add_child(function, new_node(Category.Identifier, name.lexeme, name.pos))
        self._expect(TokenKind.LPAREN)
        add_child(function, self.parse_parameters())
        self._expect(TokenKind.RPAREN)
        self._expect(TokenKind.EQUALS)
        add_child(function, self.parse_expression())
        return function

    def parse_parameters(self) -> Node:
        parameters = new_node(Category.Parameters, None, self.peek().pos)
        add_child(parameters, self.parse_parameter())
        while self.at(TokenKind.COMMA):
            self.advance()
            add_child(parameters, self.parse_parameter())
        return parameters

    def parse_parameter(self) -> Node:
        token = self.peek()
        if token.kind is TokenKind.INTEGER:
            type_category = Category.Integer
        elif token.kind is TokenKind.DOUBLE:
            type_category = Category.Double
        else:
            raise self._fail()
        self.advance()
        parameter = new_node(Category.Parameter, None, token.pos)
        add_child(parameter, new_node(type_category, None, token.pos))
        name = self._expect(TokenKind.IDENTIFIER)
        add_child(parameter, new_node(Category.Identifier, name.lexeme, name.pos))
        return parameter

    def parse_arguments(self) -> Node:
        arguments = new_node(Category.Arguments, None, self.peek().pos)
        add_child(arguments, self.parse_expression())
        while self.at(TokenKind.COMMA):
            self.advance()
            add_child(arguments, self.parse_expression())
        return arguments

    def parse_expression(self, min_level: int = 0) -> Node:
        left = self.parse_primary()
        while True:
            entry = BINARY_OPS.get(self.peek().kind)
            if entry is None:
                break
            category, power = entry
            if power.level < min_level:
                break
            op = self.advance()
            # left associativity: the right operand binds one level tighter
            right = self.parse_expression(power.level + 1)
            node = new_node(category, None, op.pos)
            add_child(node, left)
            add_child(node, right)
            left = node
        return left

    def parse_primary(self) -> Node:
        token = self.peek()
        if token.kind is TokenKind.NATURAL:
            self.advance()
            return new_node(Category.Natural, token.lexeme, token.pos)
        if token.kind is TokenKind.DECIMAL:
            self.advance()
            return new_node(Category.Decimal, token.lexeme, token.pos)
        if token.kind is TokenKind.IDENTIFIER:
            self.advance()
            if self.at(TokenKind.LPAREN):
                self.advance()
                call = new_node(Category.Call, None, token.pos)
                add_child(call, new_node(Category.Identifier, token.lexeme, token.pos))
                add_child(call, self.parse_arguments())
                self._expect(TokenKind.RPAREN)
                return call
            return new_node(Category.Identifier, token.lexeme, token.pos)
        if token.kind is TokenKind.LPAREN:
            self.advance()
            # parentheses only group; no wrapper node is built
            inner = self.parse_expression()
            self._expect(TokenKind.RPAREN)
            return inner
        if token.kind is TokenKind.IF:
            self.advance()
            node = new_node(Category.If, None, token.pos)
            add_child(node, self.parse_expression(IF_LEVEL))
            self._expect(TokenKind.THEN)
            add_child(node, self.parse_expression(IF_LEVEL))
            self._expect(TokenKind.ELSE)
            add_child(node, self.parse_expression(IF_LEVEL))
            return node
        raise self._fail()


def parse_program(tokens: list[Token]) -> tuple[Node | None, list[Diagnostic]]:
    """Parse a whole program. On any syntax error the node result is None and
    at least one diagnostic is returned; parsing attempts to resume at the
    next function boundary so later errors are still reported."""
    return Parser(tokens).parse_program()


def parse_expressions(tokens: list[Token]) -> tuple[list[Node], list[Diagnostic]]:
    """Parse a comma-separated list of expressions covering the whole stream
    (the calculator input form)."""
    parser = Parser(tokens)
    expressions: list[Node] = []
    try:
        expressions.append(parser.parse_expression())
        while parser.at(TokenKind.COMMA):
            parser.advance()
            expressions.append(parser.parse_expression())
        if not parser.at(TokenKind.END_OF_INPUT):
            raise parser._fail()
    except _SyntaxError as err:
        return [], [err.diagnostic]
    return expressions, []
