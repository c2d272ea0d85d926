import io
import sys
from pathlib import Path

import pytest

from petitc import cli, codegen, irvm, lexer, parser, semantics
from petitc.ast import BINARY_CATEGORIES, Category, Node

CORPUS_DIR = Path(__file__).parent / "corpus"

CORPUS_NAMES = sorted(path.stem for path in CORPUS_DIR.glob("*.pt"))


def corpus_source(name: str) -> str:
    return (CORPUS_DIR / f"{name}.pt").read_text()


def corpus_input(name: str) -> str:
    return (CORPUS_DIR / f"{name}.in").read_text()


def corpus_expected(name: str) -> str:
    return (CORPUS_DIR / f"{name}.out").read_text()


def lex_ok(source: str) -> list[lexer.Token]:
    tokens, diagnostics = lexer.tokenize(source)
    assert not diagnostics, diagnostics
    return tokens


def parse_ok(source: str) -> Node:
    program, diagnostics = parser.parse_program(lex_ok(source))
    assert program is not None, diagnostics
    return program


def check_ok(source: str) -> Node:
    program, errors, diagnostics = semantics.check_program(parse_ok(source))
    assert errors == 0, diagnostics
    return program


def compile_ok(source: str) -> str:
    return codegen.codegen_program(check_ok(source))


def run_program(source: str, stdin_text: str = "") -> tuple[str, int]:
    """Full pipeline: compile and interpret @main; returns (stdout, exit value)."""
    module = irvm.parse_ir(compile_ok(source))
    sink = io.StringIO()
    exit_value = irvm.run(module, "main", [], input=stdin_text, output=sink)
    return sink.getvalue(), exit_value


def shape(node: Node):
    """Position-free structural summary used for tree comparisons."""
    return (node.category.name, node.lexeme, tuple(shape(child) for child in node.children))


def iter_expression_nodes(body: Node):
    """All nodes in expression position within a function body. The callee
    identifier of a call is a name, not an expression."""
    stack = [body]
    while stack:
        node = stack.pop()
        yield node
        if node.category is Category.Call:
            stack.extend(node.children[1].children)
        elif node.category is Category.If or node.category in BINARY_CATEGORIES:
            stack.extend(node.children)


@pytest.fixture
def run_cli(capsys, monkeypatch):
    """Invoke the command-line driver in-process; returns (code, stdout, stderr)."""

    def invoke(argv: list[str], stdin: str = "") -> tuple[int, str, str]:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
        code = cli.main(argv)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke
