"""The petitc command-line driver.

Modes, one per invocation: --tokens, --ast, --check, --ir, --run (the
default) and --calc. Diagnostics always go to the error stream; mode output
goes to stdout or to the file named with -o. Exit codes: 0 success, 1
lexical or syntax errors, 2 semantic errors, 3 runtime errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from . import codegen, irvm, lexer, parser, semantics
from .ast import Category, Node, print_ast
from .diagnostics import Diagnostic, Phase
from .i32 import trunc_div, wrap

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_SEMANTIC = 2
EXIT_RUNTIME = 3

MODES = ("tokens", "ast", "check", "ir", "run", "calc")

_CALC_CATEGORIES = frozenset(
    {Category.Natural, Category.Add, Category.Sub, Category.Mul, Category.Div, Category.If}
)


@dataclass
class DriverConfig:
    mode: str = "run"
    input: str | None = None  # None reads standard input
    output: str | None = None  # None writes standard output


def _first_non_calc(node: Node) -> Node | None:
    if node.category not in _CALC_CATEGORIES:
        return node
    for child in node.children:
        bad = _first_non_calc(child)
        if bad is not None:
            return bad
    return None


def _eval(node: Node) -> int:
    category = node.category
    if category is Category.Natural:
        return wrap(int(node.lexeme))
    if category is Category.If:
        taken = 1 if _eval(node.children[0]) != 0 else 2
        return _eval(node.children[taken])
    a = _eval(node.children[0])
    b = _eval(node.children[1])
    if category is Category.Add:
        return wrap(a + b)
    if category is Category.Sub:
        return wrap(a - b)
    if category is Category.Mul:
        return wrap(a * b)
    return trunc_div(a, b)


def eval_calc(text: str) -> tuple[list[int], list[Diagnostic]]:
    """Evaluate comma-separated constant integer expressions.

    Returns the values computed so far and any diagnostics; a runtime
    failure stops evaluation and is reported as a positionless runtime
    diagnostic. Identifiers, calls, decimals and strings are not part of
    the calculator language and are reported as syntax errors.
    """
    tokens, lex_diags = lexer.tokenize(text)
    if lex_diags:
        return [], lex_diags
    expressions, diags = parser.parse_expressions(tokens)
    if diags:
        return [], diags
    for expression in expressions:
        bad = _first_non_calc(expression)
        if bad is not None:
            return [], [Diagnostic(Phase.SYNTAX, bad.pos, f"{bad.pos}: syntax error")]
    values: list[int] = []
    for expression in expressions:
        try:
            values.append(_eval(expression))
        except ZeroDivisionError:
            return values, [Diagnostic(Phase.RUNTIME, None, "runtime error: division by zero")]
        except OverflowError:
            return values, [Diagnostic(Phase.RUNTIME, None, "runtime error: division overflow")]
    return values, []


def _report(diagnostics: list[Diagnostic]) -> None:
    for diagnostic in diagnostics:
        print(diagnostic.message, file=sys.stderr)


def _pipeline(config: DriverConfig, source: str, out: TextIO) -> int:
    if config.mode == "calc":
        values, diags = eval_calc(source)
        for value in values:
            out.write(f"{value}\n")
        _report(diags)
        if any(d.phase is Phase.RUNTIME for d in diags):
            return EXIT_RUNTIME
        return EXIT_SYNTAX if diags else EXIT_OK

    tokens, lex_diags = lexer.tokenize(source)
    if config.mode == "tokens":
        out.write(lexer.dump_tokens(tokens))
        _report(lex_diags)
        return EXIT_SYNTAX if lex_diags else EXIT_OK
    if lex_diags:
        _report(lex_diags)
        return EXIT_SYNTAX

    program, parse_diags = parser.parse_program(tokens)
    if program is None:
        _report(parse_diags)
        return EXIT_SYNTAX
    if config.mode == "ast":
        out.write(print_ast(program))
        return EXIT_OK

    _, error_count, sem_diags = semantics.check_program(program)
    if config.mode == "check":
        out.write(print_ast(program, with_types=True))
        _report(sem_diags)
        return EXIT_SEMANTIC if error_count else EXIT_OK
    if error_count:
        _report(sem_diags)
        return EXIT_SEMANTIC

    try:
        module_text = codegen.codegen_program(program)
    except codegen.UnsupportedProgramError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SEMANTIC
    if config.mode == "ir":
        out.write(module_text)
        return EXIT_OK

    module = irvm.parse_ir(module_text)
    if "main" not in module.functions:
        print("runtime error: program has no main function", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        irvm.run(module, "main", [], input=sys.stdin, output=out)
    except irvm.IrRunError as err:
        print(str(err), file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main_pipeline(config: DriverConfig) -> int:
    """Run one compiler invocation described by `config`; returns the exit code."""
    if config.input is None:
        source = sys.stdin.read()
    else:
        try:
            source = Path(config.input).read_text(encoding="utf-8")
        except OSError as err:
            print(f"petitc: error: {err}", file=sys.stderr)
            return EXIT_SYNTAX
    if config.output is None:
        return _pipeline(config, source, sys.stdout)
    with open(config.output, "w", encoding="utf-8") as out:
        return _pipeline(config, source, out)


def main(argv: list[str] | None = None) -> int:
    arg_parser = argparse.ArgumentParser(
        prog="petitc",
        description="Compile, check or run a program; see the mode flags.",
    )
    group = arg_parser.add_mutually_exclusive_group()
    group.add_argument("--tokens", dest="mode", action="store_const", const="tokens",
                       help="dump the token stream")
    group.add_argument("--ast", dest="mode", action="store_const", const="ast",
                       help="print the abstract syntax tree")
    group.add_argument("--check", dest="mode", action="store_const", const="check",
                       help="print the type-annotated tree and semantic diagnostics")
    group.add_argument("--ir", dest="mode", action="store_const", const="ir",
                       help="emit the textual IR module")
    group.add_argument("--run", dest="mode", action="store_const", const="run",
                       help="compile and execute (the default)")
    group.add_argument("--calc", dest="mode", action="store_const", const="calc",
                       help="evaluate comma-separated integer expressions")
    arg_parser.add_argument("-o", "--output", metavar="FILE", help="write mode output to FILE")
    arg_parser.add_argument("input", nargs="?", help="source file (standard input when omitted)")
    args = arg_parser.parse_args(argv)
    config = DriverConfig(mode=args.mode or "run", input=args.input, output=args.output)
    return main_pipeline(config)


if __name__ == "__main__":
    sys.exit(main())
