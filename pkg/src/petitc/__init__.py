"""petitc: a compiler and IR interpreter for a small expression language.

Programs are lists of functions; every function body is a single
expression. The pipeline is tokenize -> parse -> check -> codegen, and the
emitted textual IR module can be executed in-process with `irvm` or linked
natively against the C runtime shim shipped alongside this package.
"""

from .ast import Category, DataType, Node, print_ast
from .codegen import codegen_program
from .diagnostics import Diagnostic, Phase, SourcePos, advance_position
from .irvm import IrModule, IrParseError, IrRunError, parse_ir, run
from .lexer import Token, TokenKind, dump_tokens, tokenize
from .parser import parse_program
from .semantics import check_program

__version__ = "0.1.0"

__all__ = [
    "Category",
    "DataType",
    "Diagnostic",
    "IrModule",
    "IrParseError",
    "IrRunError",
    "Node",
    "Phase",
    "SourcePos",
    "Token",
    "TokenKind",
    "advance_position",
    "check_program",
    "codegen_program",
    "dump_tokens",
    "parse_ir",
    "parse_program",
    "print_ast",
    "run",
    "tokenize",
]
