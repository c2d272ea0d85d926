"""Scope analysis and type checking.

Function names live in one global namespace seeded with the builtins `read`
and `write` (one integer parameter, integer result each). Every function body
is checked against a fresh local scope holding only its own parameters. All
function names are declared before any body is checked, so calls may refer to
functions defined later in the file.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import BINARY_CATEGORIES, Category, DataType, Node, get_child
from .diagnostics import Diagnostic, Phase, SourcePos


@dataclass
class SymbolEntry:
    identifier: str
    dtype: DataType
    node: Node | None
    arity: int | None = None  # set for functions and builtins only
    result: DataType | None = None


class SymbolTable:
    """Append-only symbol list; insertion refuses duplicate identifiers."""

    def __init__(self) -> None:
        self.entries: list[SymbolEntry] = []

    def insert(
        self,
        identifier: str,
        dtype: DataType,
        node: Node | None,
        arity: int | None = None,
        result: DataType | None = None,
    ) -> SymbolEntry | None:
        if self.search(identifier) is not None:
            return None
        entry = SymbolEntry(identifier, dtype, node, arity, result)
        self.entries.append(entry)
        return entry

    def search(self, identifier: str) -> SymbolEntry | None:
        for entry in self.entries:
            if entry.identifier == identifier:
                return entry
        return None


@dataclass
class Scope:
    """Plain identifiers resolve in `local_table` only; call targets resolve
    in `global_table` only."""

    global_table: SymbolTable
    local_table: SymbolTable


OPERATOR_NAMES = {
    Category.Add: "add",
    Category.Sub: "sub",
    Category.Mul: "mul",
    Category.Div: "div",
}


def builtin_table() -> SymbolTable:
    """A fresh global table holding the `read` and `write` builtins."""
    table = SymbolTable()
    table.insert("read", DataType.NO_TYPE, None, arity=1, result=DataType.INTEGER)
    table.insert("write", DataType.NO_TYPE, None, arity=1, result=DataType.INTEGER)
    return table


def _report(diagnostics: list[Diagnostic], pos: SourcePos, text: str) -> None:
    diagnostics.append(Diagnostic(Phase.SEMANTIC, pos, f"{pos}: {text}"))


def check_program(program: Node) -> tuple[Node, int, list[Diagnostic]]:
    """Check a parsed program; returns the annotated tree, the number of
    semantic errors and the diagnostics themselves."""
    table = builtin_table()
    diagnostics: list[Diagnostic] = []
    for function in program.children:
        declare_function(function, table, diagnostics)
    for function in program.children:
        check_function_body(function, table, diagnostics)
    return program, len(diagnostics), diagnostics


def declare_function(function: Node, table: SymbolTable, diagnostics: list[Diagnostic]) -> None:
    """Insert the function into the global table; duplicates (other functions
    or builtins) are reported at the function's identifier."""
    identifier = get_child(function, 0)
    arity = len(get_child(function, 1).children)
    entry = table.insert(
        identifier.lexeme, DataType.NO_TYPE, function, arity=arity, result=DataType.INTEGER
    )
    if entry is None:
        _report(diagnostics, identifier.pos, f"identifier {identifier.lexeme} already declared")


def check_function_body(
    function: Node, table: SymbolTable, diagnostics: list[Diagnostic]
) -> None:
    scope = Scope(table, SymbolTable())
    check_parameters(get_child(function, 1), scope, diagnostics)
    check_expression(get_child(function, 2), scope, diagnostics)


def check_function(function: Node, table: SymbolTable) -> list[Diagnostic]:
    """Declare one function and check its parameters and body against a fresh
    local scope."""
    diagnostics: list[Diagnostic] = []
    declare_function(function, table, diagnostics)
    check_function_body(function, table, diagnostics)
    return diagnostics


def check_parameters(parameters: Node, scope: Scope, diagnostics: list[Diagnostic]) -> None:
    for parameter in parameters.children:
        type_node = get_child(parameter, 0)
        identifier = get_child(parameter, 1)
        dtype = DataType.INTEGER if type_node.category is Category.Integer else DataType.DOUBLE
        if scope.local_table.insert(identifier.lexeme, dtype, parameter) is None:
            _report(
                diagnostics, identifier.pos, f"identifier {identifier.lexeme} already declared"
            )


def check_expression(expression: Node, scope: Scope, diagnostics: list[Diagnostic]) -> DataType:
    """Annotate `expression` bottom-up and return its type.

    A node on which an error is reported is annotated NO_TYPE, and NO_TYPE
    operands never trigger further diagnostics higher up the tree.
    """
    category = expression.category
    if category is Category.Natural:
        dtype = DataType.INTEGER
    elif category is Category.Decimal:
        dtype = DataType.DOUBLE
    elif category is Category.Identifier:
        entry = scope.local_table.search(expression.lexeme)
        if entry is None:
            _report(diagnostics, expression.pos, f"unknown identifier {expression.lexeme}")
            dtype = DataType.NO_TYPE
        else:
            dtype = entry.dtype
    elif category is Category.Call:
        dtype = _check_call(expression, scope, diagnostics)
    elif category is Category.If:
        dtype = _check_if(expression, scope, diagnostics)
    elif category in BINARY_CATEGORIES:
        left = check_expression(get_child(expression, 0), scope, diagnostics)
        right = check_expression(get_child(expression, 1), scope, diagnostics)
        if left is DataType.NO_TYPE or right is DataType.NO_TYPE:
            dtype = DataType.NO_TYPE
        elif left is right:
            dtype = left
        else:
            _report(
                diagnostics,
                expression.pos,
                f"incompatible types in {OPERATOR_NAMES[category]} operation",
            )
            dtype = DataType.NO_TYPE
    else:
        raise ValueError(f"not an expression node: {category.name}")
    expression.dtype = dtype
    return dtype


def _check_call(call: Node, scope: Scope, diagnostics: list[Diagnostic]) -> DataType:
    callee = get_child(call, 0)
    arguments = get_child(call, 1)
    entry = scope.global_table.search(callee.lexeme)
    if entry is None:
        _report(diagnostics, callee.pos, f"unknown identifier {callee.lexeme}")
        result = DataType.NO_TYPE
    elif len(arguments.children) != entry.arity:
        _report(
            diagnostics,
            call.pos,
            f"wrong number of arguments in call to {callee.lexeme}"
            f" (got {len(arguments.children)}, expected {entry.arity})",
        )
        result = DataType.NO_TYPE
    else:
        result = entry.result
    for argument in arguments.children:
        check_expression(argument, scope, diagnostics)
    return result


def _check_if(node: Node, scope: Scope, diagnostics: list[Diagnostic]) -> DataType:
    condition = check_expression(get_child(node, 0), scope, diagnostics)
    then_type = check_expression(get_child(node, 1), scope, diagnostics)
    else_type = check_expression(get_child(node, 2), scope, diagnostics)
    errored = False
    if condition not in (DataType.INTEGER, DataType.NO_TYPE):
        _report(diagnostics, node.pos, "incompatible condition type in if expression")
        errored = True
    if then_type is DataType.NO_TYPE or else_type is DataType.NO_TYPE:
        result = DataType.NO_TYPE
    elif then_type is else_type:
        result = then_type
    else:
        _report(diagnostics, node.pos, "incompatible types in if expression")
        errored = True
        result = DataType.NO_TYPE
    return DataType.NO_TYPE if errored else result
