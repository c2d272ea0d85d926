"""Lowering of a checked program to a textual IR module.

Everything is 32-bit integer code. Each source function becomes
`define i32 @_<name>(...)` with numbered temporaries starting at 1;
if-then-else lowers to the alloca/branch/store/load block pattern with
labels L<k>then, L<k>else and L<k>end. When the program defines `main`,
an unprefixed `@main` entry function is appended that calls `@_main`
with the literal argument 0.
"""

from __future__ import annotations

from .ast import BINARY_CATEGORIES, Category, DataType, Node, get_child
from .i32 import wrap


class UnsupportedProgramError(Exception):
    """Raised when lowering meets a construct outside the integer subset."""


_BINARY_OPCODES = {
    Category.Add: "add",
    Category.Sub: "sub",
    Category.Mul: "mul",
    Category.Div: "sdiv",
}

ENTRY_GLUE = "define i32 @main() {\n  %1 = call i32 @_main(i32 0)\n  ret i32 %1\n}\n"


class Emitter:
    """Per-function emitter; `temporary` and `if_counter` both start at 1."""

    def __init__(self) -> None:
        self.temporary = 1
        self.if_counter = 1
        self.lines: list[str] = []

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    def emit(self, line: str) -> None:
        self.lines.append(line)

    def new_temporary(self) -> int:
        number = self.temporary
        self.temporary += 1
        return number

    def expression(self, node: Node) -> int:
        """Emit code evaluating `node`; returns the temporary register number
        holding the result."""
        if node.dtype is DataType.DOUBLE:
            raise UnsupportedProgramError("only integer expressions can be lowered")
        category = node.category
        if category is Category.Natural:
            register = self.new_temporary()
            self.emit(f"  %{register} = add i32 {wrap(int(node.lexeme))}, 0")
            return register
        if category is Category.Identifier:
            register = self.new_temporary()
            self.emit(f"  %{register} = add i32 %{node.lexeme}, 0")
            return register
        if category in BINARY_CATEGORIES:
            left = self.expression(get_child(node, 0))
            right = self.expression(get_child(node, 1))
            register = self.new_temporary()
            self.emit(f"  %{register} = {_BINARY_OPCODES[category]} i32 %{left}, %{right}")
            return register
        if category is Category.Call:
            name = get_child(node, 0).lexeme
            values = [self.expression(argument) for argument in get_child(node, 1).children]
            register = self.new_temporary()
            arguments = ", ".join(f"i32 %{value}" for value in values)
            self.emit(f"  %{register} = call i32 @_{name}({arguments})")
            return register
        if category is Category.If:
            return self._if_expression(node)
        raise UnsupportedProgramError(f"cannot lower a {category.name} node")

    def _if_expression(self, node: Node) -> int:
        label = self.if_counter
        self.if_counter += 1
        slot = self.new_temporary()
        self.emit(f"  %{slot} = alloca i32")
        condition = self.expression(get_child(node, 0))
        flag = self.new_temporary()
        self.emit(f"  %{flag} = icmp ne i32 %{condition}, 0")
        self.emit(f"  br i1 %{flag}, label %L{label}then, label %L{label}else")
        self.emit(f"L{label}then:")
        value = self.expression(get_child(node, 1))
        self.emit(f"  store i32 %{value}, i32* %{slot}")
        self.emit(f"  br label %L{label}end")
        self.emit(f"L{label}else:")
        value = self.expression(get_child(node, 2))
        self.emit(f"  store i32 %{value}, i32* %{slot}")
        self.emit(f"  br label %L{label}end")
        self.emit(f"L{label}end:")
        result = self.new_temporary()
        self.emit(f"  %{result} = load i32, i32* %{slot}")
        return result


def codegen_parameters(parameters: Node) -> str:
    """Comma-separated `i32 %<name>` list in declaration order."""
    names = [get_child(parameter, 1).lexeme for parameter in parameters.children]
    return ", ".join(f"i32 %{name}" for name in names)


def codegen_function(function: Node) -> str:
    """One complete function definition followed by a blank line."""
    emitter = Emitter()
    name = get_child(function, 0).lexeme
    emitter.emit(f"define i32 @_{name}({codegen_parameters(get_child(function, 1))}) {{")
    result = emitter.expression(get_child(function, 2))
    emitter.emit(f"  ret i32 %{result}")
    emitter.emit("}")
    emitter.emit("")
    return emitter.text()


def codegen_program(program: Node) -> str:
    """The full module: extern declarations, every function, and the @main
    entry glue when the program defines a function named main. The program
    must have passed the semantic check with zero errors."""
    parts = ["declare i32 @_read(i32)\n", "declare i32 @_write(i32)\n", "\n"]
    has_main = False
    for function in program.children:
        parts.append(codegen_function(function))
        has_main = has_main or get_child(function, 0).lexeme == "main"
    if has_main:
        parts.append(ENTRY_GLUE)
    return "".join(parts)
