"""Parser and executor for the IR subset the code generator emits.

Supported instructions: add, sub, mul, sdiv, icmp ne, br (both forms),
alloca, store, load, call and ret, over i32, i1 and i32 pointers. The
builtins `_read` and `_write` are bound to an injected integer source and
sink: `_read(x)` ignores its argument and returns the next whitespace
separated decimal from the source; `_write(x)` sends x to the sink as one
decimal line and returns x. Arithmetic wraps modulo 2**32.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from typing import TextIO

from .i32 import trunc_div, wrap

_NAME = r"[A-Za-z_][A-Za-z0-9_.]*"
_REG = r"%([A-Za-z0-9_.]+)"
_OPERAND = r"(-?\d+|%[A-Za-z0-9_.]+)"

_DECLARE_RE = re.compile(rf"declare i32 @({_NAME})\((.*)\)$")
_DEFINE_RE = re.compile(rf"define i32 @({_NAME})\((.*)\) \{{$")
_LABEL_RE = re.compile(r"([A-Za-z0-9_.]+):$")
_BINARY_RE = re.compile(rf"{_REG} = (add|sub|mul|sdiv) i32 {_OPERAND}, {_OPERAND}$")
_ICMP_RE = re.compile(rf"{_REG} = icmp ne i32 {_OPERAND}, {_OPERAND}$")
_BR_COND_RE = re.compile(rf"br i1 {_REG}, label {_REG}, label {_REG}$")
_BR_RE = re.compile(rf"br label {_REG}$")
_ALLOCA_RE = re.compile(rf"{_REG} = alloca i32$")
_STORE_RE = re.compile(rf"store i32 {_OPERAND}, i32\* {_REG}$")
_LOAD_RE = re.compile(rf"{_REG} = load i32, i32\* {_REG}$")
_CALL_RE = re.compile(rf"{_REG} = call i32 @({_NAME})\((.*)\)$")
_RET_RE = re.compile(rf"ret i32 {_OPERAND}$")

_TERMINATORS = frozenset({"br", "brc", "ret"})

BUILTIN_NAMES = frozenset({"_read", "_write"})

DEFAULT_MAX_DEPTH = 100000


class IrParseError(Exception):
    pass


class IrRunError(Exception):
    pass


Operand = int | str  # literal value, or register name without the % sigil


@dataclass(frozen=True)
class Instr:
    opcode: str
    dest: str | None
    args: tuple
    line: int


@dataclass
class Block:
    label: str | None  # the entry block of a function may be unlabeled
    instrs: list[Instr] = field(default_factory=list)


@dataclass
class IrFunction:
    name: str
    params: list[str]
    blocks: list[Block] = field(default_factory=list)
    labels: dict[str, int] = field(default_factory=dict)


@dataclass
class IrModule:
    declares: dict[str, int] = field(default_factory=dict)  # name -> parameter count
    functions: dict[str, IrFunction] = field(default_factory=dict)


def _parse_error(line_number: int, detail: str) -> IrParseError:
    return IrParseError(f"ir parse error at line {line_number}: {detail}")


def _operand(text: str) -> Operand:
    if text.startswith("%"):
        return text[1:]
    return wrap(int(text))


def parse_ir(text: str) -> IrModule:
    """Parse a textual module, validating structure as it goes: unique
    register definitions per function, existing branch targets, exactly one
    terminator closing every block, and call targets that are defined or
    declared."""
    module = IrModule()
    current: IrFunction | None = None
    block: Block | None = None
    calls: list[tuple[str, int]] = []

    def close_block() -> None:
        nonlocal block
        block = None

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = re.sub(r"\s+", " ", raw.split(";", 1)[0]).strip()
        if not line:
            continue

        if current is None:
            if match := _DECLARE_RE.fullmatch(line):
                name, params = match.groups()
                arity = 0
                if params.strip():
                    fields = [p.strip() for p in params.split(",")]
                    if any(f != "i32" for f in fields):
                        raise _parse_error(line_number, f"unsupported declare signature: {raw.strip()}")
                    arity = len(fields)
                module.declares[name] = arity
            elif match := _DEFINE_RE.fullmatch(line):
                name, params = match.groups()
                if name in module.functions:
                    raise _parse_error(line_number, f"duplicate function @{name}")
                names: list[str] = []
                if params.strip():
                    for field_text in params.split(","):
                        param = re.fullmatch(r"i32 %([A-Za-z0-9_.]+)", field_text.strip())
                        if param is None:
                            raise _parse_error(line_number, f"unsupported parameter: {field_text.strip()}")
                        names.append(param.group(1))
                current = IrFunction(name, names)
                block = None
            else:
                raise _parse_error(line_number, f"expected declare or define, got: {line}")
            continue

        if line == "}":
            _finish_function(current, line_number)
            module.functions[current.name] = current
            current = None
            close_block()
            continue

        if match := _LABEL_RE.fullmatch(line):
            label = match.group(1)
            if label in current.labels:
                raise _parse_error(line_number, f"duplicate label {label}")
            block = Block(label)
            current.labels[label] = len(current.blocks)
            current.blocks.append(block)
            continue

        instr = _parse_instruction(line, line_number)
        if instr.opcode == "call":
            calls.append((instr.args[0], line_number))
        if block is None:
            block = Block(None)
            current.blocks.append(block)
        block.instrs.append(instr)

    if current is not None:
        raise _parse_error(len(text.splitlines()) + 1, "missing closing brace")

    for name, line_number in calls:
        if name not in module.functions and name not in module.declares:
            raise _parse_error(line_number, f"call to undefined function @{name}")
    return module


def _parse_instruction(line: str, line_number: int) -> Instr:
    if match := _BINARY_RE.fullmatch(line):
        dest, opcode, a, b = match.groups()
        return Instr(opcode, dest, (_operand(a), _operand(b)), line_number)
    if match := _ICMP_RE.fullmatch(line):
        dest, a, b = match.groups()
        return Instr("icmp", dest, (_operand(a), _operand(b)), line_number)
    if match := _BR_COND_RE.fullmatch(line):
        cond, then_label, else_label = match.groups()
        return Instr("brc", None, (cond, then_label, else_label), line_number)
    if match := _BR_RE.fullmatch(line):
        return Instr("br", None, (match.group(1),), line_number)
    if match := _ALLOCA_RE.fullmatch(line):
        return Instr("alloca", match.group(1), (), line_number)
    if match := _STORE_RE.fullmatch(line):
        value, slot = match.groups()
        return Instr("store", None, (_operand(value), slot), line_number)
    if match := _LOAD_RE.fullmatch(line):
        dest, slot = match.groups()
        return Instr("load", dest, (slot,), line_number)
    if match := _CALL_RE.fullmatch(line):
        dest, name, args_text = match.groups()
        arguments: list[Operand] = []
        if args_text.strip():
            for field_text in args_text.split(","):
                arg = re.fullmatch(rf"i32 {_OPERAND}", field_text.strip())
                if arg is None:
                    raise _parse_error(line_number, f"unsupported call argument: {field_text.strip()}")
                arguments.append(_operand(arg.group(1)))
        return Instr("call", dest, (name, tuple(arguments)), line_number)
    if match := _RET_RE.fullmatch(line):
        return Instr("ret", None, (_operand(match.group(1)),), line_number)
    raise _parse_error(line_number, f"unsupported instruction: {line}")


def _finish_function(function: IrFunction, closing_line: int) -> None:
    if not function.blocks:
        raise _parse_error(closing_line, f"function @{function.name} has no body")
    defined = set(function.params)
    for block in function.blocks:
        for position, instr in enumerate(block.instrs):
            if instr.opcode in _TERMINATORS and position != len(block.instrs) - 1:
                raise _parse_error(instr.line, "instruction after a terminator")
        if not block.instrs or block.instrs[-1].opcode not in _TERMINATORS:
            where = block.label or "entry"
            raise _parse_error(closing_line, f"block {where} of @{function.name} lacks a terminator")
        for instr in block.instrs:
            if instr.dest is not None:
                if instr.dest in defined:
                    raise _parse_error(instr.line, f"register %{instr.dest} defined twice")
                defined.add(instr.dest)
            if instr.opcode == "brc":
                targets = instr.args[1:]
            elif instr.opcode == "br":
                targets = instr.args
            else:
                targets = ()
            for target in targets:
                if target not in function.labels:
                    raise _parse_error(instr.line, f"branch to unknown label {target}")


class _Slot:
    """One activation-local memory cell created by alloca."""

    __slots__ = ("value",)

    def __init__(self) -> None:
        self.value = 0


class _IntSource:
    """scanf-style reader: skip whitespace, then one signed decimal."""

    def __init__(self, stream: TextIO) -> None:
        self.stream = stream
        self.pushback = ""

    def _getc(self) -> str:
        if self.pushback:
            ch, self.pushback = self.pushback, ""
            return ch
        return self.stream.read(1)

    def next_int(self) -> int | None:
        ch = self._getc()
        while ch and ch.isspace():
            ch = self._getc()
        digits = ""
        if ch in "+-":
            digits = ch
            ch = self._getc()
        while ch and ch.isdigit():
            digits += ch
            ch = self._getc()
        if ch:
            self.pushback = ch
        if digits in ("", "+", "-"):
            return None
        return int(digits)


@dataclass
class _Frame:
    function: IrFunction
    regs: dict[str, object]
    block: int = 0
    index: int = 0
    pending: str | None = None  # destination register of the call in flight


def _as_i32(value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise IrRunError("runtime error: type mismatch")
    return value


def run(
    module: IrModule,
    entry: str,
    args: list[int],
    input: str | TextIO = "",
    output: TextIO | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> int:
    """Execute `entry` with the given i32 arguments and return its result.

    `input` feeds `_read`; `output` receives one decimal line per `_write`.
    Recursion is bounded by `max_depth` activation records.
    """
    entry = entry.lstrip("@")
    function = module.functions.get(entry)
    if function is None:
        raise IrRunError(f"runtime error: no function @{entry}")
    if len(args) != len(function.params):
        raise ValueError(f"@{entry} takes {len(function.params)} arguments, got {len(args)}")

    reader = _IntSource(io.StringIO(input) if isinstance(input, str) else input)
    frames = [_Frame(function, dict(zip(function.params, (wrap(a) for a in args))))]

    def resolve(frame: _Frame, operand: Operand) -> object:
        if isinstance(operand, int):
            return operand
        try:
            return frame.regs[operand]
        except KeyError:
            raise IrRunError(f"runtime error: use of undefined register %{operand}") from None

    def builtin(name: str, values: list[int]) -> int:
        if len(values) != 1:
            raise IrRunError(f"runtime error: @{name} takes one argument")
        if name == "_read":
            value = reader.next_int()
            if value is None:
                raise IrRunError("runtime error: input exhausted")
            return wrap(value)
        if output is not None:
            output.write(f"{values[0]}\n")
        return values[0]

    while True:
        frame = frames[-1]
        instr = frame.function.blocks[frame.block].instrs[frame.index]
        opcode = instr.opcode

        if opcode in ("add", "sub", "mul", "sdiv"):
            a = _as_i32(resolve(frame, instr.args[0]))
            b = _as_i32(resolve(frame, instr.args[1]))
            if opcode == "add":
                value = wrap(a + b)
            elif opcode == "sub":
                value = wrap(a - b)
            elif opcode == "mul":
                value = wrap(a * b)
            else:
                try:
                    value = trunc_div(a, b)
                except ZeroDivisionError:
                    raise IrRunError("runtime error: division by zero") from None
                except OverflowError:
                    raise IrRunError("runtime error: division overflow") from None
            frame.regs[instr.dest] = value
            frame.index += 1
        elif opcode == "icmp":
            a = _as_i32(resolve(frame, instr.args[0]))
            b = _as_i32(resolve(frame, instr.args[1]))
            frame.regs[instr.dest] = a != b
            frame.index += 1
        elif opcode == "brc":
            flag = resolve(frame, instr.args[0])
            if not isinstance(flag, bool):
                raise IrRunError("runtime error: branch on a non-boolean value")
            target = instr.args[1] if flag else instr.args[2]
            frame.block = frame.function.labels[target]
            frame.index = 0
        elif opcode == "br":
            frame.block = frame.function.labels[instr.args[0]]
            frame.index = 0
        elif opcode == "alloca":
            frame.regs[instr.dest] = _Slot()
            frame.index += 1
        elif opcode == "store":
            value = _as_i32(resolve(frame, instr.args[0]))
            slot = resolve(frame, instr.args[1])
            if not isinstance(slot, _Slot):
                raise IrRunError("runtime error: store target is not a slot")
            slot.value = value
            frame.index += 1
        elif opcode == "load":
            slot = resolve(frame, instr.args[0])
            if not isinstance(slot, _Slot):
                raise IrRunError("runtime error: load source is not a slot")
            frame.regs[instr.dest] = slot.value
            frame.index += 1
        elif opcode == "call":
            name, operands = instr.args
            values = [_as_i32(resolve(frame, operand)) for operand in operands]
            callee = module.functions.get(name)
            if callee is None:
                if name not in BUILTIN_NAMES:
                    raise IrRunError(f"runtime error: call to undefined function @{name}")
                frame.regs[instr.dest] = builtin(name, values)
                frame.index += 1
            else:
                if len(values) != len(callee.params):
                    raise IrRunError(f"runtime error: wrong argument count in call to @{name}")
                if len(frames) >= max_depth:
                    raise IrRunError("runtime error: call depth exceeded")
                frame.pending = instr.dest
                frame.index += 1
                frames.append(_Frame(callee, dict(zip(callee.params, values))))
        elif opcode == "ret":
            value = _as_i32(resolve(frame, instr.args[0]))
            frames.pop()
            if not frames:
                return value
            caller = frames[-1]
            caller.regs[caller.pending] = value
            caller.pending = None
        else:  # pragma: no cover - the parser admits no other opcode
            raise IrRunError(f"runtime error: unknown opcode {opcode}")
