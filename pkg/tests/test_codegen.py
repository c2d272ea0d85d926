import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS_NAMES, check_ok, compile_ok, corpus_source
from oracle import evaluate, random_expression
from petitc import irvm
from petitc.ast import get_child
from petitc.codegen import (
    Emitter,
    UnsupportedProgramError,
    codegen_function,
    codegen_parameters,
    codegen_program,
)

FACTORIAL_FUNCTION = """\
define i32 @_factorial(i32 %n) {
  %1 = alloca i32
  %2 = add i32 %n, 0
  %3 = icmp ne i32 %2, 0
  br i1 %3, label %L1then, label %L1else
L1then:
  %4 = add i32 %n, 0
  %5 = add i32 %n, 0
  %6 = add i32 1, 0
  %7 = sub i32 %5, %6
  %8 = call i32 @_factorial(i32 %7)
  %9 = mul i32 %4, %8
  store i32 %9, i32* %1
  br label %L1end
L1else:
  %10 = add i32 1, 0
  store i32 %10, i32* %1
  br label %L1end
L1end:
  %11 = load i32, i32* %1
  ret i32 %11
}

"""


def first_function(source):
    return check_ok(source).children[0]


def test_constant_function_text():
    assert codegen_function(first_function("f(integer i) = 10")) == (
        "define i32 @_f(i32 %i) {\n  %1 = add i32 10, 0\n  ret i32 %1\n}\n\n"
    )


def test_identity_reads_parameter_into_temporary():
    assert codegen_function(first_function("identity(integer n) = n")) == (
        "define i32 @_identity(i32 %n) {\n  %1 = add i32 %n, 0\n  ret i32 %1\n}\n\n"
    )


def test_factorial_block_layout():
    source = "factorial(integer n) = if n then n * factorial(n-1) else 1"
    assert codegen_function(first_function(source)) == FACTORIAL_FUNCTION


def test_single_parameter_has_no_comma():
    function = first_function("f(integer n) = n")
    assert codegen_parameters(get_child(function, 1)) == "i32 %n"


def test_parameters_in_declaration_order():
    function = first_function("f(integer a, integer b) = a")
    assert codegen_parameters(get_child(function, 1)) == "i32 %a, i32 %b"


def test_emitter_natural_returns_first_register():
    emitter = Emitter()
    program = check_ok("f(integer i) = 10")
    body = get_child(program.children[0], 2)
    assert emitter.expression(body) == 1
    assert emitter.lines == ["  %1 = add i32 10, 0"]
    assert emitter.temporary == 2


def test_register_numbering_restarts_per_function():
    text = compile_ok("f(integer a) = a + 1\ng(integer b) = b + 2")
    assert text.count("%1 = add i32 %a, 0") == 1
    assert text.count("%1 = add i32 %b, 0") == 1


def test_nested_ifs_use_distinct_label_sets():
    text = compile_ok("f(integer n) = if n then if n-1 then 2 else 1 else 0")
    for label in ("L1then", "L1else", "L1end", "L2then", "L2else", "L2end"):
        assert text.count(f"{label}:") == 1


def test_module_declares_builtins_first():
    text = compile_ok("f(integer n) = n")
    assert text.startswith("declare i32 @_read(i32)\ndeclare i32 @_write(i32)\n\n")


def test_entry_glue_only_with_main():
    without = compile_ok("f(integer n) = n")
    assert "define i32 @main()" not in without
    with_main = compile_ok("main(integer i) = write(i)")
    assert with_main.endswith(
        "define i32 @main() {\n  %1 = call i32 @_main(i32 0)\n  ret i32 %1\n}\n"
    )


def test_identity_program_module():
    text = compile_ok("identity(integer n) = n")
    assert "define i32 @_identity(i32 %n) {" in text
    assert text.count("define") == 1


def test_calls_use_underscore_prefix():
    text = compile_ok("main(integer i) = write(read(0))")
    assert "call i32 @_read(i32 %1)" in text
    assert "call i32 @_write(i32 %2)" in text


def test_large_literal_wraps_to_i32():
    text = compile_ok("f(integer n) = 4294967296")
    assert "%1 = add i32 0, 0" in text


def test_double_typed_program_is_rejected():
    program = check_ok("f(double d) = d")
    with pytest.raises(UnsupportedProgramError):
        codegen_program(program)


def test_decimal_literal_is_rejected():
    program = check_ok("f(integer n) = 1.5")
    with pytest.raises(UnsupportedProgramError):
        codegen_program(program)


def test_mod_compiles_and_computes():
    module = irvm.parse_ir(compile_ok("mod(integer a, integer b) = a-a/b*b"))
    assert irvm.run(module, "_mod", [7, 3]) == 1


# ---------------------------------------------------------------------------
# Structural checks over emitted modules
# ---------------------------------------------------------------------------

_DEF_RE = re.compile(r"define i32 @([A-Za-z0-9_]+)\((.*)\) \{")
_DEST_RE = re.compile(r"^  %([A-Za-z0-9]+) = ")
_USE_RE = re.compile(r"%([A-Za-z0-9]+)")
_TERMINATOR_RE = re.compile(r"^  (br|ret)\b")


def split_functions(text):
    functions = {}
    name = None
    for line in text.splitlines():
        match = _DEF_RE.match(line)
        if match:
            name = match.group(1)
            params = re.findall(r"%([A-Za-z0-9_]+)", match.group(2))
            functions[name] = (params, [])
        elif line == "}":
            name = None
        elif name is not None:
            functions[name][1].append(line)
    return functions


def assert_ssa_and_block_structure(text):
    for name, (params, lines) in split_functions(text).items():
        defined = list(params)
        for line in lines:
            if line.endswith(":"):
                continue
            # labels are not register uses
            uses = _USE_RE.findall(re.sub(r"label %[A-Za-z0-9_]+", "", line))
            destination = _DEST_RE.match(line)
            if destination:
                uses = uses[1:]
            for register in uses:
                assert register in defined, f"use of %{register} before definition in @{name}"
            if destination:
                register = destination.group(1)
                assert register not in defined, f"%{register} defined twice in @{name}"
                defined.append(register)
        numbered = [int(r) for r in defined if r.isdigit()]
        assert numbered == list(range(1, len(numbered) + 1)), f"register gap in @{name}"
        # one terminator, at the end of every block
        blocks, current = [], []
        for line in lines:
            if line.endswith(":"):
                blocks.append(current)
                current = []
            else:
                current.append(line)
        blocks.append(current)
        for block in blocks:
            assert block, f"empty block in @{name}"
            assert _TERMINATOR_RE.match(block[-1]), f"block without terminator in @{name}"
            assert not any(_TERMINATOR_RE.match(line) for line in block[:-1])


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_modules_are_ssa_with_terminated_blocks(name):
    assert_ssa_and_block_structure(compile_ok(corpus_source(name)))


def test_call_argument_counts_match_definitions():
    for name in CORPUS_NAMES:
        module = irvm.parse_ir(compile_ok(corpus_source(name)))
        arities = {fn: len(f.params) for fn, f in module.functions.items()}
        arities.update(module.declares)
        for function in module.functions.values():
            for block in function.blocks:
                for instr in block.instrs:
                    if instr.opcode == "call":
                        callee, arguments = instr.args
                        assert len(arguments) == arities[callee]


# ---------------------------------------------------------------------------
# Compiled code agrees with the direct evaluator
# ---------------------------------------------------------------------------

def compile_and_run_expression(expression_source, argument):
    source = f"t(integer a) = {expression_source}"
    program = check_ok(source)
    body = get_child(program.children[0], 2)
    module = irvm.parse_ir(codegen_program(program))
    try:
        expected = evaluate(body, {"a": argument})
    except ZeroDivisionError:
        with pytest.raises(irvm.IrRunError, match="division by zero"):
            irvm.run(module, "_t", [argument])
        return
    except OverflowError:
        with pytest.raises(irvm.IrRunError, match="division overflow"):
            irvm.run(module, "_t", [argument])
        return
    assert irvm.run(module, "_t", [argument]) == expected, source


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(-100, 100))
def test_compiled_code_matches_oracle(seed, argument):
    rng = random.Random(seed)
    compile_and_run_expression(random_expression(rng, 4, names=("a",)), argument)
