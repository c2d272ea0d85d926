#!/usr/bin/env python3
"""Differential stress run: random constant expressions evaluated two ways,
the calculator's tree evaluator against compile-plus-interpret.

usage: python3 scripts/stress_random.py [count] [seed]
"""

import random
import sys

from petitc import check_program, codegen_program, parse_ir, parse_program, run, tokenize
from petitc.cli import eval_calc
from petitc.irvm import IrRunError


def random_expression(rng: random.Random, depth: int) -> str:
    if depth <= 0 or rng.random() < 0.3:
        return str(rng.randrange(0, 50))
    roll = rng.randrange(5)
    if roll < 4:
        op = "+-*/"[roll]
        return f"({random_expression(rng, depth - 1)} {op} {random_expression(rng, depth - 1)})"
    parts = [random_expression(rng, depth - 1) for _ in range(3)]
    return f"(if {parts[0]} then {parts[1]} else {parts[2]})"


def compiled_value(expression: str) -> tuple[int | None, str | None]:
    source = f"t(integer a) = {expression}"
    tokens, _ = tokenize(source)
    program, _ = parse_program(tokens)
    check_program(program)
    module = parse_ir(codegen_program(program))
    try:
        return run(module, "_t", [0]), None
    except IrRunError as err:
        return None, str(err)


def main() -> int:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7
    rng = random.Random(seed)
    mismatches = 0
    for index in range(count):
        expression = random_expression(rng, 4)
        values, diagnostics = eval_calc(expression)
        calc = (values[0], None) if values else (None, diagnostics[0].message)
        native = compiled_value(expression)
        if calc != native:
            mismatches += 1
            print(f"MISMATCH {expression!r}: calc={calc} compiled={native}")
    print(f"{count} expressions, {mismatches} mismatches (seed {seed})")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
