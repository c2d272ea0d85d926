#!/usr/bin/env python3
"""Compile and execute every corpus program with the embedded interpreter,
comparing output against the recorded expectations.

usage: python3 scripts/run_corpus.py
"""

import io
import sys
from pathlib import Path

from petitc import check_program, codegen_program, parse_ir, parse_program, run, tokenize

CORPUS_DIR = Path(__file__).resolve().parents[1] / "tests" / "corpus"


def compile_module(source: str):
    tokens, diagnostics = tokenize(source)
    if diagnostics:
        raise SystemExit("\n".join(d.message for d in diagnostics))
    program, diagnostics = parse_program(tokens)
    if program is None:
        raise SystemExit("\n".join(d.message for d in diagnostics))
    _, errors, diagnostics = check_program(program)
    if errors:
        raise SystemExit("\n".join(d.message for d in diagnostics))
    return parse_ir(codegen_program(program))


def main() -> int:
    failures = 0
    for path in sorted(CORPUS_DIR.glob("*.pt")):
        module = compile_module(path.read_text())
        stdin_text = (path.with_suffix(".in")).read_text()
        expected = (path.with_suffix(".out")).read_text()
        sink = io.StringIO()
        run(module, "main", [], input=stdin_text, output=sink)
        got = sink.getvalue()
        status = "ok" if got == expected else "MISMATCH"
        failures += status != "ok"
        print(f"{path.stem:12s} {status:8s} {got.strip()!r}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
