"""Differential test: natively linked binaries must produce byte-identical
stdout to the embedded interpreter for every corpus program.

The compiler is consumed strictly through its command-line interface and the
.ll modules it emits. Requires an LLVM toolchain (clang, plus llc when
available for the two-step assembly flow); skipped otherwise.
"""

import shutil
import subprocess
import sys
from pathlib import Path

import pytest

RUNTIME_DIR = Path(__file__).parent
REPO_ROOT = RUNTIME_DIR.parent
CORPUS_DIR = REPO_ROOT / "tests" / "corpus"
IO_C = RUNTIME_DIR / "io.c"

CLANG = shutil.which("clang")
LLC = shutil.which("llc")

pytestmark = pytest.mark.skipif(CLANG is None, reason="LLVM toolchain not installed")

CORPUS_NAMES = sorted(path.stem for path in CORPUS_DIR.glob("*.pt"))


def petitc(args: list[str], stdin_text: str = "") -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "petitc", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
    )


def build_native(ll_path: Path, binary: Path) -> None:
    if LLC is not None:
        asm = ll_path.with_suffix(".s")
        subprocess.run([LLC, str(ll_path), "-o", str(asm)], check=True)
        subprocess.run([CLANG, str(asm), str(IO_C), "-o", str(binary)], check=True)
    else:
        subprocess.run(
            [CLANG, "-Wno-override-module", str(ll_path), str(IO_C), "-o", str(binary)],
            check=True,
        )


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_native_binary_matches_interpreter(tmp_path, name):
    source = CORPUS_DIR / f"{name}.pt"
    stdin_text = (CORPUS_DIR / f"{name}.in").read_text()

    emitted = petitc(["--ir", str(source)])
    assert emitted.returncode == 0, emitted.stderr
    ll_path = tmp_path / f"{name}.ll"
    ll_path.write_text(emitted.stdout)

    binary = tmp_path / name
    build_native(ll_path, binary)
    native = subprocess.run([str(binary)], input=stdin_text, capture_output=True, text=True)

    interpreted = petitc(["--run", str(source)], stdin_text=stdin_text)
    assert interpreted.returncode == 0, interpreted.stderr

    assert native.stdout == interpreted.stdout
    assert native.stdout == (CORPUS_DIR / f"{name}.out").read_text()


def test_factorial_with_input_12(tmp_path):
    source = CORPUS_DIR / "factorial.pt"
    emitted = petitc(["--ir", str(source)])
    ll_path = tmp_path / "factorial.ll"
    ll_path.write_text(emitted.stdout)
    binary = tmp_path / "factorial"
    build_native(ll_path, binary)
    native = subprocess.run([str(binary)], input="12", capture_output=True, text=True)
    assert native.stdout == "479001600\n"
