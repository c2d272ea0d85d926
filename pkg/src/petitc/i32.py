"""Two's-complement 32-bit integer helpers shared by emission and execution."""

from __future__ import annotations

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1
_MODULUS = 2**32


def wrap(value: int) -> int:
    """Reduce `value` into [INT32_MIN, INT32_MAX] modulo 2**32."""
    return ((value - INT32_MIN) % _MODULUS) + INT32_MIN


def trunc_div(a: int, b: int) -> int:
    """C-style signed division truncating toward zero.

    Raises ZeroDivisionError for a zero divisor and OverflowError for
    INT32_MIN // -1, the one quotient outside the 32-bit range.
    """
    if b == 0:
        raise ZeroDivisionError("division by zero")
    if a == INT32_MIN and b == -1:
        raise OverflowError("quotient does not fit in 32 bits")
    quotient = abs(a) // abs(b)
    return -quotient if (a < 0) != (b < 0) else quotient
