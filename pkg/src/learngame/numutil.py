"""Integer log2/pow2 helpers on unbounded ints, with log2(0) == 0."""

from __future__ import annotations


def floor_log2(n: int) -> int:
    """Largest e with 2**e <= n; 0 for n == 0."""
    if n < 0:
        raise ValueError(f"floor_log2 of negative number {n}")
    if n == 0:
        return 0
    return n.bit_length() - 1


def ceil_log2(n: int) -> int:
    """Smallest e with n <= 2**e; 0 for n in {0, 1}."""
    if n < 0:
        raise ValueError(f"ceil_log2 of negative number {n}")
    if n <= 1:
        return 0
    return (n - 1).bit_length()


def pow2(e: int) -> int:
    if e < 0:
        raise ValueError(f"pow2 of negative exponent {e}")
    return 1 << e
