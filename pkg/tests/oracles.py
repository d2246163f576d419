"""Independent reference computations used to freeze expected values.

Nothing here touches the kernels or the band engine: evolution is a plain
Python loop over a list, one table lookup per cell.
"""
from __future__ import annotations


def doubling_doors_right(limit: int) -> set[int]:
    """Door coordinates >= 0 read off the concatenation | 0^1 | 0^2 | 0^4 ..."""
    text, k = "", 0
    while len(text) <= limit:
        text += "|" + "0" * 2**k
        k += 1
    return {i for i, ch in enumerate(text[:limit + 1]) if ch == "|"}


def doubling_doors_left(limit: int) -> set[int]:
    """Door coordinates < 0 read off the mirrored concatenation 0^1 | 0^2 | 0^4 | ...

    Reading leftward from coordinate -1: the gap of length 2^0 comes first,
    then a door, then 2^1 empty cells, and so on.
    """
    text, k = "", 0
    while len(text) <= limit:
        text += "0" * 2**k + "|"
        k += 1
    return {-(i + 1) for i, ch in enumerate(text[:limit]) if ch == "|"}


def naive_orbit(rule, spec, lo: int, hi: int, steps: int) -> list[list[int]]:
    """Rows ``T^t x`` on ``[lo, hi]`` for ``t <= steps``, by brute force."""
    r = rule.radius
    a_lo, a_hi = lo - steps * r, hi + steps * r
    row = [spec.at(i) for i in range(a_lo, a_hi + 1)]
    out = [row[steps * r: steps * r + hi - lo + 1]]
    off = r + rule.memory
    for t in range(1, steps + 1):
        row = [rule(*row[k + off:k + off + rule.span]) for k in range(len(row) - 2 * r)]
        shift = (steps - t) * r
        out.append(row[shift:shift + hi - lo + 1])
    return out
