"""Lazily evaluable bi-infinite configurations.

Coordinate convention: in ``L . C R`` notation coordinate 0 is the first
symbol of the center word, the left word repeats toward minus infinity
(its last symbol sits at -1) and the right word repeats toward plus
infinity starting right after the center.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .alphabet import Alphabet, as_codes


class ConfigSpec:
    """A point of the full shift, evaluable at any coordinate."""

    alphabet: Alphabet
    kind: str = "Custom"

    def at(self, i: int) -> int:
        raise NotImplementedError

    def evaluate(self, lo: int, hi: int) -> np.ndarray:
        """Symbols at coordinates ``lo..hi`` inclusive."""
        return np.fromiter((self.at(i) for i in range(lo, hi + 1)), dtype=np.uint8, count=hi - lo + 1)

    def window(self, half_width: int) -> np.ndarray:
        return self.evaluate(-half_width, half_width)

    def shifted(self, k: int = 1) -> Custom:
        """The configuration ``sigma^k(x)``, i.e. ``y_i = x_{i+k}``."""
        return Custom(self.alphabet, lambda i: self.at(i + k),
                      vectorized=lambda idx: self._eval_at(idx + k),
                      label=f"shift({k})")

    def _eval_at(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx)
        if idx.size == 0:
            return np.empty(0, dtype=np.uint8)
        lo, hi = int(idx.min()), int(idx.max())
        return self.evaluate(lo, hi)[idx - lo]


def coordinate_at(spec: ConfigSpec, i: int) -> int:
    return spec.at(i)


@dataclass(frozen=True)
class EventuallyPeriodic(ConfigSpec):
    alphabet: Alphabet
    left: tuple
    center: tuple
    right: tuple
    kind = "EventuallyPeriodic"

    def __post_init__(self):
        for attr in ("left", "center", "right"):
            object.__setattr__(self, attr, tuple(int(c) for c in as_codes(getattr(self, attr), self.alphabet)))
        if not self.left or not self.right:
            raise ValueError("periodic tails must be non-empty")

    def at(self, i: int) -> int:
        n = len(self.center)
        if 0 <= i < n:
            return self.center[i]
        if i >= n:
            return self.right[(i - n) % len(self.right)]
        return self.left[len(self.left) - 1 - ((-i - 1) % len(self.left))]

    def evaluate(self, lo: int, hi: int) -> np.ndarray:
        idx = np.arange(lo, hi + 1, dtype=np.int64)
        n = len(self.center)
        out = np.empty(idx.shape, dtype=np.uint8)
        left = np.asarray(self.left, dtype=np.uint8)
        right = np.asarray(self.right, dtype=np.uint8)
        neg = idx < 0
        out[neg] = left[len(left) - 1 - ((-idx[neg] - 1) % len(left))]
        pos = idx >= n
        out[pos] = right[(idx[pos] - n) % len(right)]
        mid = ~neg & ~pos
        if mid.any():
            out[mid] = np.asarray(self.center, dtype=np.uint8)[idx[mid]]
        return out

    def __str__(self):
        a = self.alphabet
        return f"{a.render(self.left, True)}*{a.render(self.center, True)}*{a.render(self.right, True)}"


def periodic(alphabet: Alphabet, left, center, right) -> EventuallyPeriodic:
    return EventuallyPeriodic(alphabet, left, center, right)


def doubling_positions(limit: int) -> tuple[list[int], list[int]]:
    """Door coordinates of the doubling pattern within ``[-limit, limit]``.

    Returns ``(right, left)``: right doors at ``k + 2^k - 1`` (k >= 0),
    left doors at ``-(k + 2^(k+1))``.
    """
    right, left = [], []
    k = 0
    while k + 2**k - 1 <= limit:
        right.append(k + 2**k - 1)
        k += 1
    k = 0
    while k + 2 ** (k + 1) <= limit:
        left.append(-(k + 2 ** (k + 1)))
        k += 1
    return right, left


@dataclass(frozen=True)
class DoublingDoors(ConfigSpec):
    """Doors separated by gaps ``1, 2, 4, ...`` in both directions.

    With an ``insert`` word ``w``, coordinates ``0..|w|-1`` hold ``w`` and the
    right-hand pattern starts at ``|w|``.
    """

    alphabet: Alphabet
    door: int
    empty: int
    insert: tuple = ()
    kind = "DoublingDoors"

    def __post_init__(self):
        object.__setattr__(self, "insert", tuple(int(c) for c in as_codes(self.insert, self.alphabet)))

    def at(self, i: int) -> int:
        return int(self.evaluate(i, i)[0])

    def evaluate(self, lo: int, hi: int) -> np.ndarray:
        out = np.full(hi - lo + 1, self.empty, dtype=np.uint8)
        w = len(self.insert)
        right, left = doubling_positions(max(abs(lo), abs(hi)) + 1)
        for p in left:
            if lo <= p <= hi:
                out[p - lo] = self.door
        for p in right:
            if lo <= p + w <= hi:
                out[p + w - lo] = self.door
        for k, c in enumerate(self.insert):
            if lo <= k <= hi:
                out[k - lo] = c
        return out


@dataclass(frozen=True, eq=False)
class Custom(ConfigSpec):
    """Caller-supplied evaluator; ``vectorized`` maps a coordinate array to codes."""

    alphabet: Alphabet
    fn: Callable[[int], int]
    vectorized: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    label: str = "custom"
    kind = "Custom"

    def at(self, i: int) -> int:
        return int(self.fn(i))

    def evaluate(self, lo: int, hi: int) -> np.ndarray:
        if self.vectorized is None:
            return super().evaluate(lo, hi)
        return np.asarray(self.vectorized(np.arange(lo, hi + 1, dtype=np.int64)), dtype=np.uint8)


def splice(base: ConfigSpec, keep_lo: int, keep_hi: int,
           left: ConfigSpec | None = None, right: ConfigSpec | None = None,
           label: str = "splice") -> Custom:
    """``base`` on ``[keep_lo, keep_hi]``, ``left``/``right`` beyond it.

    A missing side keeps ``base`` there. Tails are read at their own
    coordinates, so ``right.at(keep_hi + 1)`` is the first replaced cell.
    """

    def pick(i):
        if i < keep_lo and left is not None:
            return left.at(i)
        if i > keep_hi and right is not None:
            return right.at(i)
        return base.at(i)

    def vec(idx):
        out = base._eval_at(idx)
        if left is not None:
            sel = idx < keep_lo
            if sel.any():
                out[sel] = left._eval_at(idx[sel])
        if right is not None:
            sel = idx > keep_hi
            if sel.any():
                out[sel] = right._eval_at(idx[sel])
        return out

    return Custom(base.alphabet, pick, vectorized=vec, label=label)


def constant(alphabet: Alphabet, code: int) -> EventuallyPeriodic:
    return EventuallyPeriodic(alphabet, (code,), (), (code,))
