"""Sound search for blocking columns via set-valued evolution.

Each cell carries a bitmask of symbols it might hold. Cells outside the
tracked region are the full set. A singleton cell is truly determined by
the word, so a column that stays singleton forever blocks information
flow. Lost correlations between cells make the search incomplete: a
``None`` answer does not prove that no blocking column exists.
"""
from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass

from .alphabet import as_codes
from .rule import LocalRule

_CACHES: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def _image(rule: LocalRule, masks: tuple) -> int:
    cache = _CACHES.setdefault(rule, {})
    out = cache.get(masks)
    if out is None:
        members = [[s for s in range(rule.nsym) if m >> s & 1] for m in masks]
        out = 0
        table = rule.table
        for nb in itertools.product(*members):
            out |= 1 << int(table[rule.index(nb)])
        cache[masks] = out
    return out


def partial_step(rule: LocalRule, row) -> list[int]:
    """Set-valued ``step_row``: ``out[i]`` is every value ``f`` can take on
    ``row[i] x ... x row[i+span-1]``."""
    row = list(row)
    if any(m == 0 for m in row):
        raise ValueError("symbol sets must be non-empty")
    if len(row) < rule.span:
        raise ValueError(f"row of length {len(row)} < span {rule.span}")
    span = rule.span
    return [_image(rule, tuple(row[i:i + span])) for i in range(len(row) - span + 1)]


@dataclass(frozen=True)
class ProvedByCycle:
    period: int
    preperiod: int


@dataclass(frozen=True)
class HeldToHorizon:
    steps: int


@dataclass(frozen=True)
class BlockingResult:
    offset: int
    evidence: ProvedByCycle | HeldToHorizon

    @property
    def proved(self) -> bool:
        return isinstance(self.evidence, ProvedByCycle)


def _singleton(mask: int) -> bool:
    return mask != 0 and mask & (mask - 1) == 0


def find_blocking_column(rule: LocalRule, w, r: int = 1, max_steps: int = 1000) -> BlockingResult | None:
    """Look for an offset ``p`` such that columns ``p..p+r-1`` are determined
    by ``w`` (placed at ``0..|w|-1``) at every time.

    The smallest surviving offset is reported. Evidence is
    ``ProvedByCycle`` when the whole set-valued state recurs (a proof for
    all times) and ``HeldToHorizon`` when ``max_steps`` ran out first.
    """
    codes = [int(c) for c in as_codes(w, rule.alphabet)]
    if r < 1 or len(codes) < r:
        raise ValueError("need 1 <= r <= |w|")
    full = rule.alphabet.full_mask()
    grow_left = max(rule.anticipation, 0)
    grow_right = max(-rule.memory, 0)
    lo, cells = 0, [1 << c for c in codes]
    candidates = list(range(len(codes) - r + 1))
    seen = {(lo, tuple(cells)): 0}

    for step in range(1, max_steps + 1):
        new_lo = lo - grow_left
        first = new_lo + rule.memory
        last = lo + len(cells) - 1 + grow_right + rule.anticipation
        padded = [full] * (lo - first) + cells + [full] * (last - (lo + len(cells) - 1))
        cells = partial_step(rule, padded)
        lo = new_lo
        while cells and cells[0] == full:
            cells.pop(0)
            lo += 1
        while cells and cells[-1] == full:
            cells.pop()
        hi = lo + len(cells) - 1
        candidates = [
            p for p in candidates
            if lo <= p and p + r - 1 <= hi and all(_singleton(cells[q - lo]) for q in range(p, p + r))
        ]
        if not candidates:
            return None
        key = (lo, tuple(cells))
        if key in seen:
            first_seen = seen[key]
            return BlockingResult(candidates[0], ProvedByCycle(step - first_seen, first_seen))
        seen[key] = step
    return BlockingResult(candidates[0], HeldToHorizon(max_steps))
