from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .configs import ConfigSpec
from .rule import LocalRule

# keep full trapezoid rows automatically below this many cells
_AUTO_KEEP_CELLS = 2_000_000


@dataclass(frozen=True, eq=False)
class SpacetimeWindow:
    """Exact values ``T^t x_i`` for ``|i| <= half_width``, ``0 <= t <= horizon``.

    ``rect[t, i + half_width]`` holds ``T^t x_i``. When ``rows`` is present,
    ``rows[t]`` covers the whole trapezoid row
    ``[-n - (H-t) r, n + (H-t) r]``.
    """

    rule: LocalRule
    base: ConfigSpec
    half_width: int
    horizon: int
    rect: np.ndarray
    rows: list | None = None

    @property
    def n(self) -> int:
        return self.half_width

    def row_extent(self, t: int) -> tuple[int, int]:
        reach = self.half_width + (self.horizon - t) * self.rule.radius
        return -reach, reach

    def value(self, t: int, i: int) -> int:
        if abs(i) <= self.half_width:
            return int(self.rect[t, i + self.half_width])
        if self.rows is not None:
            lo, hi = self.row_extent(t)
            if lo <= i <= hi:
                return int(self.rows[t][i - lo])
        raise IndexError(f"T^{t} x_{i} lies outside the computed region")

    def row(self, t: int) -> np.ndarray:
        return self.rect[t]

    def column(self, i: int) -> np.ndarray:
        return self.rect[:, i + self.half_width]

    def crop(self, lo: int, hi: int) -> np.ndarray:
        """Certified values for coordinates ``lo..hi`` (all times)."""
        n = self.half_width
        if lo < -n or hi > n or lo > hi:
            raise IndexError(f"[{lo}, {hi}] not inside [-{n}, {n}]")
        return self.rect[:, lo + n:hi + n + 1]

    def render(self, lo: int | None = None, hi: int | None = None, tokens: bool = False) -> list[str]:
        lo = -self.half_width if lo is None else lo
        hi = self.half_width if hi is None else hi
        a = self.rule.alphabet
        return [a.render(r, tokens) for r in self.crop(lo, hi)]

    def check_local_consistency(self) -> bool:
        """Re-derive every trapezoid row from its predecessor."""
        if self.rows is None:
            raise ValueError("window was built without trapezoid rows")
        from .rule import step_row

        return all(
            np.array_equal(step_row(self.rule, self.rows[t]), self.rows[t + 1])
            for t in range(self.horizon)
        )


def evolve_window(
    rule: LocalRule,
    spec: ConfigSpec,
    half_width: int,
    horizon: int,
    keep_rows: bool | None = None,
    backend: str | None = None,
) -> SpacetimeWindow:
    """Evolve ``spec`` exactly on ``[-n, n] x [0, H]``.

    Row 0 is read on ``[-n - H r, n + H r]``; each step the valid range
    shrinks by the radius on both sides, which makes the certified
    rectangle independent of anything outside. After the first step only
    cells next to a cell that just changed are recomputed, so quiet
    regions (empty space, door lattices, constant floods, the wake of a
    passing particle) cost nothing.
    """
    if half_width < 0 or horizon < 0:
        raise ValueError("half_width and horizon must be non-negative")
    r = rule.radius
    reach = half_width + horizon * r
    width = 2 * reach + 1
    if keep_rows is None:
        keep_rows = (horizon + 1) * width <= _AUTO_KEEP_CELLS
    buf = np.ascontiguousarray(spec.evaluate(-reach, reach), dtype=np.uint8).copy()
    rect, rows = _kernels.get(backend).evolve_band(
        rule.table, rule.nsym, rule.memory, rule.anticipation, r,
        buf, horizon, reach - half_width, 2 * half_width + 1, bool(keep_rows),
    )
    return SpacetimeWindow(rule, spec, half_width, horizon, rect, rows)


def evolve_trapezoid(rule: LocalRule, spec: ConfigSpec, half_width: int, horizon: int) -> SpacetimeWindow:
    """Reference evolution: every trapezoid cell, one table lookup at a time.

    Deliberately naive and independent of the kernels; used as the oracle
    for :func:`evolve_window`.
    """
    r = rule.radius
    reach = half_width + horizon * r
    row = [int(v) for v in spec.evaluate(-reach, reach)]
    rows = [np.array(row, dtype=np.uint8)]
    lead = r + rule.memory  # offset of a cell's neighborhood start in the previous row
    for _ in range(horizon):
        width = len(row) - 2 * r
        row = [rule(*row[k + lead:k + lead + rule.span]) for k in range(width)]
        rows.append(np.array(row, dtype=np.uint8))
    rect = np.stack([rw[(len(rw) - 1) // 2 - half_width:(len(rw) - 1) // 2 + half_width + 1] for rw in rows])
    return SpacetimeWindow(rule, spec, half_width, horizon, rect, rows)
