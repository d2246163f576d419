"""The level-2 Pacman CA: the Pacman CA paired with a two-phase fruit clock.

A cell is a pair ``(p, q)``. The first coordinate runs the Pacman rule; the
second flips Cherry <-> Banana every step (Empty2 stays put), except that a
cherry under a keymaster, a ghost or an occupied door stays a cherry.
"""
from __future__ import annotations

import numpy as np

from .core import (
    Alphabet,
    ConfigSpec,
    Custom,
    DoublingDoors,
    EventuallyPeriodic,
    LocalRule,
    SpacetimeWindow,
    Symbol,
    as_codes,
    evolve_window,
    make_rule,
)
from .errors import NoCrossingFound
from .pacman import (
    DOOR,
    DOOR_GHOST,
    EMPTY,
    GHOST,
    KEYMASTER,
    PACMAN_ALPHABET,
    pacman_rule,
    quiescence_time,
)

EMPTY2, CHERRY, BANANA = range(3)
FRUIT_GLYPHS = ".cb"
FRUIT_NAMES = ("Empty2", "Cherry", "Banana")
_CHERRY_GLYPHS = "c!hkpd"
_BANANA_GLYPHS = "b:jmqe"

FROZEN = frozenset({(KEYMASTER, CHERRY), (DOOR_GHOST, CHERRY), (GHOST, CHERRY)})


def pair(p: int, q: int) -> int:
    return 3 * p + q


def first(code) -> np.ndarray | int:
    return code // 3


def second(code) -> np.ndarray | int:
    return code % 3


def _symbols():
    out = []
    for p in PACMAN_ALPHABET:
        for q in range(3):
            glyph = (p.glyph, _CHERRY_GLYPHS[p.code], _BANANA_GLYPHS[p.code])[q]
            out.append(Symbol(pair(p.code, q), f"({p.name},{FRUIT_NAMES[q]})", glyph,
                              f"({p.glyph}{FRUIT_GLYPHS[q]})"))
    return out


LEVEL2_ALPHABET = Alphabet(_symbols())


def fruit_step(p: int, q: int) -> int:
    """Second coordinate of the successor of a cell whose value is ``(p, q)``."""
    if q == EMPTY2:
        return EMPTY2
    if (p, q) in FROZEN:
        return CHERRY
    return BANANA if q == CHERRY else CHERRY


_RULE: LocalRule | None = None


def pacman2_rule() -> LocalRule:
    global _RULE
    if _RULE is None:
        base = pacman_rule()

        def local(l, c, r):
            return pair(base(first(l), first(c), first(r)), fruit_step(first(c), second(c)))

        _RULE = make_rule(LEVEL2_ALPHABET, -1, 1, local, name="pacman2")
    return _RULE


def project(spec: ConfigSpec, factor: int = 0) -> Custom:
    """The Pacman (``factor=0``) or fruit (``factor=1``) component of a level-2 spec."""
    split = first if factor == 0 else second
    alphabet = PACMAN_ALPHABET if factor == 0 else Alphabet.from_glyphs(FRUIT_GLYPHS, FRUIT_NAMES)
    return Custom(alphabet, lambda i: int(split(spec.at(i))),
                  vectorized=lambda idx: split(spec._eval_at(idx)).astype(np.uint8),
                  label=f"project{factor}({spec})")


def lift(spec: ConfigSpec, fruit: int = EMPTY2) -> Custom:
    """Pair a Pacman spec with a constant fruit coordinate."""
    return Custom(LEVEL2_ALPHABET, lambda i: pair(spec.at(i), fruit),
                  vectorized=lambda idx: (3 * spec._eval_at(idx) + fruit).astype(np.uint8),
                  label=f"lift({spec})")


def doubling_point2(insert=None) -> DoublingDoors:
    """The doubling point with every fruit coordinate Empty2."""
    return DoublingDoors(LEVEL2_ALPHABET, pair(DOOR, EMPTY2), pair(EMPTY, EMPTY2),
                         () if insert is None else insert)


def evolve_level2(spec: ConfigSpec, half_width: int, horizon: int) -> SpacetimeWindow:
    """Exact level-2 evolution on ``[-n, n] x [0, H]`` via the skew-product split.

    The Pacman coordinate is evolved on its own; the fruit of each certified
    cell then follows from that cell's own column. Same values as
    ``evolve_window(pacman2_rule(), ...)`` but cheap when fruit tails keep
    flipping. Trapezoid rows are not kept.
    """
    base = evolve_window(pacman_rule(), project(spec, 0), half_width, horizon, keep_rows=False)
    p = base.rect.astype(np.int64)
    q = np.empty_like(p)
    q[0] = second(spec.window(half_width).astype(np.int64))
    frozen = np.zeros(6, dtype=bool)
    frozen[[KEYMASTER, DOOR_GHOST, GHOST]] = True
    flip = np.array([EMPTY2, BANANA, CHERRY])
    for t in range(horizon):
        qt = q[t]
        q[t + 1] = np.where((qt == CHERRY) & frozen[p[t]], CHERRY, flip[qt])
    rect = (3 * p + q).astype(np.uint8)
    return SpacetimeWindow(pacman2_rule(), spec, half_width, horizon, rect, None)


def keymaster_arrival(x: ConfigSpec, y: ConfigSpec, limit: int, i: int = 0) -> int | None:
    """First time the Pacman coordinates of ``x`` and ``y`` differ at cell ``i``."""
    rule = pacman2_rule()
    wx = evolve_window(rule, x, abs(i), limit, keep_rows=False)
    wy = evolve_window(rule, y, abs(i), limit, keep_rows=False)
    hits = np.flatnonzero(first(wx.column(i)) != first(wy.column(i)))
    return int(hits[0]) if len(hits) else None


def _divergence_spec(w, gap: int, keymaster: bool) -> EventuallyPeriodic:
    o = pair(EMPTY, EMPTY2)
    tail = (pair(DOOR, EMPTY2),) + (o,) * gap + ((pair(KEYMASTER, EMPTY2),) if keymaster else ())
    return EventuallyPeriodic(LEVEL2_ALPHABET, (o,), tuple(w) + tail, (o,))


def cofinite_divergence_pair(w) -> tuple[EventuallyPeriodic, EventuallyPeriodic, int]:
    """Two points sharing the prefix ``w`` whose cell-0 orbits agree only finitely often.

    ``x = ...(.,.) . w (|,.) (.,.)^s (K,.) (.,.)...`` and ``y`` is ``x``
    without the keymaster. The keymaster is held back ``s`` cells, the time
    ``w`` needs to settle in ``y``, so it meets only doors and empty space on
    its way to cell 0. It crosses cell 0 at time ``N`` (see
    :func:`keymaster_arrival`); if the fruit there is
    a banana (case 2) the phases would re-synchronise, so one more empty
    cell is inserted before the keymaster. Returns ``(x, y, case)``.
    """
    w = tuple(int(c) for c in as_codes(w, LEVEL2_ALPHABET))
    if not w or w[0] != pair(DOOR, CHERRY):
        raise ValueError("w must start with (EmptyDoor, Cherry)")
    gap = quiescence_time(tuple(first(np.asarray(w))))
    limit = gap + 50 * (len(w) + 4) ** 2
    y = _divergence_spec(w, 0, keymaster=False)
    x = _divergence_spec(w, gap, keymaster=True)
    N = keymaster_arrival(x, y, limit)
    if N is None:
        raise NoCrossingFound(f"the keymaster never reaches cell 0 within {limit} steps")
    win = evolve_window(pacman2_rule(), x, 0, N, keep_rows=False)
    if win.value(N, 0) != pair(DOOR_GHOST, BANANA):
        return x, y, 1
    return _divergence_spec(w, gap + 1, keymaster=True), y, 2


def agreement_times(x: ConfigSpec, y: ConfigSpec, horizon: int, i: int = 0) -> np.ndarray:
    """Times ``t <= horizon`` with ``T_P^t x_i == T_P^t y_i``."""
    rule = pacman2_rule()
    wx = evolve_window(rule, x, abs(i), horizon, keep_rows=False)
    wy = evolve_window(rule, y, abs(i), horizon, keep_rows=False)
    return np.flatnonzero(wx.column(i) == wy.column(i))
