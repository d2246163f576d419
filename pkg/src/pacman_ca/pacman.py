"""The Pacman CA: six symbols, memory and anticipation 1.

Particles (ghosts, keymasters, pacmans, occupied doors) drift through
empty space; doors never move. Ghosts travel left, pacmans right, pacmans
eat ghosts, a ghost reaching a door turns into a pacman, a pacman
reaching a door turns into a keymaster, and only keymasters pass through
doors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    Alphabet,
    ConfigSpec,
    DoublingDoors,
    EventuallyPeriodic,
    LocalRule,
    SpacetimeWindow,
    Symbol,
    as_codes,
    evolve_window,
    make_rule,
)
from .errors import AmbiguousParentage, HorizonExceeded

EMPTY, DOOR, GHOST, KEYMASTER, PACMAN, DOOR_GHOST = range(6)

PACMAN_ALPHABET = Alphabet([
    Symbol(EMPTY, "EmptySpace", "."),
    Symbol(DOOR, "EmptyDoor", "|"),
    Symbol(GHOST, "Ghost", "g"),
    Symbol(KEYMASTER, "KeymasterGhost", "K"),
    Symbol(PACMAN, "Pacman", "P"),
    Symbol(DOOR_GHOST, "DoorWithGhost", "D"),
])

DOORS = frozenset({DOOR, DOOR_GHOST})
PARTICLES = frozenset({GHOST, KEYMASTER, PACMAN, DOOR_GHOST})
QUIET = frozenset({EMPTY, DOOR})
_FREE = frozenset({EMPTY, GHOST, KEYMASTER})  # cells a ghost can drift through
_OPEN = frozenset({EMPTY, KEYMASTER})


def displayed_cases(l: int, c: int, r: int) -> list[int]:
    """Every output whose defining condition holds for ``(l, c, r)``.

    A literal transcription of the case analysis; the rule table is built
    from it and rejects overlaps.
    """
    out = []
    if (l in _FREE and ((c in _FREE and r in (EMPTY, DOOR, PACMAN)) or (c == PACMAN and r not in DOORS))) or (
        l in DOORS and ((c in _OPEN and r in (EMPTY, DOOR, PACMAN)) or (c == PACMAN and r not in DOORS))
    ):
        out.append(EMPTY)
    if c in DOORS and r not in (KEYMASTER, DOOR_GHOST):
        out.append(DOOR)
    if (l in _FREE and c in _FREE and r in (GHOST, DOOR_GHOST)) or (l in DOORS and c in _OPEN and r == DOOR_GHOST):
        out.append(GHOST)
    if (
        (r == KEYMASTER and ((l in _FREE and c in _FREE) or (l in DOORS and c in _OPEN)))
        or (l == PACMAN and c not in DOORS and r in DOORS)
        or (c == PACMAN and r in DOORS)
    ):
        out.append(KEYMASTER)
    if (l == DOOR and ((c in _OPEN and r == GHOST) or c == GHOST)) or (
        l == PACMAN and c not in DOORS and r not in DOORS
    ):
        out.append(PACMAN)
    if c in DOORS and r in (KEYMASTER, DOOR_GHOST):
        out.append(DOOR_GHOST)
    return out


def _gap_fill(l: int, c: int, r: int) -> int:
    # The pacman case names only the empty door on the left; a ghost meeting
    # an occupied door converts the same way (otherwise these cells have no
    # defined successor).
    if l == DOOR_GHOST and (c == GHOST or (c in _OPEN and r == GHOST)):
        return PACMAN
    raise ValueError(f"no case covers {PACMAN_ALPHABET.render((l, c, r))!r}")


def table_gaps() -> list[tuple[int, int, int]]:
    """Neighborhoods left undefined by the displayed cases."""
    return [(l, c, r) for l in range(6) for c in range(6) for r in range(6) if not displayed_cases(l, c, r)]


def _local(l: int, c: int, r: int) -> int:
    outs = displayed_cases(l, c, r)
    if len(set(outs)) > 1:
        raise ValueError(f"overlapping cases at {PACMAN_ALPHABET.render((l, c, r))!r}: {outs}")
    return outs[0] if outs else _gap_fill(l, c, r)


_RULE: LocalRule | None = None


def pacman_rule() -> LocalRule:
    global _RULE
    if _RULE is None:
        _RULE = make_rule(PACMAN_ALPHABET, -1, 1, _local, name="pacman")
    return _RULE


def particle_projection(word) -> np.ndarray:
    """1 for ghost, keymaster, pacman and occupied door; 0 otherwise."""
    codes = as_codes(word, PACMAN_ALPHABET)
    return np.isin(codes, list(PARTICLES)).astype(np.uint8)


def parent_offset(l: int, c: int, r: int) -> int | None:
    """Where the particle at a cell came from, given its previous neighborhood.

    Returns -1, 0 or +1 relative to the cell, or ``None`` if the new value
    is not a particle. When several particles meet, the eater (or the
    particle already in place) continues.
    """
    out = pacman_rule()(l, c, r)
    if out in (GHOST, DOOR_GHOST):
        return 1
    if out == KEYMASTER:
        if r == KEYMASTER and l != PACMAN and c != PACMAN:
            return 1
        return 0 if c == PACMAN else -1
    if out == PACMAN:
        if l == PACMAN:
            return -1
        return 0 if c == GHOST else 1
    return None


@dataclass
class ParticleTrajectory:
    birth_position: int
    path: list = field(default_factory=list)  # (time, position)
    alive_at_horizon: bool = False
    truncated: bool = False

    @property
    def positions(self) -> list[int]:
        return [p for _, p in self.path]

    def max_displacement(self) -> int:
        pos = self.positions
        return max((abs(b - a) for a, b in zip(pos, pos[1:])), default=0)

    def max_revisits(self) -> int:
        pos = self.positions
        return max((pos.count(p) for p in set(pos)), default=0)


def trace_particles(window: SpacetimeWindow) -> list[ParticleTrajectory]:
    """Follow every time-0 particle of the certified region ``[-n, n]``.

    Each particle at ``t + 1`` is matched to one parent at ``t`` via
    :func:`parent_offset`. The window must hold trapezoid rows, since
    matching reads one cell past the certified edge. A particle that steps
    outside ``[-n, n]`` ends there with ``truncated`` set.
    """
    if window.rows is None:
        raise ValueError("trace_particles needs a window built with keep_rows=True")
    n, H = window.half_width, window.horizon
    value = window.value

    tracks = []
    active = {}
    for i in range(-n, n + 1):
        if value(0, i) in PARTICLES:
            track = ParticleTrajectory(i, [(0, i)])
            tracks.append(track)
            active[i] = track

    for t in range(H):
        if not active:
            break
        ext = 1 if t + 1 < H else 0
        children: dict[int, int] = {}
        for i in range(-n - ext, n + ext + 1):
            if value(t + 1, i) not in PARTICLES:
                continue
            parent = i + parent_offset(value(t, i - 1), value(t, i), value(t, i + 1))
            if value(t, parent) not in PARTICLES:
                raise AmbiguousParentage(f"T^{t + 1} x_{i} has no particle parent")
            if parent in children:
                raise AmbiguousParentage(f"particle at time {t}, cell {parent} has two successors")
            children[parent] = i
        moved = {}
        for pos, track in active.items():
            child = children.get(pos)
            if child is None:
                # at the last step cells past the edge are not available
                track.truncated = not ext and abs(pos) == n
                continue
            if abs(child) > n:
                track.truncated = True
                continue
            track.path.append((t + 1, child))
            moved[child] = track
        active = moved

    for track in active.values():
        track.alive_at_horizon = True
    return tracks


def particle_count(window: SpacetimeWindow) -> np.ndarray:
    """Number of particles in the certified region at each time."""
    return np.isin(window.rect, list(PARTICLES)).sum(axis=1)


# --- named configurations -------------------------------------------------

def keymaster_flood(m: int) -> EventuallyPeriodic:
    """``...0 . |0^m| KKK...``: a two-door filter fed by keymasters."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), (DOOR,) + (EMPTY,) * m + (DOOR,), (KEYMASTER,))


def doubling_point(insert=None) -> DoublingDoors:
    """Doors with gaps 1, 2, 4, ... on both sides of the origin."""
    return DoublingDoors(PACMAN_ALPHABET, DOOR, EMPTY, () if insert is None else insert)


def door_word(gaps) -> tuple[int, ...]:
    """``| 0^g0 | 0^g1 | ... | 0^gk |``."""
    word = [DOOR]
    for g in gaps:
        word += [EMPTY] * g + [DOOR]
    return tuple(word)


def crossing_times(m: int, horizon: int) -> list[int]:
    """Times at which the left door of ``keymaster_flood(m)`` holds a ghost."""
    win = evolve_window(pacman_rule(), keymaster_flood(m), 0, horizon, keep_rows=False)
    return [int(t) for t in np.flatnonzero(win.column(0) == DOOR_GHOST)]


def door_return_time(m: int) -> int:
    """Least ``N >= 1`` with ``T^N x_[0, m-1] = w`` for ``x = ...0 . w K 0...``,
    ``w = | 0^(m-2) |`` (``w = |`` when ``m = 1``)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    w = (DOOR,) if m == 1 else door_word([m - 2])
    spec = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), w + (KEYMASTER,), (EMPTY,))
    limit = 10 * m
    # coordinates 0..m-1 sit inside a window centred on 0 of half-width m
    win = evolve_window(pacman_rule(), spec, m, limit, keep_rows=False)
    block = win.crop(0, m - 1)
    target = np.asarray(w, dtype=np.uint8)
    for t in range(1, limit + 1):
        if np.array_equal(block[t], target):
            return t
    raise HorizonExceeded(f"no return within {limit} steps for m={m}")


def quiescence_time(w, probe_width: int | None = None) -> int:
    """Least ``N`` after which cells ``0..|w|`` of ``...0 . w | 0...`` hold
    only empty space and empty doors, re-verified for ``4(|w|+2)`` steps."""
    codes = tuple(int(c) for c in as_codes(w, PACMAN_ALPHABET))
    k = len(codes)
    n = max(k, probe_width or 0)
    margin = 4 * (k + 2)
    limit = 50 * (k + 2) ** 2
    spec = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), codes + (DOOR,), (EMPTY,))
    win = evolve_window(pacman_rule(), spec, n, limit, keep_rows=False)
    quiet = np.isin(win.crop(0, k), list(QUIET)).all(axis=1)
    # run[t] = length of the quiet streak starting at t
    run = np.zeros(limit + 2, dtype=np.int64)
    for t in range(limit, -1, -1):
        run[t] = run[t + 1] + 1 if quiet[t] else 0
    for t in range(0, limit - margin + 1):
        if run[t] >= margin + 1:
            return t
    raise HorizonExceeded(f"cells 0..{k} not quiet within {limit} steps")


def sensitivity_pair(w) -> tuple[EventuallyPeriodic, EventuallyPeriodic]:
    """``x = ...0 . w 0...`` and ``y = ...0 . w | KKK...``."""
    codes = tuple(int(c) for c in as_codes(w, PACMAN_ALPHABET))
    if not codes:
        raise ValueError("w must be non-empty")
    x = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), codes, (EMPTY,))
    y = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), codes + (DOOR,), (KEYMASTER,))
    return x, y


def disagreement_times(x: ConfigSpec, y: ConfigSpec, horizon: int, i: int = 0) -> np.ndarray:
    """Times ``t <= horizon`` with ``T^t x_i != T^t y_i``."""
    rule = pacman_rule()
    n = abs(i)
    wx = evolve_window(rule, x, n, horizon, keep_rows=False)
    wy = evolve_window(rule, y, n, horizon, keep_rows=False)
    return np.flatnonzero(wx.column(i) != wy.column(i))
