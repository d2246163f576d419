"""Cantor metric, divergence sets, upper densities and mean divergence.

Limits are replaced by finite-horizon statistics: the upper density of a
set ``S`` up to ``H`` is the largest prefix density ``|S & [0, n)| / n``
over the tail window ``ceil(H/2) <= n <= H``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigSpec, LocalRule, SpacetimeWindow, constant, evolve_window, splice
from .core.configs import Custom
from .errors import AgreementTooShort


@dataclass(frozen=True)
class TimeSet:
    """A set of times within ``[0, horizon]``."""

    times: np.ndarray
    horizon: int

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.int64)
        if t.size and (np.any(np.diff(t) <= 0) or t[0] < 0 or t[-1] > self.horizon):
            raise ValueError("times must be strictly increasing within [0, horizon]")
        object.__setattr__(self, "times", t)

    @classmethod
    def from_mask(cls, mask) -> TimeSet:
        mask = np.asarray(mask, dtype=bool)
        return cls(np.flatnonzero(mask), len(mask) - 1)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.horizon + 1, dtype=bool)
        out[self.times] = True
        return out

    def __len__(self):
        return int(self.times.size)

    def __iter__(self):
        return iter(self.times.tolist())

    def __contains__(self, t):
        return bool(np.isin(t, self.times))

    def __or__(self, other: TimeSet) -> TimeSet:
        return TimeSet(np.union1d(self.times, other.times), max(self.horizon, other.horizon))


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    horizon: int
    window_start: int


def cantor_distance(rowx, rowy, half_width: int) -> float:
    """``2^-i`` for the least ``|j| <= W`` where the rows differ, else 0.

    Both rows cover coordinates ``-W..W``. A zero result means the true
    distance is below ``2^-W``.
    """
    rowx, rowy = np.asarray(rowx), np.asarray(rowy)
    if rowx.shape != (2 * half_width + 1,) or rowy.shape != rowx.shape:
        raise ValueError("rows must cover coordinates -W..W")
    return float(orbit_distances(rowx[None, :], rowy[None, :])[0])


def orbit_distances(rect_x: np.ndarray, rect_y: np.ndarray) -> np.ndarray:
    """Row-by-row Cantor distance of two ``(H+1, 2W+1)`` windows."""
    W = (rect_x.shape[1] - 1) // 2
    absj = np.abs(np.arange(-W, W + 1))
    first = np.where(rect_x != rect_y, absj, W + 1).min(axis=1)
    return np.where(first <= W, np.exp2(-first.astype(float)), 0.0)


@dataclass(frozen=True)
class DivergenceSets:
    """``S_j`` together with its one-sided parts ``S_+j`` and ``S_-j``."""

    j: int
    both: TimeSet
    plus: TimeSet
    minus: TimeSet


def divergence_sets_from_windows(wx: SpacetimeWindow, wy: SpacetimeWindow, j: int) -> DivergenceSets:
    plus = wx.column(j) != wy.column(j)
    minus = wx.column(-j) != wy.column(-j)
    return DivergenceSets(j, TimeSet.from_mask(plus | minus), TimeSet.from_mask(plus), TimeSet.from_mask(minus))


Evolver = Callable[[ConfigSpec, int, int], SpacetimeWindow]


def _evolver(rule: LocalRule, evolve: Evolver | None) -> Evolver:
    if evolve is not None:
        return evolve
    return lambda spec, n, H: evolve_window(rule, spec, n, H, keep_rows=False)


def divergence_sets(rule: LocalRule, x: ConfigSpec, y: ConfigSpec, j: int, horizon: int,
                    evolve: Evolver | None = None) -> DivergenceSets:
    if horizon < 1 or j < 0:
        raise ValueError("need horizon >= 1 and j >= 0")
    ev = _evolver(rule, evolve)
    return divergence_sets_from_windows(ev(x, j, horizon), ev(y, j, horizon), j)


def divergence_set(rule: LocalRule, x: ConfigSpec, y: ConfigSpec, j: int, horizon: int,
                   evolve: Evolver | None = None) -> TimeSet:
    """Times ``i <= H`` at which the orbits differ at ``j`` or at ``-j``."""
    return divergence_sets(rule, x, y, j, horizon, evolve).both


def _tail_start(horizon: int) -> int:
    return max(1, math.ceil(horizon / 2))


def tail_max(running: np.ndarray, horizon: int) -> float:
    """Largest ``running[n]`` for ``n`` in the tail window of ``[0, H]``."""
    return float(running[_tail_start(horizon):horizon + 1].max())


def upper_density(s: TimeSet, window_start: int | None = None) -> DensityEstimate:
    H = s.horizon
    if H < 2:
        raise ValueError("horizon must be >= 2")
    start = _tail_start(H) if window_start is None else window_start
    if not 1 <= start <= H:
        raise ValueError("window_start must lie in [1, horizon]")
    # prefix[n] = |S & [0, n)|
    prefix = np.concatenate(([0], np.cumsum(s.mask())))
    n = np.arange(start, H + 1)
    return DensityEstimate(float((prefix[n] / n).max()), H, start)


@dataclass(frozen=True)
class MeanDivergence:
    value: float
    bias: float  # truncation error bound 2^-W
    horizon: int
    half_width: int


def mean_of_distances(d: np.ndarray) -> float:
    """Tail-window maximum of the running means ``sum(d[:n+1]) / (n+1)``."""
    H = len(d) - 1
    running = np.cumsum(d) / np.arange(1, H + 2)
    return tail_max(running, H)


def mean_divergence(rule: LocalRule, x: ConfigSpec, y: ConfigSpec, horizon: int,
                    half_width: int = 16, evolve: Evolver | None = None) -> MeanDivergence:
    if horizon < 1 or half_width < 1:
        raise ValueError("need horizon >= 1 and half_width >= 1")
    ev = _evolver(rule, evolve)
    wx, wy = ev(x, half_width, horizon), ev(y, half_width, horizon)
    value = mean_of_distances(orbit_distances(wx.rect, wy.rect))
    return MeanDivergence(value, 2.0 ** -half_width, horizon, half_width)


def agreement_radius(m: int) -> int:
    """``m + 3 + sum_{l=0}^{m+3} 2^l``, the radius a perturbation must respect."""
    return m + 3 + (2 ** (m + 4) - 1)


@dataclass
class ProbeRow:
    perturbation_id: int
    j: int
    density: float
    threshold: float
    passed: bool


@dataclass
class ProbeReport:
    m: int
    horizon: int
    threshold: float
    rows: list[ProbeRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def max_density(self) -> float:
        return max((r.density for r in self.rows), default=0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["perturbation_id", "j", "density", "threshold", "pass"])
        for r in self.rows:
            w.writerow([r.perturbation_id, r.j, f"{r.density:.8f}", f"{r.threshold:.8f}", int(r.passed)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "m": self.m,
            "horizon": self.horizon,
            "threshold": self.threshold,
            "perturbations": len({r.perturbation_id for r in self.rows}),
            "max_density": self.max_density,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def me_point_probe(rule: LocalRule, x: ConfigSpec, m: int, perturbations, horizon: int,
                   evolve: Evolver | None = None, workers: int = 1) -> ProbeReport:
    """Upper densities of ``S_j``, ``0 <= j <= m+1``, between ``x`` and each perturbation.

    Passes when every density is at most ``2^-(m+2) + 4/H``. Each
    perturbation must agree with ``x`` on ``[-m', m']``, ``m' = agreement_radius(m)``.
    """
    radius = agreement_radius(m)
    ref = x.evaluate(-radius, radius)
    for k, y in enumerate(perturbations):
        if not np.array_equal(y.evaluate(-radius, radius), ref):
            raise AgreementTooShort(f"perturbation {k} differs from x within [-{radius}, {radius}]")
    threshold = 2.0 ** -(m + 2) + 4.0 / horizon
    report = ProbeReport(m, horizon, threshold)
    ev = _evolver(rule, evolve)
    wx = ev(x, m + 1, horizon)

    def densities(y):
        wy = ev(y, m + 1, horizon)
        return [upper_density(divergence_sets_from_windows(wx, wy, j).both).value for j in range(m + 2)]

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            table = list(pool.map(densities, perturbations))
    else:
        table = [densities(y) for y in perturbations]
    for k, row in enumerate(table):
        for j, d in enumerate(row):
            report.rows.append(ProbeRow(k, j, d, threshold, d <= threshold))
    return report


def _tail(alphabet, word, fill) -> Custom:
    """``word`` read outward from the agreement edge, then ``fill`` forever."""
    word = np.asarray(word, dtype=np.uint8)
    k = len(word)

    def vec(idx):
        idx = np.asarray(idx)
        out = np.full(idx.shape, fill, dtype=np.uint8)
        near = idx < k
        out[near] = word[idx[near]]
        return out

    return Custom(alphabet, lambda i: int(vec(np.array([i]))[0]), vectorized=vec)


def _outward(tail: Custom, radius: int, side: int) -> Custom:
    # coordinate radius+1+d (right) or -(radius+1+d) (left) reads tail at d
    if side > 0:
        return Custom(tail.alphabet, lambda i: tail.at(i - radius - 1),
                      vectorized=lambda idx: tail._eval_at(idx - radius - 1))
    return Custom(tail.alphabet, lambda i: tail.at(-i - radius - 1),
                  vectorized=lambda idx: tail._eval_at(-idx - radius - 1))


def perturb(x: ConfigSpec, radius: int, left: ConfigSpec | None = None,
            right: ConfigSpec | None = None, label: str = "perturbation") -> Custom:
    """``x`` on ``[-radius, radius]``; ``left``/``right`` beyond it."""
    return splice(x, -radius, radius, left=left, right=right, label=label)


def _symbol(alphabet, name: str) -> int:
    for candidate in (name, f"({name},Empty2)"):
        try:
            return alphabet.code(candidate)
        except KeyError:
            pass
    raise KeyError(f"alphabet has no {name} symbol")


def default_perturbations(x: ConfigSpec, m: int, keymaster: int | None = None, door: int | None = None,
                          seed: int = 0, n_random: int = 20) -> list[Custom]:
    """Adversarial perturbations of ``x`` agreeing on ``[-m', m']``.

    Keymaster floods and door lattices on either side or both, then
    ``n_random`` points whose tails are a random 64-cell word followed by
    a random constant symbol. ``keymaster`` and ``door`` default to the
    alphabet's KeymasterGhost and EmptyDoor symbols.
    """
    a = x.alphabet
    keymaster = _symbol(a, "KeymasterGhost") if keymaster is None else keymaster
    door = _symbol(a, "EmptyDoor") if door is None else door
    radius = agreement_radius(m)
    flood, doors = constant(a, keymaster), constant(a, door)
    out = [
        perturb(x, radius, right=flood, label="keymaster flood right"),
        perturb(x, radius, left=flood, label="keymaster flood left"),
        perturb(x, radius, left=flood, right=flood, label="keymaster flood both"),
        perturb(x, radius, right=doors, label="doors right"),
        perturb(x, radius, left=doors, right=doors, label="doors both"),
    ]
    out.extend(random_perturbations(x, m, seed=seed, count=n_random))
    return out


def random_perturbations(x: ConfigSpec, m: int, seed: int = 0, count: int = 20,
                         word_length: int = 64) -> list[Custom]:
    rng = np.random.default_rng(seed)
    a = x.alphabet
    radius = agreement_radius(m)
    out = []
    for k in range(count):
        sides = []
        for side in (-1, 1):
            word = rng.integers(0, len(a), word_length)
            fill = int(rng.integers(0, len(a)))
            sides.append(_outward(_tail(a, word, fill), radius, side))
        out.append(perturb(x, radius, left=sides[0], right=sides[1], label=f"random tail {k}"))
    return out
