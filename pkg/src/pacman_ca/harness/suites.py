"""Registered verification suites.

Every suite is a function ``(rng, params) -> list[Check]``; randomness
comes only from ``rng``, which is seeded from the report seed, so a suite
run is reproducible byte for byte (timings aside).
"""
from __future__ import annotations

import itertools
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from .. import analysis
from ..core import EventuallyPeriodic, evolve_window, find_blocking_column, identity_rule, shift_rule
from ..errors import UnknownSuite
from ..level2 import (
    CHERRY,
    LEVEL2_ALPHABET,
    agreement_times,
    cofinite_divergence_pair,
    doubling_point2,
    evolve_level2,
    first,
    keymaster_arrival,
    pacman2_rule,
    pair,
    project,
)
from ..pacman import (
    DOOR,
    DOOR_GHOST,
    DOORS,
    EMPTY,
    GHOST,
    KEYMASTER,
    PACMAN,
    PACMAN_ALPHABET,
    PARTICLES,
    QUIET,
    crossing_times,
    displayed_cases,
    disagreement_times,
    door_return_time,
    door_word,
    doubling_point,
    keymaster_flood,
    pacman_rule,
    particle_count,
    quiescence_time,
    sensitivity_pair,
    table_gaps,
    trace_particles,
)
from .grammar import parse_config
from .report import Check, VerificationReport, timed_check

Suite = Callable[[np.random.Generator, dict], list[Check]]
SUITES: dict[str, Suite] = {}
DEFAULTS: dict[str, dict] = {}

# door-return and crossing values below the range of the closed forms,
# recorded from exact evolution
SMALL_DOOR_RETURN = {1: 2, 2: 3, 3: 6}
ZERO_GAP_CROSSINGS = (2, 1)  # (first crossing, period) for m = 0


def suite(name: str, **defaults):
    def register(fn: Suite) -> Suite:
        SUITES[name] = fn
        DEFAULTS[name] = defaults
        return fn
    return register


def run_suite(name: str, seed: int = 0, **params) -> VerificationReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    merged = {**DEFAULTS[name], **{k: v for k, v in params.items() if v is not None}}
    rng = np.random.default_rng(seed)
    return VerificationReport(name, seed, SUITES[name](rng, merged))


def _random_word(rng, length, alphabet_size=6) -> tuple[int, ...]:
    return tuple(int(v) for v in rng.integers(0, alphabet_size, length))


def _random_tail(rng, length=40) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A random word followed by a random constant symbol."""
    return _random_word(rng, length), (int(rng.integers(0, 6)),)


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


# --- rule table -----------------------------------------------------------

@suite("rule-table")
def _rule_table(rng, p):
    rule = pacman_rule()
    triples = list(itertools.product(range(6), repeat=3))

    def no_creation():
        bad = [t for t in triples if rule(*t) in PARTICLES and not any(s in PARTICLES for s in t)]
        return not bad, {"neighborhoods": len(triples), "violations": bad}

    def door_persistence():
        bad = [t for t in triples if (t[1] in DOORS) != (rule(*t) in DOORS)]
        return not bad, {"neighborhoods": len(triples), "violations": bad}

    def exclusive_cases():
        overlaps = [t for t in triples if len(set(displayed_cases(*t))) > 1]
        gaps = table_gaps()
        filled = {PACMAN_ALPHABET.render(t): PACMAN_ALPHABET.render([rule(*t)]) for t in gaps}
        return not overlaps, {"overlaps": overlaps, "uncovered": filled}

    def free_motion():
        drift = rule(EMPTY, EMPTY, GHOST) == GHOST and rule(EMPTY, EMPTY, KEYMASTER) == KEYMASTER
        win = evolve_window(rule, EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), (PACMAN,), (EMPTY,)), 100, 100)
        path = [int(np.flatnonzero(win.row(t) == PACMAN)[0]) - 100 for t in range(101)]
        return drift and path == list(range(101)), {"pacman_final_position": path[-1]}

    return [
        timed_check("no-creation", "particles only arise from particles", no_creation),
        timed_check("door-persistence", "a door always stays fixed", door_persistence),
        timed_check("exclusive-cases", "the displayed cases never overlap", exclusive_cases),
        timed_check("free-motion", "ghosts and keymasters drift left, a lone pacman right", free_motion),
    ]


# --- golden diagrams ------------------------------------------------------

GOLDEN = ("flood_filter.txt", "ghost_pacman_mix.txt")


def load_golden(name: str) -> tuple[dict[str, str], list[str]]:
    text = resources.files("pacman_ca.harness").joinpath("golden").joinpath(name).read_text()
    header, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                header[key.strip()] = value.strip()
        elif line.strip():
            rows.append(line.strip())
    return header, rows


def golden_columns(header: dict) -> tuple[int, int]:
    lo, hi = header["columns"].split()[0].split("..")
    return int(lo), int(hi)


@suite("examples")
def _examples(rng, p):
    checks = []
    for name in GOLDEN:
        def compare(name=name):
            header, expected = load_golden(name)
            lo, hi = golden_columns(header)
            steps = int(header["steps"])
            win = evolve_window(pacman_rule(), parse_config(header["config"]), max(-lo, hi), steps)
            got = win.render(lo, hi)
            wrong = [t for t, (a, b) in enumerate(zip(got, expected)) if a != b]
            return got == expected, {"rows": len(expected), "mismatched_rows": wrong}
        checks.append(timed_check(name.removesuffix(".txt"), "displayed space-time diagram", compare))
    return checks


# --- door return and crossings --------------------------------------------

@suite("door-return", m=list(range(4, 41)))
def _door_return(rng, p):
    checks = []
    for m in p["m"]:
        def check(m=m):
            got = door_return_time(m)
            want = 3 * m - 5 if m >= 4 else SMALL_DOOR_RETURN[m]
            return got == want, {"m": m, "N": got, "expected": want}
        anchor = "door word returns after 3m-5 steps" if m >= 4 else "small-m return time (recorded)"
        checks.append(timed_check(f"door-return-m{m}", anchor, check))
    return checks


def expected_crossings(m: int, horizon: int) -> list[int]:
    if m >= 2:
        start, period = 3 * m, 2 * m - 1
    elif m == 1:
        start, period = 1, 3
    else:
        start, period = ZERO_GAP_CROSSINGS
    return list(range(start, horizon + 1, period))


@suite("crossing", m=list(range(2, 13)), horizon=600)
def _crossing(rng, p):
    H = p["horizon"]
    checks = []
    for m in p["m"]:
        def check(m=m):
            got = crossing_times(m, H)
            want = expected_crossings(m, H)
            win = evolve_window(pacman_rule(), keymaster_flood(m), 0, H)
            col = win.column(0)
            others_door = bool(np.all(np.delete(col[1:], np.array(got, dtype=int) - 1) == DOOR))
            return got == want and others_door, {
                "m": m, "first": got[:3], "expected_first": want[:3],
                "count": len(got), "expected_count": len(want), "door_between": others_door,
            }
        if m >= 2:
            anchor = "crossings at 3m + (2m-1)k"
        elif m == 1:
            anchor = "crossings at 1 + 3k"
        else:
            anchor = "m = 0 crossings (recorded)"
        checks.append(timed_check(f"crossing-m{m}", anchor, check))
    return checks


# --- gap laws -------------------------------------------------------------

def door_ghost_times(spec, cell: int, horizon: int) -> np.ndarray:
    win = evolve_window(pacman_rule(), spec, abs(cell), horizon, keep_rows=False)
    return np.flatnonzero(win.column(cell) == DOOR_GHOST)


@suite("gap", m=list(range(2, 9)), tails=50, horizon=600)
def _gap(rng, p):
    checks = []
    for m in p["m"]:
        tails = [_random_tail(rng) for _ in range(p["tails"])]

        def check(m=m, tails=tails):
            worst, violations = None, 0
            for v, fill in tails:
                x = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), door_word([m]) + v, fill)
                ts = door_ghost_times(x, 0, p["horizon"])
                ts = ts[ts >= 3 * m]
                if len(ts) > 1:
                    d = int(np.diff(ts).min())
                    worst = d if worst is None else min(worst, d)
                    violations += d < 2 * m - 1
            return violations == 0, {"m": m, "bound": 2 * m - 1, "smallest_gap": worst, "violations": violations}
        checks.append(timed_check(f"gap-m{m}", "crossings after 3m are at least 2m-1 apart", check))
    return checks


@suite("multi-door-gap", samples=200, horizon=600)
def _multi_door_gap(rng, p):
    samples = []
    for _ in range(p["samples"]):
        n = int(rng.integers(0, 4))
        gaps = [int(v) for v in rng.integers(0, 7, n + 1)]
        samples.append((gaps, _random_tail(rng)))

    def check():
        violations, tightest = [], {}
        for gaps, (v, fill) in samples:
            word = door_word(gaps)
            x = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), word + v, fill)
            win = evolve_window(pacman_rule(), x, len(word), p["horizon"], keep_rows=False)
            dn = gaps[-1]
            bound = 2 * (dn - 1) if dn >= 2 else 2 * dn
            for j in [i for i, s in enumerate(word) if s == DOOR][:-1]:
                ts = np.flatnonzero(win.column(j) == DOOR_GHOST)
                if len(ts) > 1:
                    d = int(np.diff(ts).min())
                    tightest[dn] = min(tightest.get(dn, d), d)
                    if d <= bound:
                        violations.append({"gaps": gaps, "door": j, "gap": d})
        return not violations, {"samples": len(samples), "violations": violations,
                                "smallest_gap_by_last_gap": dict(sorted(tightest.items()))}

    return [timed_check("multi-door-gap", "crossings at inner doors are more than 2(d_n - 1) apart", check)]


# --- particles ------------------------------------------------------------

@suite("trajectory", configs=100, horizon=80)
def _trajectory(rng, p):
    words = [_random_word(rng, int(rng.integers(1, 16))) for _ in range(p["configs"])]

    def check():
        worst_step, worst_revisits, increases, traced = 0, 0, 0, 0
        for w in words:
            spec = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), w, (EMPTY,))
            win = evolve_window(pacman_rule(), spec, len(w) + p["horizon"], p["horizon"], keep_rows=True)
            for tr in trace_particles(win):
                traced += 1
                worst_step = max(worst_step, tr.max_displacement())
                worst_revisits = max(worst_revisits, tr.max_revisits())
            increases += int(np.sum(np.diff(particle_count(win)) > 0))
        ok = worst_step <= 1 and worst_revisits <= 3 and increases == 0
        return ok, {"configs": len(words), "particles": traced, "max_step": worst_step,
                    "max_visits_per_cell": worst_revisits, "count_increases": increases}

    return [timed_check("trajectory", "particles move at most one cell and visit a cell at most three times", check)]


@suite("flux", samples=30, horizon=2000)
def _flux(rng, p):
    samples = [(int(rng.integers(1, 7)), _random_tail(rng)) for _ in range(p["samples"])]

    def check():
        H = p["horizon"]
        slack = 3.0 / H
        worst = None
        for d, (v, fill) in samples:
            word = door_word([d])
            x = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), word, (EMPTY,))
            y = EventuallyPeriodic(PACMAN_ALPHABET, (EMPTY,), word + v, fill)
            wx = evolve_window(pacman_rule(), x, d + 1, H, keep_rows=False)
            wy = evolve_window(pacman_rule(), y, d + 1, H, keep_rows=False)

            def plus(i):
                return analysis.upper_density(analysis.divergence_sets_from_windows(wx, wy, i).plus).value

            edge = plus(d + 1)
            for i in range(1, d + 1):
                margin = 3 * edge + slack - plus(i)
                worst = margin if worst is None else min(worst, margin)
        return worst is None or worst >= 0, {"samples": len(samples), "smallest_margin": worst}

    return [timed_check("flux", "inner divergence density is at most three times the door's", check)]


# --- sensitivity and quiescence --------------------------------------------

@suite("sensitivity", words=20, horizon=5000, max_length=6)
def _sensitivity(rng, p):
    H = p["horizon"]
    words = [_random_word(rng, int(rng.integers(1, p["max_length"] + 1))) for _ in range(p["words"])]
    checks = []
    for k, w in enumerate(words):
        def check(w=w):
            x, y = sensitivity_pair(w)
            count = len(disagreement_times(x, y, H))
            bound = H / (2 * len(w) + 12)
            return count > bound, {"w": PACMAN_ALPHABET.render(w), "count": count, "bound": bound}
        checks.append(timed_check(f"sensitivity-{k}", "orbits of a sensitivity pair differ at 0 infinitely often", check))
    return checks


@suite("quiescence", words=20, max_length=8)
def _quiescence(rng, p):
    def example_center():
        # the last displayed row (t = 11) still has the keymaster inside the
        # door at 0; cells 0..5 are quiet from t = 12 on
        spec = parse_config(".*|..gP.|K*.")
        win = evolve_window(pacman_rule(), spec, 9, 60)
        quiet = np.isin(win.crop(0, 5), list(QUIET)).all(axis=1)
        settle = int(np.flatnonzero(~quiet)[-1]) + 1
        return settle == 12, {"row_11": PACMAN_ALPHABET.render(win.crop(0, 5)[11]), "quiet_from": settle}

    def recorded():
        got = {"": quiescence_time(""), "gP": quiescence_time("gP")}
        return got == {"": 0, "gP": 3}, got

    words = [_random_word(rng, int(rng.integers(1, p["max_length"] + 1))) for _ in range(p["words"])]

    def random_words():
        times = {PACMAN_ALPHABET.render(w): quiescence_time(w) for w in words}
        return True, {"times": times}

    return [
        timed_check("example-settles", "cells 0..5 of the ghost/pacman diagram settle right after the last displayed row", example_center),
        timed_check("recorded-values", "quiescence times (recorded)", recorded),
        timed_check("random-words", "every word between a door and empty space settles", random_words),
    ]


# --- mean equicontinuity probe ----------------------------------------------

@suite("me-point", m=[0, 1], horizon=100_000, workers=4)
def _me_point(rng, p):
    checks = []
    seed = int(rng.integers(0, 2**31))
    for m in p["m"]:
        def check(m=m):
            x = doubling_point()
            perts = analysis.default_perturbations(x, m, seed=seed)
            report = analysis.me_point_probe(pacman_rule(), x, m, perts, p["horizon"], workers=p["workers"])
            worst = max(report.rows, key=lambda r: r.density)
            return report.passed, {
                "m": m, "threshold": report.threshold, "max_density": worst.density,
                "worst_perturbation": perts[worst.perturbation_id].label, "worst_j": worst.j,
                "failing_rows": sum(not r.passed for r in report.rows),
            }
        checks.append(timed_check(f"me-point-m{m}", "divergence densities near the doubling point stay below 2^-(m+2)", check))
    return checks


# --- level 2 --------------------------------------------------------------

def random_level2_word(rng, max_extra=6) -> tuple[int, ...]:
    extra = int(rng.integers(0, max_extra + 1))
    return (pair(DOOR, CHERRY),) + _random_word(rng, extra, 18)


@suite("level2", words=10, horizon=5000)
def _level2(rng, p):
    H = p["horizon"]
    words = [random_level2_word(rng) for _ in range(p["words"])]
    checks = []
    for k, w in enumerate(words):
        def check(w=w):
            x, y, case = cofinite_divergence_pair(w)
            N = keymaster_arrival(x, y, H)
            agree = agreement_times(x, y, H)
            last = int(agree.max()) if agree.size else -1
            return N is not None and last <= N + 1, {
                "w": LEVEL2_ALPHABET.render(w, tokens=True), "case": case,
                "crossing": N, "last_agreement": last,
            }
        checks.append(timed_check(f"cofinite-{k}", "orbits at 0 agree only finitely often", check))
    return checks


@suite("level2-projection", specs=100, horizon=200)
def _level2_projection(rng, p):
    H = p["horizon"]
    specs = []
    for _ in range(p["specs"]):
        center = _random_word(rng, int(rng.integers(0, 20)), 18)
        left = _random_word(rng, int(rng.integers(1, 4)), 18)
        right = _random_word(rng, int(rng.integers(1, 4)), 18)
        specs.append(EventuallyPeriodic(LEVEL2_ALPHABET, left, center, right))

    def commute():
        bad = 0
        for spec in specs:
            lifted = evolve_window(pacman2_rule(), spec, 10, H, keep_rows=False)
            plain = evolve_window(pacman_rule(), project(spec, 0), 10, H, keep_rows=False)
            bad += not np.array_equal(first(lifted.rect), plain.rect)
        return bad == 0, {"specs": len(specs), "mismatches": bad}

    def two_phase():
        # fruit alternates while the Pacman coordinate is empty, door or pacman
        bad = 0
        for spec in specs[:20]:
            win = evolve_window(pacman2_rule(), spec, 10, 60, keep_rows=False)
            r = win.rect.astype(int)
            pv, qv = r // 3, r % 3
            calm = np.isin(pv[:-1], [EMPTY, DOOR, PACMAN]) & (qv[:-1] != 0)
            bad += int(np.sum(calm & (qv[1:] == qv[:-1])))
        return bad == 0, {"violations": bad}

    def settles():
        words = [_random_word(rng, int(rng.integers(1, 6)), 18) for _ in range(20)]
        ok = True
        for w in words:
            t = quiescence_time(tuple(int(c) // 3 for c in w))
            spec = EventuallyPeriodic(LEVEL2_ALPHABET, (pair(EMPTY, 0),), w + (pair(DOOR, 0),), (pair(EMPTY, 0),))
            win = evolve_window(pacman2_rule(), spec, len(w), t + 20, keep_rows=False)
            ok &= bool(np.isin(first(win.crop(0, len(w))[t:]), list(QUIET)).all())
        return ok, {"words": len(words)}

    return [
        timed_check("projection", "the first coordinate runs the Pacman CA", commute),
        timed_check("two-phase", "fruit alternates away from freezes", two_phase),
        timed_check("settles", "words between a door and empty space settle", settles),
    ]


@suite("level2-mean", m=1, perturbations=20, horizon=100_000, width=16, workers=4)
def _level2_mean(rng, p):
    seed = int(rng.integers(0, 2**31))

    def check():
        x = doubling_point2()
        perts = analysis.random_perturbations(x, p["m"], seed=seed, count=p["perturbations"])
        wins = _map(lambda y: evolve_level2(y, p["width"], p["horizon"]), perts, p["workers"])
        worst, pairs = 0.0, 0
        for a, b in itertools.combinations(range(len(wins)), 2):
            worst = max(worst, analysis.mean_of_distances(analysis.orbit_distances(wins[a].rect, wins[b].rect)))
            pairs += 1
        bound = 0.5
        return worst <= bound, {"pairs": pairs, "max_mean_divergence": worst, "bound": bound,
                                "truncation_bias": 2.0 ** -p["width"]}

    return [timed_check("level2-mean", "nearby points of the level-2 doubling point stay close on average", check)]


# --- blocking words -------------------------------------------------------

@suite("blocking", maxlen=4, horizon=2000)
def _blocking(rng, p):
    L, H = p["maxlen"], p["horizon"]

    def words():
        for n in range(1, L + 1):
            yield from itertools.product(range(6), repeat=n)

    def identity():
        rule = identity_rule(PACMAN_ALPHABET)
        res = [find_blocking_column(rule, (c,), 1, H) for c in range(6)]
        return all(r is not None and r.proved for r in res), {"proved": sum(r is not None and r.proved for r in res)}

    def none_for(rule):
        def check():
            found = [PACMAN_ALPHABET.render(w) for w in words() if find_blocking_column(rule, w, 1, H) is not None]
            return not found, {"max_length": L, "found": found}
        return check

    return [
        timed_check("identity", "every symbol blocks under the identity", identity),
        timed_check("shift", "no blocking word for the shift", none_for(shift_rule(PACMAN_ALPHABET))),
        timed_check("pacman", "no blocking word for the Pacman CA", none_for(pacman_rule())),
    ]
