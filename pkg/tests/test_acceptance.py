"""Acceptance gate: each criterion at its stated tolerance and time budget.

Every test prints one ``PASS``/``FAIL`` line (collected again in the
terminal summary) and then asserts the outcome.
"""
import time

import pytest

from pacman_ca.harness.cli import main
from pacman_ca.harness.suites import load_golden, run_suite

from .conftest import ACCEPTANCE


def _gate(number, title, budget_s, fn):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = elapsed < budget_s
    verdict = "PASS" if ok and in_time else "FAIL"
    timing = f"{elapsed:.1f}s of {budget_s:g}s" + ("" if in_time else " OVER BUDGET")
    line = f"criterion {number:>2} {verdict}: {title} [{timing}] {detail}"
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line
    assert in_time, line


def _suites(*names, **params):
    def run():
        reports = [run_suite(n, **params) for n in names]
        failed = [f"{r.suite}:{c.id}" for r in reports for c in r.failures()]
        return not failed, ("all checks pass" if not failed else f"failing: {', '.join(failed)}"), reports
    return run


def _summary(run, pick):
    def fn():
        ok, text, reports = run()
        return ok, f"{text}; {pick(reports)}"
    return fn


def _values(reports, key):
    return [c.values.get(key) for r in reports for c in r.checks]


def test_criterion_1_golden_diagrams(capsys):
    def fn():
        bad = []
        for name in ("flood_filter.txt", "ghost_pacman_mix.txt"):
            header, rows = load_golden(name)
            capsys.readouterr()
            code = main(["simulate", "--rule", "pacman", "--config", header["config"],
                         "--steps", header["steps"], "--width", "9"])
            out = capsys.readouterr().out.splitlines()
            if code != 0 or out != rows:
                bad.append(name)
        return not bad, f"{2 - len(bad)}/2 diagrams glyph-exact"
    _gate(1, "golden space-time diagrams", 1, fn)


def test_criterion_2_door_return():
    run = _suites("door-return")
    _gate(2, "door return time 3m-5 for m in 4..40", 5,
          _summary(run, lambda r: f"{len(r[0].checks)} values of m"))


def test_criterion_3_crossing_periodicity():
    def fn():
        wide = run_suite("crossing", m=list(range(2, 13)), horizon=600)
        one = run_suite("crossing", m=[1], horizon=600)
        parts = [f"m=2..12 {'pass' if wide.passed else 'fail'}"]
        c = one.checks[0]
        parts.append(f"m=1 {c.status} (first crossings {c.values['first']} vs expected {c.values['expected_first']})")
        return wide.passed and one.passed, "; ".join(parts)
    _gate(3, "crossings at 3m+(2m-1)k, and 1+3k for m=1", 10, fn)


def test_criterion_4_gap_laws():
    run = _suites("gap", "multi-door-gap")
    _gate(4, "crossing gap laws", 60, _summary(run, lambda r: f"violations {sum(len(v) if isinstance(v, list) else v for v in _values(r, 'violations'))}"))


def test_criterion_5_rule_table_and_projection():
    run = _suites("rule-table", "level2-projection")
    _gate(5, "no-creation, door persistence, level-2 projection", 10,
          _summary(run, lambda r: f"{sum(len(x.checks) for x in r)} checks"))


def test_criterion_6_trajectories():
    run = _suites("trajectory")
    _gate(6, "particle displacement, revisits and count", 60,
          _summary(run, lambda r: f"max step {_values(r, 'max_step')[0]}, max visits {_values(r, 'max_visits_per_cell')[0]}"))


def test_criterion_7_sensitivity_witnesses():
    run = _suites("sensitivity")
    _gate(7, "divergence counts above H/(2|w|+12)", 30, _summary(run, lambda r: f"{len(r[0].checks)} words"))


@pytest.mark.slow
def test_criterion_8_mean_equicontinuity_probe():
    def fn():
        report = run_suite("me-point", m=[0, 1], horizon=100_000)
        parts = [f"m={c.values['m']} max density {c.values['max_density']:.4f} vs {c.values['threshold']:.5f} "
                 f"({c.values['worst_perturbation']}, j={c.values['worst_j']})" for c in report.checks]
        return report.passed, "; ".join(parts)
    _gate(8, "doubling point densities below 2^-(m+2)", 600, fn)


def test_criterion_9_cofinite_divergence():
    run = _suites("level2")
    _gate(9, "level-2 agreement ends by the first crossing + 1", 60,
          _summary(run, lambda r: f"{len(r[0].checks)} checks"))


@pytest.mark.slow
def test_criterion_10_level2_mean_divergence():
    def fn():
        report = run_suite("level2-mean")
        c = report.checks[0]
        return report.passed, f"max pairwise mean {c.values['max_mean_divergence']:.4f} vs {c.values['bound']}"
    _gate(10, "level-2 pairwise mean divergence at most 1/2", 600, fn)


@pytest.mark.slow
def test_criterion_11_blocking_search():
    run = _suites("blocking")
    _gate(11, "blocking search: identity yes, shift and pacman none", 300,
          _summary(run, lambda r: f"{len(r[0].checks)} checks"))
