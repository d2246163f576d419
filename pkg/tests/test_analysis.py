import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pacman_ca import analysis
from pacman_ca.analysis import (
    TimeSet,
    agreement_radius,
    cantor_distance,
    default_perturbations,
    divergence_set,
    divergence_sets,
    me_point_probe,
    mean_divergence,
    mean_of_distances,
    orbit_distances,
    perturb,
    random_perturbations,
    upper_density,
)
from pacman_ca.core import EventuallyPeriodic, constant, evolve_window, identity_rule
from pacman_ca.errors import AgreementTooShort
from pacman_ca.level2 import LEVEL2_ALPHABET, cofinite_divergence_pair, evolve_level2, pacman2_rule
from pacman_ca.pacman import (
    EMPTY,
    GHOST,
    KEYMASTER,
    PACMAN_ALPHABET,
    disagreement_times,
    doubling_point,
    pacman_rule,
    sensitivity_pair,
)

P = PACMAN_ALPHABET
f = pacman_rule()


# --- metric -------------------------------------------------------------------

def test_identical_rows_are_at_distance_zero():
    row = np.arange(11) % 6
    assert cantor_distance(row, row, 5) == 0.0


def test_distance_uses_the_closest_difference():
    x = np.zeros(21, dtype=np.uint8)
    y = x.copy()
    y[10 - 3] = 1
    y[10 + 5] = 1
    assert cantor_distance(x, y, 10) == 2.0**-3


def test_difference_at_origin_is_distance_one():
    x = np.zeros(5, dtype=np.uint8)
    y = x.copy()
    y[2] = 4
    assert cantor_distance(x, y, 2) == 1.0


def test_distance_checks_row_shape():
    with pytest.raises(ValueError):
        cantor_distance(np.zeros(4), np.zeros(4), 2)


# --- time sets and densities ---------------------------------------------------

def test_time_set_rejects_unsorted_or_out_of_range():
    with pytest.raises(ValueError):
        TimeSet([3, 1], 5)
    with pytest.raises(ValueError):
        TimeSet([1, 9], 5)


def test_time_set_operations():
    a, b = TimeSet([1, 3], 10), TimeSet([3, 7], 10)
    assert list(a | b) == [1, 3, 7] and len(a | b) == 3
    assert 3 in a and 4 not in a
    assert TimeSet.from_mask(a.mask()).times.tolist() == [1, 3]


def test_empty_set_has_density_zero():
    assert upper_density(TimeSet([], 1000)).value == 0.0


def test_full_set_has_density_one():
    est = upper_density(TimeSet(np.arange(1001), 1000))
    assert est.value == 1.0 and est.window_start == 500


@pytest.mark.parametrize("g", [2, 3, 7, 10])
def test_arithmetic_progression_density(g):
    H = 10_000
    assert abs(upper_density(TimeSet(np.arange(0, H + 1, g), H)).value - 1 / g) <= 2 / H


def test_density_takes_the_tail_maximum():
    # dense early, sparse later: only the tail window counts
    H = 100
    est = upper_density(TimeSet(np.arange(10), H))
    assert math.isclose(est.value, 10 / 50)


def test_density_needs_horizon_two():
    with pytest.raises(ValueError):
        upper_density(TimeSet([0], 1))


def test_density_is_monotone_under_inclusion():
    rng = np.random.default_rng(7)
    for _ in range(500):
        H = int(rng.integers(2, 300))
        big = rng.random(H + 1) < rng.random()
        small = big & (rng.random(H + 1) < rng.random())
        assert upper_density(TimeSet.from_mask(small)).value <= upper_density(TimeSet.from_mask(big)).value


# --- divergence sets -------------------------------------------------------------

def test_equal_points_never_diverge():
    x = doubling_point()
    assert len(divergence_set(f, x, x, 2, 100)) == 0


def test_sensitivity_pair_first_divergence():
    x, y = sensitivity_pair(P.parse("."))
    s = divergence_set(f, x, y, 0, 200)
    assert s.times[0] == disagreement_times(x, y, 200)[0] == 2


@st.composite
def pacman_specs(draw):
    word = st.lists(st.integers(0, 5), min_size=1, max_size=4)
    return EventuallyPeriodic(P, tuple(draw(word)), tuple(draw(st.lists(st.integers(0, 5), max_size=10))),
                              tuple(draw(word)))


@settings(max_examples=40)
@given(pacman_specs(), pacman_specs(), st.integers(0, 6))
def test_divergence_set_is_union_of_sides(x, y, j):
    d = divergence_sets(f, x, y, j, 60)
    assert np.array_equal((d.plus | d.minus).times, d.both.times)


def test_divergence_set_validates_arguments():
    x = doubling_point()
    with pytest.raises(ValueError):
        divergence_set(f, x, x, -1, 10)


# --- mean divergence -------------------------------------------------------------

def test_mean_of_equal_orbits_is_zero():
    x = doubling_point()
    assert mean_divergence(f, x, x, 100, 8).value == 0.0


def test_identity_orbits_differing_at_origin_have_mean_one():
    x = constant(P, EMPTY)
    y = EventuallyPeriodic(P, (EMPTY,), (GHOST,), (EMPTY,))
    md = mean_divergence(identity_rule(P), x, y, 50, 4)
    assert md.value == 1.0 and md.bias == 2.0**-4


def test_mean_validates_arguments():
    x = doubling_point()
    with pytest.raises(ValueError):
        mean_divergence(f, x, x, 0, 4)


def test_mean_of_distances_tail_window():
    d = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
    # running means at n = 2, 3, 4 are 2/3, 1/2, 2/5
    assert math.isclose(mean_of_distances(d), 2 / 3)


@settings(max_examples=25)
@given(pacman_specs(), pacman_specs(), pacman_specs())
def test_mean_divergence_is_symmetric_and_satisfies_triangle(x, y, z):
    H, W = 120, 6
    m = {(a, b): mean_divergence(f, sa, sb, H, W).value
         for (a, sa), (b, sb) in [(("x", x), ("y", y)), (("y", y), ("x", x)), (("y", y), ("z", z)), (("x", x), ("z", z))]}
    assert m[("x", "y")] == m[("y", "x")]
    # the running means are pointwise sub-additive, so the tail maxima are too
    assert m[("x", "z")] <= m[("x", "y")] + m[("y", "z")] + 2 * 2.0**-W + 1e-12


@settings(max_examples=25)
@given(pacman_specs(), pacman_specs())
def test_mean_is_bounded_by_weighted_densities(x, y):
    H, W = 200, 6
    wx = evolve_window(f, x, W, H)
    wy = evolve_window(f, y, W, H)
    mean = mean_of_distances(orbit_distances(wx.rect, wy.rect))
    bound = sum(2.0**-j * upper_density(analysis.divergence_sets_from_windows(wx, wy, j).both).value
                for j in range(W + 1))
    assert mean <= bound + 2.0**-W + 4 / H


# --- probe ---------------------------------------------------------------------

def test_agreement_radius_values():
    assert [agreement_radius(m) for m in (0, 1, 2)] == [18, 35, 68]


def test_probe_with_unperturbed_point_passes():
    x = doubling_point()
    report = me_point_probe(f, x, 0, [x], 500)
    assert report.passed and report.max_density == 0.0
    assert [r.j for r in report.rows] == [0, 1]


def test_probe_rejects_close_perturbations():
    x = doubling_point()
    y = perturb(x, 5, right=constant(P, KEYMASTER))
    with pytest.raises(AgreementTooShort):
        me_point_probe(f, x, 0, [y], 100)


def test_probe_csv_and_summary():
    x = doubling_point()
    report = me_point_probe(f, x, 1, [x, x], 100)
    lines = report.to_csv().splitlines()
    assert lines[0] == "perturbation_id,j,density,threshold,pass"
    assert len(lines) == 1 + 2 * 3
    assert report.summary()["perturbations"] == 2 and '"pass": true' in report.to_json()


def test_probe_flags_the_cofinite_partner_under_the_level2_rule():
    w = LEVEL2_ALPHABET.parse("(|c)" + "(..)" * 40)
    x, y, _ = cofinite_divergence_pair(w)
    report = me_point_probe(pacman2_rule(), x, 1, [y], 4000, evolve=evolve_level2)
    assert not report.passed
    assert report.rows[0].density > 0.9


def test_default_perturbations_respect_the_agreement_radius():
    x = doubling_point()
    for m in (0, 1):
        r = agreement_radius(m)
        perts = default_perturbations(x, m, n_random=5)
        assert len(perts) == 10
        ref = x.evaluate(-r, r)
        assert all(np.array_equal(y.evaluate(-r, r), ref) for y in perts)
        # and every one of them actually differs from x somewhere outside
        assert all(not np.array_equal(y.evaluate(-r - 200, r + 200), x.evaluate(-r - 200, r + 200)) for y in perts)


def test_random_perturbations_are_seeded():
    x = doubling_point()
    a = random_perturbations(x, 0, seed=3, count=3)
    b = random_perturbations(x, 0, seed=3, count=3)
    assert all(np.array_equal(p.evaluate(-200, 200), q.evaluate(-200, 200)) for p, q in zip(a, b))


def test_level2_perturbations_use_level2_symbols():
    from pacman_ca.level2 import doubling_point2

    perts = default_perturbations(doubling_point2(), 1, n_random=0)
    assert all(y.alphabet == LEVEL2_ALPHABET for y in perts)
