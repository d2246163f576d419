"""Property tests for the generic engine on random rules and configurations."""
import itertools

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pacman_ca import _kernels
from pacman_ca.core import (
    Alphabet,
    EventuallyPeriodic,
    evolve_trapezoid,
    evolve_window,
    find_blocking_column,
    make_rule,
    partial_step,
    step_row,
)
from pacman_ca.core.blocking import ProvedByCycle

from .oracles import naive_orbit

ALPHABETS = {k: Alphabet.from_glyphs("abcdef"[:k]) for k in range(2, 5)}


@st.composite
def rules(draw, max_radius=2, nsym=None):
    k = nsym or draw(st.integers(2, 4))
    m = draw(st.integers(-max_radius, max_radius))
    a = draw(st.integers(m, max_radius))
    seed = draw(st.integers(0, 2**32 - 1))
    table = np.random.default_rng(seed).integers(0, k, k ** (a - m + 1))
    return make_rule(ALPHABETS[k], m, a, lambda *nb: table[_index(nb, k)])


def _index(nb, k):
    idx = 0
    for c in nb:
        idx = idx * k + c
    return idx


@st.composite
def specs(draw, alphabet):
    k = len(alphabet)
    word = st.lists(st.integers(0, k - 1), min_size=1, max_size=5)
    left, right = draw(word), draw(word)
    center = draw(st.lists(st.integers(0, k - 1), max_size=12))
    return EventuallyPeriodic(alphabet, tuple(left), tuple(center), tuple(right))


@st.composite
def rule_and_spec(draw, max_radius=2):
    rule = draw(rules(max_radius))
    return rule, draw(specs(rule.alphabet))


@settings(max_examples=60)
@given(rule_and_spec(), st.integers(0, 6), st.integers(0, 25))
def test_certified_values_do_not_depend_on_window_size(rs, n, H):
    rule, spec = rs
    small = evolve_window(rule, spec, n, H)
    big = evolve_window(rule, spec, n + 5, H)
    assert np.array_equal(small.rect, big.crop(-n, n))


@settings(max_examples=60)
@given(rule_and_spec(), st.integers(0, 6), st.integers(0, 25))
def test_evolution_commutes_with_the_shift(rs, n, H):
    rule, spec = rs
    shifted = evolve_window(rule, spec.shifted(1), n, H)
    wide = evolve_window(rule, spec, n + 1, H)
    assert np.array_equal(shifted.rect, wide.crop(-n + 1, n + 1))


@settings(max_examples=60)
@given(rule_and_spec(), st.integers(0, 5), st.integers(0, 20))
def test_band_engine_matches_naive_trapezoid_on_every_backend(rs, n, H):
    rule, spec = rs
    ref = evolve_trapezoid(rule, spec, n, H)
    for backend in _kernels.BACKENDS:
        got = evolve_window(rule, spec, n, H, keep_rows=True, backend=backend)
        assert np.array_equal(got.rect, ref.rect)
        assert all(np.array_equal(x, y) for x, y in zip(got.rows, ref.rows))


@settings(max_examples=30)
@given(rule_and_spec(max_radius=1), st.integers(0, 4), st.integers(0, 12))
def test_band_engine_matches_brute_force_loop(rs, n, H):
    rule, spec = rs
    assert evolve_window(rule, spec, n, H).rect.tolist() == naive_orbit(rule, spec, -n, n, H)


@settings(max_examples=60)
@given(rules(max_radius=1), st.data())
def test_partial_step_is_sound(rule, data):
    k = rule.nsym
    width = data.draw(st.integers(rule.span, rule.span + 3))
    masks = data.draw(st.lists(st.integers(1, 2**k - 1), min_size=width, max_size=width))
    out = partial_step(rule, masks)
    members = [[s for s in range(k) if m >> s & 1] for m in masks]
    for pick in itertools.islice(itertools.product(*members), 200):
        concrete = step_row(rule, np.array(pick, dtype=np.uint8))
        assert all(out[i] >> int(v) & 1 for i, v in enumerate(concrete))


@st.composite
def walled_rules(draw):
    """Random radius-1 rules in which symbol 0 never changes: a wall blocks."""
    k = draw(st.integers(2, 3))
    seed = draw(st.integers(0, 2**32 - 1))
    table = np.random.default_rng(seed).integers(0, k, k**3)

    def f(l, c, r):
        return 0 if c == 0 else int(table[_index((l, c, r), k)])

    return make_rule(ALPHABETS[k], -1, 1, f)


@settings(max_examples=40)
@given(walled_rules(), st.data())
def test_proved_blocking_column_ignores_the_context(rule, data):
    k = rule.nsym
    w = tuple(data.draw(st.lists(st.integers(0, k - 1), min_size=1, max_size=4)))
    res = find_blocking_column(rule, w, 1, 300)
    assume(res is not None and isinstance(res.evidence, ProvedByCycle))
    H, pad = 40, 45
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    columns = set()
    for _ in range(200):
        left = tuple(int(v) for v in rng.integers(0, k, pad))
        right = tuple(int(v) for v in rng.integers(0, k, pad))
        spec = EventuallyPeriodic(rule.alphabet, left, w + right, (0,))
        win = evolve_window(rule, spec, len(w), H)
        columns.add(tuple(win.column(res.offset)))
    assert len(columns) == 1
