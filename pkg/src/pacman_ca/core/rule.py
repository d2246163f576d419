from __future__ import annotations

import itertools
from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import BadOffsets, MissingNeighborhood, RowTooShort
from .alphabet import Alphabet, as_codes


@dataclass(frozen=True, eq=False)
class LocalRule:
    """Local function ``f`` with ``T(x)_i = f(x[i+memory .. i+anticipation])``.

    ``table`` is indexed by the neighborhood read left to right as a base
    ``len(alphabet)`` number (leftmost cell most significant).
    """

    alphabet: Alphabet
    memory: int
    anticipation: int
    table: np.ndarray
    name: str = "rule"

    @property
    def span(self) -> int:
        return self.anticipation - self.memory + 1

    @property
    def radius(self) -> int:
        return max(-self.memory, self.anticipation)

    @property
    def nsym(self) -> int:
        return len(self.alphabet)

    def index(self, neighborhood) -> int:
        idx = 0
        for c in neighborhood:
            idx = idx * self.nsym + int(c)
        return idx

    def __call__(self, *neighborhood: int) -> int:
        if len(neighborhood) != self.span:
            raise ValueError(f"expected {self.span} cells, got {len(neighborhood)}")
        return int(self.table[self.index(neighborhood)])

    def neighborhoods(self):
        return itertools.product(range(self.nsym), repeat=self.span)

    def __repr__(self):
        return f"LocalRule({self.name!r}, m={self.memory}, a={self.anticipation}, |A|={self.nsym})"


def make_rule(
    alphabet: Alphabet,
    memory: int,
    anticipation: int,
    table: Mapping | Callable,
    name: str = "rule",
) -> LocalRule:
    """Validate and freeze a local rule.

    ``table`` maps neighborhood tuples of codes to a code, or is a callable
    taking the cells as positional arguments.
    """
    if memory > anticipation:
        raise BadOffsets(f"memory {memory} > anticipation {anticipation}")
    span = anticipation - memory + 1
    n = len(alphabet)
    out = np.empty(n**span, dtype=np.uint8)
    for k, nb in enumerate(itertools.product(range(n), repeat=span)):
        if callable(table):
            value = table(*nb)
        else:
            try:
                value = table[nb]
            except KeyError:
                raise MissingNeighborhood(alphabet.render(nb)) from None
        if not 0 <= int(value) < n:
            raise ValueError(f"f{nb} = {value} is outside the alphabet")
        out[k] = value
    out.setflags(write=False)
    return LocalRule(alphabet, memory, anticipation, out, name)


def identity_rule(alphabet: Alphabet) -> LocalRule:
    return make_rule(alphabet, 0, 0, lambda b: b, name="identity")


def shift_rule(alphabet: Alphabet) -> LocalRule:
    """The left shift ``sigma(x)_i = x_{i+1}``."""
    return make_rule(alphabet, 1, 1, lambda c: c, name="shift")


def step_row(rule: LocalRule, row, backend: str | None = None) -> np.ndarray:
    """Apply the rule to every full neighborhood of a finite row.

    ``out[i] = f(row[i .. i+span-1])``; the output is ``span-1`` shorter.
    """
    row = as_codes(row, rule.alphabet)
    if row.shape[0] < rule.span:
        raise RowTooShort(f"row of length {row.shape[0]} < span {rule.span}")
    return _kernels.get(backend).step_row(rule.table, rule.nsym, rule.span, row)
