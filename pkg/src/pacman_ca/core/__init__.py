"""Generic engine for radius-bounded one-dimensional CA on full shifts."""
from .alphabet import Alphabet, Symbol, as_codes
from .blocking import (
    BlockingResult,
    HeldToHorizon,
    ProvedByCycle,
    find_blocking_column,
    partial_step,
)
from .configs import (
    ConfigSpec,
    Custom,
    DoublingDoors,
    EventuallyPeriodic,
    constant,
    coordinate_at,
    doubling_positions,
    periodic,
    splice,
)
from .evolve import SpacetimeWindow, evolve_trapezoid, evolve_window
from .rule import LocalRule, identity_rule, make_rule, shift_rule, step_row

__all__ = [
    "Alphabet", "Symbol", "as_codes",
    "BlockingResult", "HeldToHorizon", "ProvedByCycle", "find_blocking_column", "partial_step",
    "ConfigSpec", "Custom", "DoublingDoors", "EventuallyPeriodic", "constant", "coordinate_at",
    "doubling_positions", "periodic", "splice",
    "SpacetimeWindow", "evolve_trapezoid", "evolve_window",
    "LocalRule", "identity_rule", "make_rule", "shift_rule", "step_row",
]
