"""Text form of configurations and rules.

``LEFT*CENTER*RIGHT``
    LEFT repeats toward minus infinity, RIGHT toward plus infinity, and the
    first symbol of CENTER sits at coordinate 0 (CENTER may be empty).
``doubling`` / ``doubling:w=<word>``
    doors separated by gaps 1, 2, 4, ... on both sides, optionally with
    ``w`` inserted at coordinate 0.
``keymaster_flood:m=<int>``
    ``...0 . |0^m| KKK...``.

Words are glyph strings; level-2 symbols may also be written as tokens
such as ``(|c)``.
"""
from __future__ import annotations

import re
from collections.abc import Callable

from ..core import Alphabet, ConfigSpec, DoublingDoors, EventuallyPeriodic, LocalRule, identity_rule, shift_rule
from ..errors import ConfigParseError
from ..level2 import LEVEL2_ALPHABET, doubling_point2, lift, pacman2_rule
from ..pacman import PACMAN_ALPHABET, doubling_point, keymaster_flood, pacman_rule

RULES: dict[str, Callable[[], LocalRule]] = {
    "pacman": pacman_rule,
    "pacman2": pacman2_rule,
    "identity": lambda: identity_rule(PACMAN_ALPHABET),
    "shift": lambda: shift_rule(PACMAN_ALPHABET),
}

_NAMED = re.compile(r"^(?P<name>[a-z_]+)(?::(?P<args>.*))?$")


def get_rule(name: str) -> LocalRule:
    try:
        return RULES[name]()
    except KeyError:
        raise ConfigParseError(f"unknown rule {name!r}; choose from {sorted(RULES)}") from None


def parse_word(text: str, alphabet: Alphabet) -> tuple[int, ...]:
    try:
        return alphabet.parse(text)
    except (KeyError, ValueError) as exc:
        raise ConfigParseError(f"bad word {text!r}: {exc}") from None


def _args(raw: str | None) -> dict[str, str]:
    out = {}
    for part in filter(None, (raw or "").split(",")):
        key, sep, value = part.partition("=")
        if not sep:
            raise ConfigParseError(f"expected key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def parse_config(text: str, alphabet: Alphabet = PACMAN_ALPHABET) -> ConfigSpec:
    text = text.strip()
    if "*" in text:
        parts = text.split("*")
        if len(parts) != 3:
            raise ConfigParseError(f"expected LEFT*CENTER*RIGHT, got {text!r}")
        left, center, right = (parse_word(p, alphabet) for p in parts)
        if not left or not right:
            raise ConfigParseError("LEFT and RIGHT must be non-empty")
        return EventuallyPeriodic(alphabet, left, center, right)

    match = _NAMED.match(text)
    if not match:
        raise ConfigParseError(f"cannot parse configuration {text!r}")
    name, args = match["name"], _args(match["args"])
    level2 = alphabet == LEVEL2_ALPHABET
    if name == "doubling":
        unknown = set(args) - {"w"}
        if unknown:
            raise ConfigParseError(f"doubling takes only w=, got {sorted(unknown)}")
        insert = parse_word(args.get("w", ""), alphabet)
        return doubling_point2(insert) if level2 else doubling_point(insert)
    if name == "keymaster_flood":
        try:
            m = int(args["m"])
        except (KeyError, ValueError):
            raise ConfigParseError("keymaster_flood needs m=<int>") from None
        if m < 0:
            raise ConfigParseError("m must be >= 0")
        spec = keymaster_flood(m)
        return lift(spec) if level2 else spec
    raise ConfigParseError(f"unknown configuration name {name!r}")


def render_config(spec: ConfigSpec) -> str:
    """Inverse of :func:`parse_config` for the grammar's own spec kinds."""
    a = spec.alphabet
    tokens = a.uses_tokens
    if isinstance(spec, EventuallyPeriodic):
        return "*".join(a.render(w, tokens=tokens) for w in (spec.left, spec.center, spec.right))
    if isinstance(spec, DoublingDoors):
        return "doubling" + (f":w={a.render(spec.insert, tokens=tokens)}" if spec.insert else "")
    raise ConfigParseError(f"{type(spec).__name__} has no text form")


def parse_range(text: str) -> list[int]:
    """``"2..12"`` -> ``[2, ..., 12]``; ``"3"`` -> ``[3]``; ``"1,4"`` -> ``[1, 4]``."""
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        try:
            out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
        except ValueError:
            raise ConfigParseError(f"bad range {text!r}") from None
    return out
