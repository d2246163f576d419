from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Symbol:
    code: int
    name: str
    glyph: str
    token: str = ""

    def __post_init__(self):
        if not self.token:
            object.__setattr__(self, "token", self.glyph)


class Alphabet:
    """Finite symbol set with stable integer codes ``0..len-1``.

    Each symbol has a one-character ``glyph`` and a ``token`` used by the
    text grammar; tokens default to the glyph but may be longer (the
    product alphabet writes ``(|c)``).
    """

    def __init__(self, symbols: Iterable[Symbol]):
        symbols = tuple(symbols)
        if len(symbols) < 2:
            raise ValueError("an alphabet needs at least two symbols")
        if [s.code for s in symbols] != list(range(len(symbols))):
            raise ValueError("codes must be 0..n-1 in order")
        glyphs = [s.glyph for s in symbols]
        if any(len(g) != 1 or not g.isprintable() or g.isspace() for g in glyphs):
            raise ValueError("glyphs must be single printable characters")
        if len(set(glyphs)) != len(glyphs):
            raise ValueError("glyphs must be distinct")
        tokens = [s.token for s in symbols]
        if len(set(tokens)) != len(tokens):
            raise ValueError("tokens must be distinct")
        self.symbols = symbols
        self._by_name = {s.name: s.code for s in symbols}
        self._by_token = {s.token: s.code for s in symbols}
        self._by_glyph = {s.glyph: s.code for s in symbols}
        ordered = sorted(tokens, key=len, reverse=True)
        self._token_re = re.compile("|".join(re.escape(t) for t in ordered))

    @classmethod
    def from_glyphs(cls, glyphs: str, names: Sequence[str] | None = None) -> Alphabet:
        names = names or [f"s{i}" for i in range(len(glyphs))]
        return cls(Symbol(i, n, g) for i, (n, g) in enumerate(zip(names, glyphs)))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({''.join(s.glyph for s in self.symbols)!r})"

    def code(self, name: str) -> int:
        return self._by_name[name]

    def name(self, code: int) -> str:
        return self.symbols[code].name

    @property
    def glyphs(self) -> str:
        return "".join(s.glyph for s in self.symbols)

    @property
    def uses_tokens(self) -> bool:
        return any(s.token != s.glyph for s in self.symbols)

    def parse(self, text: str) -> tuple[int, ...]:
        """Decode a word written with tokens (or glyphs) into codes."""
        codes = []
        pos = 0
        while pos < len(text):
            match = self._token_re.match(text, pos)
            if match is None:
                code = self._by_glyph.get(text[pos])
                if code is None:
                    raise ValueError(f"unknown symbol at {pos} in {text!r}")
                codes.append(code)
                pos += 1
                continue
            codes.append(self._by_token[match.group()])
            pos = match.end()
        return tuple(codes)

    def render(self, codes: Iterable[int], tokens: bool = False) -> str:
        attr = "token" if tokens else "glyph"
        return "".join(getattr(self.symbols[int(c)], attr) for c in codes)

    def full_mask(self) -> int:
        return (1 << len(self)) - 1


def as_codes(word, alphabet: Alphabet) -> np.ndarray:
    """Accept a string (parsed with ``alphabet``) or a code sequence."""
    if isinstance(word, str):
        word = alphabet.parse(word)
    arr = np.asarray(word, dtype=np.uint8).reshape(-1)
    if arr.size and int(arr.max()) >= len(alphabet):
        raise ValueError("code outside alphabet")
    return arr
