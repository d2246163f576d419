"""Machine-readable verification reports."""
from __future__ import annotations

import json
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def _plain(value):
    """JSON-safe copy of ``value`` (numpy scalars and arrays become Python)."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


@dataclass
class Check:
    id: str
    anchor: str  # what the check confirms, or "plumbing"
    status: str  # "pass" or "fail"
    values: dict[str, Any] = field(default_factory=dict)
    ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timing: bool = True) -> dict:
        out = {"id": self.id, "anchor": self.anchor, "status": self.status, "values": _plain(self.values)}
        if timing:
            out["ms"] = round(self.ms, 3)
        return out


def timed_check(id: str, anchor: str, fn: Callable[[], tuple[bool, dict]]) -> Check:
    start = time.perf_counter()
    ok, values = fn()
    ms = (time.perf_counter() - start) * 1000.0
    return Check(id, anchor, "pass" if ok else "fail", values, ms)


@dataclass
class VerificationReport:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = True) -> dict:
        return {"suite": self.suite, "seed": self.seed, "checks": [c.to_dict(timing) for c in self.checks]}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)
