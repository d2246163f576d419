"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each workload runs on every available backend; results must agree
bit-for-bit, and the table reports the best wall time of ``--repeat`` runs.
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from pacman_ca import _kernels
from pacman_ca.core import evolve_window, step_row
from pacman_ca.harness.grammar import get_rule
from pacman_ca.level2 import doubling_point2
from pacman_ca.pacman import doubling_point, keymaster_flood


def _workloads():
    pac = get_rule("pacman")
    pac2 = get_rule("pacman2")
    rng = np.random.default_rng(0)
    noise = rng.integers(0, 6, 200_000).astype(np.uint8)
    rand = _random_spec(pac, rng)
    return [
        ("step_row random 200k", lambda b: step_row(pac, noise, backend=b)),
        ("doubling point H=20000", lambda b: evolve_window(pac, doubling_point(), 16, 20_000, backend=b).rect),
        ("keymaster flood m=6 H=5000", lambda b: evolve_window(pac, keymaster_flood(6), 16, 5_000, backend=b).rect),
        ("level-2 doubling H=2000", lambda b: evolve_window(pac2, doubling_point2(()), 16, 2_000, backend=b).rect),
        ("random row H=300", lambda b: evolve_window(pac, rand, 32, 300, backend=b).rect),
    ]


def _random_spec(rule, rng):
    from pacman_ca.core import EventuallyPeriodic

    word = tuple(int(v) for v in rng.integers(0, rule.nsym, 2_000))
    return EventuallyPeriodic(rule.alphabet, word[:7], word, word[-5:])


def run(repeat: int) -> list[dict]:
    results = []
    for name, fn in _workloads():
        row = {"workload": name}
        outputs = {}
        for backend in sorted(_kernels.BACKENDS):
            best = float("inf")
            for _ in range(repeat):
                start = time.perf_counter()
                outputs[backend] = fn(backend)
                best = min(best, time.perf_counter() - start)
            row[backend] = best
        ref = next(iter(outputs.values()))
        row["agree"] = all(np.array_equal(ref, o) for o in outputs.values())
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        results.append(row)
    return results


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json")
    args = p.parse_args(argv)
    results = run(args.repeat)
    backends = sorted(_kernels.BACKENDS)
    print(f"{'workload':30s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}  agree")
    for r in results:
        cells = "".join(f"{r[b]:11.4f}s" for b in backends)
        speed = f"{r['speedup']:9.1f}x" if "speedup" in r else f"{'-':>10s}"
        print(f"{r['workload']:30s}{cells}{speed}  {r['agree']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)
    return 0 if all(r["agree"] for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
