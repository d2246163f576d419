"""Command-line interface: ``pacman-ca {simulate,trace,verify,density,blocking}``.

Exit codes: 0 when everything passed, 1 when a check failed, 2 on usage
errors. ``CA_SEED`` sets the default seed (0 otherwise).
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from contextlib import contextmanager


from .. import analysis
from ..core import evolve_window, find_blocking_column
from ..errors import CAError, ConfigParseError, UnknownSuite
from ..level2 import FRUIT_GLYPHS, LEVEL2_ALPHABET, evolve_level2, first, second
from ..pacman import PACMAN_ALPHABET, trace_particles
from .grammar import RULES, get_rule, parse_config, parse_range
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def default_seed() -> int:
    raw = os.environ.get("CA_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigParseError(f"CA_SEED must be an integer, got {raw!r}") from None


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cols(text: str | None, width: int, margin: int) -> tuple[int, int]:
    if text is None:
        if width < 1 or margin < 0:
            raise ConfigParseError("--width must be >= 1 and --margin >= 0")
        return -margin, width - 1
    lo, sep, hi = text.replace("..", ":").partition(":")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise ConfigParseError(f"--cols expects LO:HI, got {text!r}") from None
    if not sep or lo_i > hi_i:
        raise ConfigParseError(f"--cols expects LO:HI with LO <= HI, got {text!r}")
    return lo_i, hi_i


def _evolve(rule, spec, width, steps, keep_rows=None):
    if rule.alphabet == LEVEL2_ALPHABET and not keep_rows:
        return evolve_level2(spec, width, steps)
    return evolve_window(rule, spec, width, steps, keep_rows=keep_rows)


def render_grid(window, lo: int, hi: int) -> list[str]:
    """Rows of glyphs, time downward; level-2 rows show both coordinates side by side."""
    block = window.crop(lo, hi)
    a = window.rule.alphabet
    if a == LEVEL2_ALPHABET:
        return [PACMAN_ALPHABET.render(first(row)) + "  " + "".join(FRUIT_GLYPHS[q] for q in second(row))
                for row in block]
    return [a.render(row) for row in block]


def cmd_simulate(args) -> int:
    rule = get_rule(args.rule)
    spec = parse_config(args.config, rule.alphabet)
    lo, hi = _cols(args.cols, args.width, args.margin)
    width = max(-lo, hi, 0)
    win = _evolve(rule, spec, width, args.steps)
    with _output(args.output) as out:
        if args.format == "text":
            for line in render_grid(win, lo, hi):
                out.write(line + "\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["t", "i", "symbol"])
            tokens = rule.alphabet.uses_tokens
            block = win.crop(lo, hi)
            for t, row in enumerate(block):
                for i, c in zip(range(lo, hi + 1), row):
                    w.writerow([t, i, rule.alphabet.render([c], tokens=tokens)])
    return EXIT_OK


def cmd_trace(args) -> int:
    rule = get_rule("pacman")
    spec = parse_config(args.config, rule.alphabet)
    win = evolve_window(rule, spec, args.width, args.steps, keep_rows=True)
    with _output(args.output) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["particle_id", "t", "position"])
        for pid, tr in enumerate(trace_particles(win)):
            for t, pos in tr.path:
                w.writerow([pid, t, pos])
    return EXIT_OK


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.all else (args.suite or [])
    if not names:
        raise ConfigParseError("give --suite NAME (repeatable) or --all")
    params = {"horizon": args.horizon, "workers": args.workers}
    if args.m is not None:
        params["m"] = parse_range(args.m)
    reports = []
    for name in names:
        report = run_suite(name, seed=args.seed, **params)
        reports.append(report)
        for c in report.checks:
            print(f"{name}:{c.id}: {c.status}", file=sys.stderr)
    payload = [r.to_dict(timing=not args.no_timing) for r in reports]
    with _output(args.output) as out:
        json.dump(payload[0] if len(payload) == 1 else payload, out, indent=2, sort_keys=True)
        out.write("\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_density(args) -> int:
    rule = get_rule(args.rule)
    x = parse_config(args.config, rule.alphabet)
    perts = analysis.default_perturbations(x, args.m, seed=args.seed, n_random=args.perturbations)

    def evolve(spec, n, H):
        return _evolve(rule, spec, n, H)

    report = analysis.me_point_probe(rule, x, args.m, perts, args.horizon, evolve=evolve, workers=args.workers)
    with _output(args.output) as out:
        out.write(report.to_csv())
    summary = report.summary()
    summary["labels"] = [p.label for p in perts]
    if args.width:
        wx = evolve(x, args.width, args.horizon)
        summary["width"] = args.width
        summary["max_mean_divergence"] = max(
            analysis.mean_of_distances(analysis.orbit_distances(wx.rect, evolve(y, args.width, args.horizon).rect))
            for y in perts
        )
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_blocking(args) -> int:
    rule = get_rule(args.rule)
    a = rule.alphabet
    found = 0
    with _output(args.output) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["word", "offset", "evidence", "period", "preperiod"])
        for n in range(max(args.r, 1), args.maxlen + 1):
            for word in itertools.product(range(len(a)), repeat=n):
                res = find_blocking_column(rule, word, args.r, args.horizon)
                if res is None:
                    continue
                found += 1
                ev = res.evidence
                w.writerow([a.render(word, tokens=a.uses_tokens), res.offset, type(ev).__name__,
                            getattr(ev, "period", ""), getattr(ev, "preperiod", "")])
    print(f"{found} word(s) with a blocking column", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pacman-ca", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="evolve a configuration and print the space-time diagram")
    s.add_argument("--rule", default="pacman", choices=sorted(RULES))
    s.add_argument("--config", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--width", type=int, default=20, help="cells shown from coordinate 0 rightward")
    s.add_argument("--margin", type=int, default=1, help="cells shown left of coordinate 0")
    s.add_argument("--cols", help="explicit coordinate range LO:HI (overrides --width/--margin; write --cols=-3:3)")
    s.add_argument("--format", choices=["text", "csv"], default="text")
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("trace", help="per-particle trajectories as CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--width", type=int, default=20)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("verify", help="run verification suites and emit a JSON report")
    s.add_argument("--suite", action="append", help=f"one of: {', '.join(sorted(SUITES))}")
    s.add_argument("--all", action="store_true")
    s.add_argument("--m", help="parameter range, e.g. 2..12 or 0,1")
    s.add_argument("--horizon", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--no-timing", action="store_true", help="omit runtimes for byte-stable output")
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("density", help="divergence densities against adversarial perturbations (CSV)")
    s.add_argument("--rule", default="pacman", choices=["pacman", "pacman2"])
    s.add_argument("--config", default="doubling")
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--horizon", type=int, default=10_000)
    s.add_argument("--width", type=int, default=0, help="also report mean divergence at this metric half-width")
    s.add_argument("--perturbations", type=int, default=20, help="number of random-tail perturbations")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--json", help="write the JSON summary here")
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("blocking", help="search all words up to --maxlen for blocking columns")
    s.add_argument("--rule", default="pacman", choices=sorted(RULES))
    s.add_argument("--maxlen", type=int, default=4)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--horizon", type=int, default=2000)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_blocking)

    for sp in sub.choices.values():
        sp.add_argument("--seed", type=int, default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed is None:
            args.seed = default_seed()
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ConfigParseError, UnknownSuite) as exc:
        print(f"pacman-ca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CAError, ValueError) as exc:
        print(f"pacman-ca: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
