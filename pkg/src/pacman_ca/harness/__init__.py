"""Text grammar, verification suites, reports and the command-line tool."""
from .grammar import RULES, get_rule, parse_config, parse_range, render_config
from .report import Check, VerificationReport
from .suites import SUITES, run_suite

__all__ = ["RULES", "get_rule", "parse_config", "parse_range", "render_config",
           "Check", "VerificationReport", "SUITES", "run_suite"]
