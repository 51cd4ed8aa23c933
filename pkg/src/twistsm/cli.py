"""Command-line interface.

Three commands, all driven by a common scenario configuration:

``verify``
    Run the full verification suite and report one line per check.
``fields``
    Build one one-form of each kind, project onto the selfadjoint part,
    and dump every extracted field.
``demo naive-first-order``
    Show the first-order defect distribution of the flavour-blind
    alternative representation next to its untwisted control.

Exit codes: 0 on success, 1 when at least one check fails, 2 on
configuration errors.  ``--report`` always writes the JSON report;
``--format`` selects what is printed on stdout.  Command-line flags
override scenario-file values, which override the defaults.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .report import (VERSION, ConfigError, ScenarioConfig, field_dump,
                     naive_violation_demo, run_suite, scenario_from_dict,
                     to_json, to_text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed (default 0)")
    parser.add_argument("--trials", type=int, default=None,
                        help="random trials per check (default 100)")
    parser.add_argument("--tol", type=float, default=None,
                        help="default residual tolerance (default 1e-10)")
    parser.add_argument("--scenario", metavar="PATH", default=None,
                        help="JSON scenario file (flags override its values)")
    parser.add_argument("--report", metavar="PATH", default=None,
                        help="write the JSON report to this file")
    parser.add_argument("--format", choices=("json", "text"), default="text",
                        help="stdout format (default text)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistsm",
        description=("Construct the twisted geometry of the Standard Model "
                     "fiber, extract its field content, and certify its "
                     "defining identities numerically."))
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser(
        "verify", help="run the verification suite (one line per check)")
    _add_common(p_verify)

    p_fields = sub.add_parser(
        "fields", help="extract and dump all fields of the three one-forms")
    _add_common(p_fields)

    p_demo = sub.add_parser(
        "demo", help="demonstrate a deliberate violation")
    p_demo.add_argument("topic", choices=("naive-first-order",),
                        help="which violation to demonstrate")
    _add_common(p_demo)
    return parser


def load_config(args: argparse.Namespace) -> ScenarioConfig:
    """Scenario file (if any) merged with command-line overrides."""
    obj: dict = {}
    if args.scenario is not None:
        try:
            with open(args.scenario, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"scenario file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"scenario file: invalid JSON: {exc}") from exc
    config = scenario_from_dict(obj)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.tol is not None:
        overrides["tol"] = args.tol
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        if args.command == "verify":
            result = run_suite(config)
        elif args.command == "fields":
            result = field_dump(config)
        else:
            result = naive_violation_demo(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # degenerate parameter combinations surface here (e.g. extraction
        # with a vanishing coupling); they are configuration problems
        print(f"error: {exc}", file=sys.stderr)
        return 2

    sys.stdout.write(to_json(result) if args.format == "json"
                     else to_text(result))
    if args.report is not None:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(to_json(result))
        except OSError as exc:
            print(f"error: report file: {exc}", file=sys.stderr)
            return 2
    if args.command == "verify" and not result["summary"]["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
