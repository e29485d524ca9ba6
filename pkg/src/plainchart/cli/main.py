"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .builtins import available, builtin_examples
from .scenario import COMMANDS, INPUT_ERROR, Scenario, ScenarioError, load_scenario, run_scenario


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=("grevlex", "lex"), default=None,
                        help="monomial order (overrides the scenario)")
    common.add_argument("--seed", type=int, default=None, help="random seed (overrides the scenario)")
    common.add_argument("--budget", type=int, default=None,
                        help="maximum pair reductions per Groebner computation")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", type=Path, default=None, help="write the report here")

    parser = argparse.ArgumentParser(
        prog="plainchart", description="Exact plain-chart computations for blowups and projections.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=f"run a {name} scenario")
        p.add_argument("scenario", nargs="?", default="-",
                       help="scenario JSON file ('-' or omitted reads standard input)")
    ex = sub.add_parser("example", parents=[common], help="run a built-in example")
    ex.add_argument("name", choices=available())
    return parser


def _load(args) -> Scenario:
    if args.command == "example":
        return builtin_examples(args.name)
    text = sys.stdin.read() if args.scenario == "-" else Path(args.scenario).read_text()
    s = load_scenario(text)
    if s.command != args.command:
        raise ScenarioError(f"scenario command {s.command!r} does not match {args.command!r}")
    return s


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        s = _load(args)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if args.order is not None:
        s.options.order = args.order
    if args.seed is not None:
        s.options.seed = args.seed
    if args.budget is not None:
        s.options.budget = args.budget

    outcome = run_scenario(s)
    body = outcome.json() if args.format == "json" else outcome.text()
    if "error" in outcome.result:
        print(f"error: {outcome.result['error']}", file=sys.stderr)
        for hint in outcome.result.get("suggestions", ()):
            print(f"  hint: {hint}", file=sys.stderr)
        if args.format == "text":
            return outcome.status
    if args.output is not None:
        args.output.write_text(body)
    else:
        sys.stdout.write(body)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
