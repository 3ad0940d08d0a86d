"""Command line front end.

Exit status: 0 success, 1 violations or goal not found, 2 parse or usage error.
Results go to standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .rules.check import check_tree, naming_lints
from .rules.validators import CheckOptions
from .rules.schemas import STEP5_READINGS
from .script import ScriptError, export_dot, format_script, parse_script, render_text
from .search import (
    DEFAULT_RULES, RULE_NAMES, Found, SearchConfig, SearchError, GoalNotAdmissibleEverReachable,
    prove, refute,
)
from .syntax import ParseError, parse_statement
from .tree import ProofTree

OK, FAILED, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Usage(f"{path}: cannot read: {exc}") from None


def _load(path: str) -> ProofTree:
    text = _read(path)
    try:
        return parse_script(text)
    except ScriptError as exc:
        raise _Usage(f"{path}: {exc}") from None


def _options(args) -> CheckOptions:
    return CheckOptions(choice_step5=args.choice_step5)


def cmd_check(args) -> int:
    tree = _load(args.path)
    report = check_tree(tree, _options(args), strict_naming=args.strict_naming)
    sys.stdout.write(report.to_json() if args.report == "machine" else report.to_text())
    return OK if report.valid else FAILED


def cmd_render(args) -> int:
    tree = _load(args.path)
    report = check_tree(tree, _options(args))
    sys.stdout.write(export_dot(tree, report) if args.format == "dot" else render_text(tree, report))
    return OK


def _config(args) -> SearchConfig:
    rules = DEFAULT_RULES
    if args.rules:
        rules = frozenset(r.strip() for r in args.rules.split(",") if r.strip())
    try:
        return SearchConfig(max_depth=args.max_depth, max_new_letters=args.max_new_letters,
                            enabled_rules=rules, max_states=args.max_states)
    except ValueError as exc:
        raise _Usage(str(exc)) from None


def _search_result(result) -> int:
    if isinstance(result, Found):
        sys.stdout.write(result.fragment if result.nodes else "")
        _err(f"found at depth {result.depth} after {result.states} states, "
             f"{len(result.nodes)} node(s) added")
        return OK
    print(result.report())
    return FAILED


def _start(tree: ProofTree, args) -> str:
    start = args.from_ or tree.root
    if start not in tree:
        raise _Usage(f"no node {start!r} in {args.path}")
    return start


def cmd_prove(args) -> int:
    tree = _load(args.path)
    try:
        goal = parse_statement(args.goal)
    except ParseError as exc:
        raise _Usage(f"--goal: {exc}") from None
    cfg = _config(args)
    start = _start(tree, args)
    try:
        return _search_result(prove(tree, start, goal, cfg))
    except GoalNotAdmissibleEverReachable as exc:
        _err(str(exc))
        return FAILED
    except SearchError as exc:
        raise _Usage(str(exc)) from None


def cmd_refute(args) -> int:
    tree = _load(args.path)
    cfg = _config(args)
    start = _start(tree, args)
    try:
        return _search_result(refute(tree, start, cfg))
    except SearchError as exc:
        raise _Usage(str(exc)) from None


def cmd_fmt(args) -> int:
    status = OK
    for path in args.paths:
        text = _read(path)
        try:
            out = format_script(text)
        except ScriptError as exc:
            raise _Usage(f"{path}: {exc}") from None
        if args.lint:
            for v in naming_lints(parse_script(out)):
                _err(f"{path}: lint {v.node}: {v.message}")
        if out == text:
            continue
        if args.check:
            _err(f"{path}: not formatted")
            status = FAILED
        else:
            Path(path).write_text(out, encoding="utf-8")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deftree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def step5(sp):
        sp.add_argument("--choice-step5", choices=STEP5_READINGS, default="diagram",
                        help="reading of the fifth choice statement (default: diagram)")

    c = sub.add_parser("check", help="validate every node of a proof script")
    c.add_argument("path")
    c.add_argument("--report", choices=("text", "machine"), default="text")
    c.add_argument("--strict-naming", action="store_true", help="naming lints become violations")
    step5(c)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("render", help="draw a proof tree")
    r.add_argument("path")
    r.add_argument("--format", choices=("dot", "text"), default="text")
    step5(r)
    r.set_defaults(func=cmd_render)

    def bounds(sp):
        d = SearchConfig()
        sp.add_argument("--from", dest="from_", default=None, help="start node (default: root)")
        sp.add_argument("--max-depth", type=int, default=d.max_depth)
        sp.add_argument("--max-new-letters", type=int, default=d.max_new_letters)
        sp.add_argument("--max-states", type=int, default=d.max_states)
        sp.add_argument("--rules", default=None, help="comma list from " + ",".join(RULE_NAMES))

    pr = sub.add_parser("prove", help="search for a deduction of a goal")
    pr.add_argument("path")
    pr.add_argument("--goal", required=True)
    bounds(pr)
    pr.set_defaults(func=cmd_prove)

    rf = sub.add_parser("refute", help="search for contradictions in every branch")
    rf.add_argument("path")
    bounds(rf)
    rf.set_defaults(func=cmd_refute)

    f = sub.add_parser("fmt", help="rewrite scripts in canonical form")
    f.add_argument("paths", nargs="+")
    f.add_argument("--check", action="store_true", help="report instead of rewriting")
    f.add_argument("--lint", action="store_true", help="print naming lints")
    f.set_defaults(func=cmd_fmt)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        _err(str(exc))
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
