"""Whole-tree checking, lints, claims and the check report."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field

from .. import justification as J
from ..syntax import GREEK_NAMES, Statement, render
from ..tree import Flavor, ProofTree
from .validators import CheckOptions, Violation, check_node


@dataclass
class CheckReport:
    name: str
    rows: list[tuple[str, str, str]] = field(default_factory=list)  # (node, rule, text)
    violations: list[Violation] = field(default_factory=list)
    lints: list[Violation] = field(default_factory=list)
    contradictions: dict[str, tuple[str, str]] = field(default_factory=dict)
    assumptions: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def violations_at(self, nid: str) -> list[Violation]:
        return [v for v in self.violations if v.node == nid]

    def to_text(self) -> str:
        lines = [f"proof {self.name}"]
        by_node: dict[str, list[Violation]] = {}
        for v in self.violations:
            by_node.setdefault(v.node, []).append(v)
        for nid, rule, text in self.rows:
            mark = "FAIL" if nid in by_node else "ok"
            extra = ""
            if nid in self.contradictions:
                a, b = self.contradictions[nid]
                extra = f"  [contradiction {a}/{b}]"
            lines.append(f"{mark:4} {nid:6} {rule:14} {text}{extra}")
            for v in by_node.pop(nid, []):
                lines.append(f"     ! {v.clause}: {v.message}")
        for nid, items in by_node.items():
            for v in items:
                lines.append(f"FAIL {nid:6} {v.rule:14} ! {v.clause}: {v.message}")
        for v in self.lints:
            lines.append(f"lint {v.node:6} {v.clause}: {v.message}")
        if self.assumptions:
            lines.append("assumptions: " + " ".join(self.assumptions))
        verdict = "VALID" if self.valid else f"INVALID ({len(self.violations)} violation(s))"
        lines.append(f"result: {verdict}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "proof": self.name,
            "valid": self.valid,
            "nodes": len(self.rows),
            "violations": [v.as_dict() for v in self.violations],
            "lints": [v.as_dict() for v in self.lints],
            "contradictions": {k: list(v) for k, v in self.contradictions.items()},
            "assumptions": self.assumptions,
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def flavor_lints(tree: ProofTree) -> list[Violation]:
    """Letters whose flavor changes between a node and its child."""
    out = []
    for nid in tree.preorder():
        node = tree.node(nid)
        if node.parent is None:
            continue
        before = tree.context(node.parent)
        after = tree.context(nid)
        for name in sorted(before.active):
            a, b = before.flavor(name), after.flavor(name)
            if a is not b:
                out.append(Violation(nid, "lint", "lint.flavor_changed",
                                     f"letter {name} turns from {a.value} to {b.value}"))
    return out


def _is_greek(name: str) -> bool:
    return name in GREEK_NAMES or all(unicodedata.name(ch, "").startswith("GREEK") for ch in name)


def naming_lints(tree: ProofTree) -> list[Violation]:
    """Capitals for adjectives, latin lowercase for definite, greek for indefinite."""
    out = []
    seen: set[str] = set()
    for nid in tree.preorder():
        ctx = tree.context(nid)
        for name in sorted(ctx.active - seen):
            seen.add(name)
            if name.startswith(("_", "#")):
                continue
            flavor = ctx.flavor(name)
            greek = _is_greek(name)
            capital = name[0].isupper() and not greek
            if flavor is Flavor.ADJECTIVE:
                bad = not capital
            elif flavor is Flavor.DEFINITE:
                bad = capital or greek
            else:
                bad = not greek
            if bad:
                out.append(Violation(nid, "lint", "lint.naming",
                                     f"letter {name} is {flavor.value} where first used"))
    return out


def check_claims(tree: ProofTree) -> list[Violation]:
    out = []
    for claim in tree.claims:
        if claim.node not in tree:
            out.append(Violation(claim.node, "claim", "claim.unknown_node",
                                 f"claim names unknown node {claim.node}"))
        elif claim.kind == "deduces":
            if not tree.deduces(claim.node, claim.statement):
                out.append(Violation(claim.node, "claim", "claim.not_deduced",
                                     f"`{render(claim.statement)}` is not on the successor chain"))
        elif claim.kind == "refutes":
            open_leaves = [n for n in tree.leaves(claim.node) if tree.is_contradictory(n) is None]
            if open_leaves:
                out.append(Violation(claim.node, "claim", "claim.open_branch",
                                     "leaves without contradiction: " + " ".join(open_leaves)))
    return out


def check_tree(tree: ProofTree, options: CheckOptions = CheckOptions(),
               strict_naming: bool = False) -> CheckReport:
    report = CheckReport(tree.name)
    if tree.root is None:
        report.violations.append(Violation("-", "tree", "tree.empty", "tree has no nodes"))
        return report
    for nid in tree.preorder():
        node = tree.node(nid)
        rule = getattr(node.justification, "rule", "?")
        report.rows.append((nid, rule, render(node.content)))
        report.violations.extend(check_node(tree, nid, options))
        if isinstance(node.justification, J.Assume):
            report.assumptions.append(nid)
        pair = tree.is_contradictory(nid)
        if pair is not None:
            report.contradictions[nid] = pair
    report.violations.extend(check_claims(tree))
    report.lints.extend(flavor_lints(tree))
    naming = naming_lints(tree)
    if strict_naming:
        report.violations.extend(naming)
    else:
        report.lints.extend(naming)
    return report


def deduces(tree: ProofTree, start: str, goal: Statement) -> bool:
    return tree.deduces(start, goal)
