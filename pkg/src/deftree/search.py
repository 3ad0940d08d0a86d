"""Bounded forward deduction over proof trees.

``prove`` looks for an extension below a node whose successor chain ends in a
goal statement; ``refute`` looks for one where every new branch ends in a
contradictory node.  The search is iterative deepening over rule applications,
where depth counts the nodes added along one root-to-leaf path.  Every
candidate node is run through the rule validators before it is explored, so
anything returned re-checks valid.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from . import justification as J
from .rules.check import check_tree
from .rules.validators import check_node, deduction_target, definition_targets
from .script import serialize_nodes
from .syntax import (
    Kind, Letter, NotStructurallyDualizable, Quantified, Relation, Sign, Statement,
    constituents, dual_structural, is_elementary_equality, is_statement, letter_names, render, substitute_letter,
)
from .tree import Flavor, Link, ProofTree, indefinite_letters, statement_reason

RULE_NAMES = ("ElemAdd", "ElemSubst", "Branch", "Join", "Explode", "Definition", "Deduction")
DEFAULT_RULES = frozenset(RULE_NAMES)
FRESH_PREFIX = "_v"


class SearchError(Exception):
    pass


class InvalidContext(SearchError):
    pass


class GoalNotAdmissibleEverReachable(SearchError):
    pass


class _Abort(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 10
    max_new_letters: int = 3
    enabled_rules: frozenset = DEFAULT_RULES
    max_states: int = 200_000

    def __post_init__(self):
        object.__setattr__(self, "enabled_rules", frozenset(self.enabled_rules))
        if self.max_depth < 1 or self.max_states < 1:
            raise ValueError("max_depth and max_states must be positive")
        if self.max_new_letters < 0:
            raise ValueError("max_new_letters must not be negative")
        unknown = self.enabled_rules - DEFAULT_RULES
        if unknown:
            raise ValueError(f"unknown or unsearchable rules: {', '.join(sorted(unknown))}")


@dataclass
class Found:
    fragment: str
    nodes: list[str]
    tree: ProofTree
    depth: int
    states: int


@dataclass
class Exhausted:
    reason: str  # "bounds" or "max_states"
    depth: int
    states: int
    config: SearchConfig = field(default_factory=SearchConfig)

    def report(self) -> str:
        c = self.config
        return (f"exhausted ({self.reason}): searched to depth {self.depth} with {self.states} "
                f"states; max_depth={c.max_depth} max_new_letters={c.max_new_letters} "
                f"max_states={c.max_states} rules={','.join(sorted(c.enabled_rules))}")


Result = Union[Found, Exhausted]


# -- the search proper -------------------------------------------------------


class _Search:
    def __init__(self, tree: ProofTree, start: str, goal: Optional[Statement], cfg: SearchConfig):
        self.t = tree
        self.goal = goal
        self.cfg = cfg
        self.rules = cfg.enabled_rules
        self.states = 0
        self.failed: dict[frozenset, int] = {}
        self.preexisting_fresh = {n for n in tree.context(start).active if n.startswith(FRESH_PREFIX)}
        self.goal_letters = sorted(letter_names(goal)) if goal is not None else []
        # letters the goal itself quantifies over are never introduced as objects
        bound = set()
        if goal is not None:
            for _, sub in constituents(goal):
                if isinstance(sub, Quantified):
                    bound |= letter_names(sub.hypothesis)
        self.nameable = [n for n in self.goal_letters if n not in bound]

    # target test
    def reached(self, leaf: str) -> bool:
        if self.goal is None:
            return self.t.is_contradictory(leaf) is not None
        return self.t.content(leaf) == self.goal

    def solve(self, leaf: str, budget: int) -> bool:
        if self.reached(leaf):
            return True
        if budget <= 0:
            return False
        key = frozenset(self.t.content(a) for a in self.t.ancestors(leaf))
        if self.failed.get(key, -1) >= budget:
            return False
        for action in self.actions(leaf):
            if action[0] == "pair":
                ok = self._try_pair(leaf, action[1], action[2], budget)
            else:
                ok = self._try_chain(leaf, action[1], budget)
            if ok:
                return True
        self.failed[key] = max(budget, self.failed.get(key, -1))
        return False

    def _count(self) -> None:
        self.states += 1
        if self.states > self.cfg.max_states:
            raise _Abort

    def _try_chain(self, leaf: str, steps: list, budget: int) -> bool:
        first = None
        cur = leaf
        for k, (content, just) in enumerate(steps):
            if k >= budget:
                break
            self._count()
            cur = self.t.attach_successor(cur, content, just)
            first = first or cur
            if check_node(self.t, cur):
                break
            if k + 1 < len(steps):
                if self.reached(cur):
                    return True
                continue
            if self.solve(cur, budget - len(steps)):
                return True
            break
        if first is not None:
            self.t.remove_subtree(first)
        return False

    def _try_pair(self, leaf: str, left: Statement, right: Statement, budget: int) -> bool:
        self._count()
        lid, rid = self.t.attach_pair(leaf, left, right, J.Branch())
        if not check_node(self.t, lid) and self.solve(lid, budget - 1) and self.solve(rid, budget - 1):
            if self.goal is None:
                return True
            self._count()
            jid = self.t.attach_successor(leaf, self.goal, J.Join(left=lid, right=rid))
            if not check_node(self.t, jid):
                return True
            self.t.remove_subtree(jid)
        self.t.remove_pair(leaf)
        return False

    # candidate generation
    def actions(self, leaf: str) -> Iterator[tuple]:
        t = self.t
        ctx = t.context(leaf)
        anc = t.ancestors(leaf)
        contents = [t.content(a) for a in anc]
        present = set(contents)
        rules = self.rules

        def first_with(content) -> Optional[str]:
            for a, c in zip(anc, contents):
                if c == content:
                    return a
            return None

        new_letters = [n for n in self.nameable if ctx.flavor(n) is Flavor.INACTIVE]
        used = {n for n in ctx.active if n.startswith(FRESH_PREFIX)} - self.preexisting_fresh
        if len(used) < self.cfg.max_new_letters:
            k = 1
            while f"{FRESH_PREFIX}{k}" in ctx.active:
                k += 1
            new_letters.append(f"{FRESH_PREFIX}{k}")
        definite = sorted(n for n in ctx.active if ctx.is_definite(n))

        if self.goal is not None and "Explode" in rules:
            pair = t.is_contradictory(leaf)
            if pair is not None and statement_reason(self.goal, ctx) is None:
                yield ("chain", [(self.goal, J.Explode(d1=pair[0], d2=pair[1]))])

        quantified = [(a, c) for a, c in zip(anc, contents) if isinstance(c, Quantified)]

        if "Deduction" in rules:
            for of, u in quantified:
                if u.kind is not Kind.FORALL:
                    continue
                hyp = u.hypothesis
                if statement_reason(hyp, ctx) is None:
                    options = [(first_with(hyp), None)]
                elif isinstance(hyp, Quantified) or len(indefinite_letters(hyp, ctx)) != 1:
                    continue
                else:
                    (xi,) = indefinite_letters(hyp, ctx)
                    options = [(first_with(substitute_letter(hyp, xi, d)), d) for d in definite]
                for witness, let in options:
                    if witness is None:
                        continue
                    target, problem = deduction_target(t, leaf, of, witness, let)
                    if problem is None and target not in present:
                        yield ("chain", [(target, J.Deduction(of=of, witness=witness, let=let))])

        if "Definition" in rules:
            for of, e in quantified:
                if e.kind is not Kind.EXISTS:
                    continue
                for new in [None] + new_letters:
                    targets, problem = definition_targets(t, leaf, of, new)
                    if problem is None and not present.issuperset(targets):
                        justs = [J.Definition(of=of, step=k, new=new) for k in (1, 2)]
                        yield ("chain", list(zip(targets, justs)))

        if "ElemSubst" in rules:
            seen: set = set()
            for eq, c in zip(anc, contents):
                if not is_elementary_equality(c) or c.left == c.right:
                    continue
                for frm, to in ((c.left.name, c.right.name), (c.right.name, c.left.name)):
                    for src, s in zip(anc, contents):
                        if not is_statement(s) or frm not in letter_names(s):
                            continue
                        new_s = substitute_letter(s, frm, to)
                        if new_s in present or new_s in seen:
                            continue
                        seen.add(new_s)
                        yield ("chain", [(new_s, J.ElemSubst(eq=eq, src=src, from_=frm, to=to))])

        if "ElemAdd" in rules:
            relevant = set(self.goal_letters)
            for _, q in quantified:
                relevant |= letter_names(q)
            adds = []
            for d in definite:
                if d not in relevant:
                    continue
                for new in new_letters:
                    for sign in (Sign.EQ, Sign.NEQ):
                        adds.append(Relation(Letter(d), sign, Letter(new)))
                        if not new.startswith(FRESH_PREFIX):
                            adds.append(Relation(Letter(new), sign, Letter(d)))
            for n in definite + new_letters:
                adds.append(Relation(Letter(n), Sign.EQ, Letter(n)))
            for s in adds:
                if s not in present:
                    yield ("chain", [(s, J.ElemAdd())])

        if "Branch" in rules and (self.goal is None or "Join" in rules):
            cands: list[Statement] = []
            if self.goal is not None:
                cands.append(self.goal)
            cands.extend(q.hypothesis for _, q in quantified)
            seen_pairs: set = set()
            for x in cands:
                try:
                    y = dual_structural(x)
                except NotStructurallyDualizable:
                    continue
                if x in present or y in present or (x, y) in seen_pairs:
                    continue
                seen_pairs.add((x, y))
                yield ("pair", x, y)


# -- entry points -----------------------------------------------------------


def _chain_end(tree: ProofTree, start: str) -> str:
    cur = start
    while tree.node(cur).successor is not None:
        cur = tree.node(cur).successor
    return cur


def _validate(tree: ProofTree, start: str) -> None:
    if start not in tree:
        raise InvalidContext(f"no node {start!r}")
    report = check_tree(tree)
    if not report.valid:
        raise InvalidContext(f"tree has {len(report.violations)} violation(s)")


def _prepare(tree: ProofTree, start: str) -> str:
    end = _chain_end(tree, start)
    if not tree.node(end).is_leaf:
        raise InvalidContext(f"the successor chain of {start} ends in a case distinction at {end}")
    return end


def _remap(j: J.Justification, mapping: dict[str, str]) -> J.Justification:
    changes = {}
    for f in dataclasses.fields(j):
        if f.metadata.get("kind") == "node":
            v = getattr(j, f.name)
            if v is not None:
                changes[f.name] = mapping.get(v, v)
    return dataclasses.replace(j, **changes)


def _extract(original: ProofTree, work: ProofTree, end: str) -> tuple[ProofTree, list[str]]:
    """Copy the nodes the search added below ``end`` into ``original`` with tidy ids."""
    out = original.copy()
    mapping: dict[str, str] = {}
    added: list[str] = []
    for nid in work.preorder(end):
        if nid == end:
            continue
        node = work.node(nid)
        parent = mapping.get(node.parent, node.parent)
        if node.link is Link.SUCCESSOR:
            mapping[nid] = out.attach_successor(parent, node.content,
                                                _remap(node.justification, mapping))
            added.append(mapping[nid])
        elif node.link is Link.PAIR_LEFT:
            rid = work.node(node.parent).pair[1]
            mapping[nid], mapping[rid] = out.attach_pair(parent, node.content, work.content(rid),
                                                         J.Branch())
            added.append(mapping[nid])
        elif node.link is Link.PAIR_RIGHT:
            added.append(mapping[nid])
    return out, added


def _run(tree: ProofTree, start: str, goal: Optional[Statement], cfg: SearchConfig,
         done_already: bool) -> Result:
    _validate(tree, start)
    if done_already:
        return Found("", [], tree.copy(), 0, 0)
    end = _prepare(tree, start)
    work = tree.copy()
    search = _Search(work, end, goal, cfg)
    depth = 0
    try:
        for depth in range(1, cfg.max_depth + 1):
            if search.solve(end, depth):
                break
        else:
            return Exhausted("bounds", cfg.max_depth, search.states, cfg)
    except _Abort:
        return Exhausted("max_states", depth, search.states, cfg)
    out, added = _extract(tree, work, end)
    report = check_tree(out)
    if not report.valid:  # pragma: no cover - the validators vetted every step
        raise SearchError("search produced an extension that does not check: "
                          + "; ".join(v.message for v in report.violations))
    fragment = "\n".join(serialize_nodes(out, added)) + "\n"
    return Found(fragment, added, out, depth, search.states)


def prove(tree: ProofTree, from_: str, goal: Statement, cfg: SearchConfig = SearchConfig()) -> Result:
    """Extend ``tree`` so that the successor chain of ``from_`` reaches ``goal``."""
    if not is_statement(goal):
        raise GoalNotAdmissibleEverReachable("the goal must be a statement")
    if from_ not in tree:
        raise InvalidContext(f"no node {from_!r}")
    ctx = tree.context(from_)
    hopeful = ctx.with_definite(n for n in letter_names(goal) if ctx.flavor(n) is Flavor.INACTIVE)
    reason = statement_reason(goal, hopeful)
    if reason is not None:
        raise GoalNotAdmissibleEverReachable(f"`{render(goal)}` cannot become admissible: {reason}")
    return _run(tree, from_, goal, cfg, tree.deduces(from_, goal))


def refute(tree: ProofTree, from_: str, cfg: SearchConfig = SearchConfig()) -> Result:
    """Extend ``tree`` until every new branch below ``from_`` is contradictory."""
    if from_ not in tree:
        raise InvalidContext(f"no node {from_!r}")
    on_chain = any(tree.is_contradictory(n) is not None for n in tree.unconditional_descendants(from_))
    return _run(tree, from_, None, cfg, on_chain)


__all__ = [
    "SearchConfig", "Found", "Exhausted", "prove", "refute", "SearchError", "InvalidContext",
    "GoalNotAdmissibleEverReachable", "DEFAULT_RULES", "RULE_NAMES",
]
