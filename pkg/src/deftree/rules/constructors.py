"""Constructors: apply a rule at a leaf and attach the resulting node(s).

Constructors compute contents; they do not re-validate (``check_node`` does).
They raise ``RuleError`` when the rule's shape requirements cannot be met.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .. import justification as J
from ..syntax import (
    App, Letter, Property, Relation, Sign, Statement, Term, dual_structural,
    find_constituent_occurrences, map_terms, replace_at, substitute_letter, substitute_letter_with_term,
    tokens_of,
)
from ..tree import ProofTree, match_term_substitution
from .schemas import choice_source, choice_statements, fn_identity_source, restrict_statements
from .validators import choice_targets, deduction_target, definition_targets, restrict_targets


class RuleError(ValueError):
    pass


def _chain(tree: ProofTree, leaf: str, contents: Sequence, justifications: Sequence) -> list[str]:
    ids = []
    cur = leaf
    for c, j in zip(contents, justifications):
        cur = tree.attach_successor(cur, c, j)
        ids.append(cur)
    return ids


def apply_root(tree: ProofTree, name: str = "a", node_id: Optional[str] = None) -> str:
    return tree.add_root(Relation(Letter(name), Sign.EQ, Letter(name)), J.RootAxiom(), node_id)


def apply_assume(tree: ProofTree, content, parent: Optional[str] = None) -> str:
    if parent is None:
        return tree.add_root(content, J.Assume())
    return tree.attach_successor(parent, content, J.Assume())


def apply_elem_add(tree: ProofTree, leaf: str, statement: Relation, term: Optional[Term] = None) -> str:
    return tree.attach_successor(leaf, statement, J.ElemAdd(term=term))


def apply_elem_subst(tree: ProofTree, leaf: str, eq: str, src: str, from_: str, to: str) -> str:
    content = substitute_letter(tree.content(src), from_, to)
    return tree.attach_successor(leaf, content, J.ElemSubst(eq=eq, src=src, from_=from_, to=to))


def _fold_term(t: Term, term: Term, name: str) -> Term:
    if t == term:
        return Letter(name)
    if isinstance(t, App):
        return App(_fold_term(t.function, term, name), _fold_term(t.argument, term, name))
    return t


def fold_term(s: Statement, term: Term, name: str) -> Statement:
    """Replace every occurrence of the subterm ``term`` by the letter ``name``."""
    return map_terms(s, lambda t: _fold_term(t, term, name))


def apply_fn_subst(tree: ProofTree, leaf: str, eq: str, src: str, letter: str, term: Term) -> str:
    source = tree.content(src)
    if letter in tokens_of(source):
        raise RuleError(f"{letter} already occurs in the ancestor statement")
    content = fold_term(source, term, letter)
    return tree.attach_successor(leaf, content, J.FnSubst(eq=eq, src=src, letter=letter, term=term))


def apply_branch(tree: ProofTree, leaf: str, left: Statement,
                 right: Optional[Statement] = None) -> tuple[str, str]:
    if right is None:
        right = dual_structural(left)
    return tree.attach_pair(leaf, left, right, J.Branch())


def apply_join(tree: ProofTree, node: str, statement: Statement) -> str:
    pair = tree.node(node).pair
    if pair is None:
        raise RuleError(f"node {node} has no pair children")
    return tree.attach_successor(node, statement, J.Join(left=pair[0], right=pair[1]))


def apply_explode(tree: ProofTree, leaf: str, d1: str, d2: str, statement: Statement) -> str:
    return tree.attach_successor(leaf, statement, J.Explode(d1=d1, d2=d2))


def apply_definition(tree: ProofTree, leaf: str, of: str, new: Optional[str] = None,
                     steps: int = 2) -> list[str]:
    targets, problem = definition_targets(tree, leaf, of, new)
    if problem:
        raise RuleError(problem[1])
    justs = [J.Definition(of=of, step=k, new=new) for k in (1, 2)]
    return _chain(tree, leaf, targets[:steps], justs[:steps])


def apply_deduction(tree: ProofTree, leaf: str, of: str, witness: Optional[str] = None,
                    let: Optional[str] = None) -> str:
    if witness is None:
        for cand in tree.ancestors(leaf):
            target, problem = deduction_target(tree, leaf, of, cand, let)
            if not problem:
                witness = cand
                break
        else:
            raise RuleError("no ancestor witnesses the hypothesis")
    target, problem = deduction_target(tree, leaf, of, witness, let)
    if problem:
        raise RuleError(problem[1])
    return tree.attach_successor(leaf, target, J.Deduction(of=of, witness=witness, let=let))


def apply_property_intro(tree: ProofTree, leaf: str, prop: Property) -> str:
    return tree.attach_successor(leaf, prop, J.PropertyIntro())


def apply_property_copy(tree: ProofTree, leaf: str, of: str, letter: str, term: Term) -> str:
    source = tree.content(of)
    if not isinstance(source, Property):
        raise RuleError(f"{of} holds no property")
    content = substitute_letter_with_term(source, letter, term)
    if match_term_substitution(source, content, letter) != term:
        raise RuleError(f"{letter} does not occur in the property")
    return tree.attach_successor(leaf, content, J.PropertyIntro(of=of, letter=letter, term=term))


def apply_abbrev_subst(tree: ProofTree, leaf: str, stmt: str, prop: str, at: int = 0) -> str:
    host = tree.content(stmt)
    p = tree.content(prop)
    where = find_constituent_occurrences(host, p.defining)
    if not 0 <= at < len(where):
        raise RuleError("no such constituent occurrence")
    content = replace_at(host, where[at], p.abbreviation)
    return tree.attach_successor(leaf, content, J.AbbrevSubst(stmt=stmt, prop=prop, at=at))


def apply_choice(tree: ProofTree, leaf: str, of: str, new: str, d: Sequence[str],
                 steps: int = 6, step5: str = "diagram") -> list[str]:
    d1, d2, d3, d4, d5 = d
    justs = [J.Choice(of=of, step=k, new=new, d1=d1, d2=d2, d3=d3, d4=d4, d5=d5) for k in range(1, 7)]
    targets, problem = choice_targets(tree, leaf, justs[0], step5)
    if problem:
        raise RuleError(problem[1])
    return _chain(tree, leaf, targets[:steps], justs[:steps])


def apply_fn_identity(tree: ProofTree, leaf: str, of: str) -> str:
    src = fn_identity_source(tree.content(of))
    if src is None:
        raise RuleError("ancestor does not have the function identity shape")
    p, q, _ = src
    return tree.attach_successor(leaf, Relation(Letter(p), Sign.EQ, Letter(q)), J.FnIdentity(of=of))


def apply_restrict(tree: ProofTree, leaf: str, prop: str, g: str, new: str, steps: int = 4) -> list[str]:
    justs = [J.Restrict(prop=prop, g=g, new=new, step=k) for k in range(1, 5)]
    targets, problem = restrict_targets(tree, leaf, justs[0])
    if problem:
        raise RuleError(problem[1])
    return _chain(tree, leaf, targets[:steps], justs[:steps])


__all__ = [
    "RuleError", "apply_root", "apply_assume", "apply_elem_add", "apply_elem_subst",
    "apply_fn_subst", "apply_branch", "apply_join", "apply_explode", "apply_definition",
    "apply_deduction", "apply_property_intro", "apply_property_copy", "apply_abbrev_subst",
    "apply_choice", "apply_fn_identity", "apply_restrict", "fold_term",
    "choice_source", "choice_statements", "restrict_statements",
]
