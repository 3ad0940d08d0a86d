"""One validator per rule.  Each ``check_*`` returns a list of violations
for a single node (``check_branch`` for a pair)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .. import justification as J
from ..syntax import (
    App, Kind, Letter, LetterIsAbbreviationHead, Property, Quantified, Relation, Sign,
    find_constituent_occurrences, is_elementary_equality, is_statement, letter_names,
    letters_of, render, replace_at, substitute_letter, substitute_letter_with_term,
)
from ..tree import Flavor, Link, ProofTree, indefinite_letters, property_reason, statement_reason
from .schemas import (
    STEP5_READINGS, choice_source, choice_statements, fn_identity_source, restrict_statements,
)


@dataclass(frozen=True)
class Violation:
    node: str
    rule: str
    clause: str
    message: str

    def as_dict(self) -> dict:
        return {"node": self.node, "rule": self.rule, "clause": self.clause,
                "message": self.message}


@dataclass(frozen=True)
class CheckOptions:
    choice_step5: str = "diagram"

    def __post_init__(self):
        if self.choice_step5 not in STEP5_READINGS:
            raise ValueError(f"choice_step5 must be one of {STEP5_READINGS}")


class _Findings:
    def __init__(self, tree: ProofTree, nid: str, rule: str):
        self.tree = tree
        self.nid = nid
        self.rule = rule
        self.items: list[Violation] = []

    def add(self, clause: str, message: str) -> None:
        self.items.append(Violation(self.nid, self.rule, f"{self.rule}.{clause}", message))

    def __bool__(self) -> bool:
        return bool(self.items)


def _parent_ctx(tree: ProofTree, nid: str):
    parent = tree.node(nid).parent
    return tree.context(parent) if parent is not None else None


def _stmt_of(tree: ProofTree, ref: Optional[str], out: _Findings, key: str):
    """Content of a referenced node if it is a statement, recording problems."""
    if ref is None:
        out.add(f"missing_{key}", f"parameter {key} is required")
        return None
    if ref not in tree:
        out.add("unknown_reference", f"{key}={ref} names no node")
        return None
    c = tree.content(ref)
    if not is_statement(c):
        out.add(f"{key}_not_statement", f"{key}={ref} holds a property, not a statement")
        return None
    return c


def _mismatch(out: _Findings, got, expected, what: str = "content") -> None:
    out.add("content_mismatch", f"{what} is `{render(got)}`, rule yields `{render(expected)}`")


def _step1(tree: ProofTree, nid: str) -> str:
    """Walk back to the first step of a multi-step rule instance."""
    cur = nid
    while tree.node(cur).justification.step > 1:
        parent = tree.node(cur).parent
        prev = tree.node(parent).justification
        if not (isinstance(prev, J.Justification) and tree.node(cur).justification.same_instance(prev)):
            break
        cur = parent
    return cur


# -- rule 1 ----------------------------------------------------------------


def check_root(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "root")
    s = tree.content(nid)
    if tree.node(nid).parent is not None:
        out.add("not_root", "the root axiom applies only to the root")
    elif not isinstance(s, Relation):
        out.add("not_relation", f"root must be a reflexive equality, got `{render(s)}`")
    elif not s.is_elementary:
        out.add("not_elementary", "root relation contains functional brackets")
    elif s.sign is not Sign.EQ:
        out.add("not_equality", "root relation is an inequality")
    elif not s.is_reflexive:
        out.add("not_reflexive", f"`{render(s)}` is not reflexive")
    return out.items


def check_elem_add(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "elem_add")
    ctx = _parent_ctx(tree, nid)
    s = tree.content(nid)
    term = tree.node(nid).justification.term
    if not isinstance(s, Relation):
        out.add("not_relation", "elementary addition adds a relation")
        return out.items
    if term is not None:
        sides = [(s.left, s.right), (s.right, s.left)]
        ok = any(other == term and isinstance(lone, Letter) for lone, other in sides)
        if not ok or not isinstance(term, App):
            out.add("term_mismatch", "term parameter is not one side of the relation")
            return out.items
    if s.is_elementary and term is None:
        a, b = s.left.name, s.right.name
        if a == b:
            if s.sign is not Sign.EQ:
                out.add("reflexive_inequality", "a reflexive statement must be an equality")
            elif ctx.flavor(a) not in (Flavor.DEFINITE, Flavor.INACTIVE):
                out.add("bad_flavor", f"reflexive letter {a} is {ctx.flavor(a).value}")
            return out.items
        flavors = sorted([ctx.flavor(a).value, ctx.flavor(b).value])
        if flavors != ["definite", "inactive"]:
            out.add("bad_flavor", f"needs one definite and one inactive letter; {a} is "
                    f"{ctx.flavor(a).value}, {b} is {ctx.flavor(b).value}")
        return out.items
    # functional variant: inactive letter against a term of definite letters
    for lone, other in ((s.left, s.right), (s.right, s.left)):
        if isinstance(lone, Letter) and isinstance(other, App) and ctx.flavor(lone.name) is Flavor.INACTIVE:
            bad = sorted(n for n in letter_names(other) if not ctx.is_definite(n))
            if bad:
                out.add("term_not_definite", f"term letters not definite: {', '.join(bad)}")
            return out.items
    out.add("no_variant", f"`{render(s)}` fits no form of elementary addition")
    return out.items


# -- rule 2 ----------------------------------------------------------------


def check_elem_subst(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "elem_subst")
    j = tree.node(nid).justification
    eq = _stmt_of(tree, j.eq, out, "eq")
    src = _stmt_of(tree, j.src, out, "src")
    if out:
        return out.items
    if j.from_ == j.to:
        out.add("same_letter", "substitution needs two different letters")
        return out.items
    if not is_elementary_equality(eq) or {eq.left.name, eq.right.name} != {j.from_, j.to}:
        out.add("eq_not_equality", f"`{render(eq)}` is not an elementary equality between "
                f"{j.from_} and {j.to}")
        return out.items
    expected = substitute_letter(src, j.from_, j.to)
    if tree.content(nid) != expected:
        _mismatch(out, tree.content(nid), expected)
    return out.items


def check_fn_subst(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "fn_subst")
    j = tree.node(nid).justification
    eq = _stmt_of(tree, j.eq, out, "eq")
    src = _stmt_of(tree, j.src, out, "src")
    if out:
        return out.items
    ctx = _parent_ctx(tree, nid)
    lone = Letter(j.letter)
    if not (isinstance(eq, Relation) and eq.sign is Sign.EQ
            and {(eq.left, eq.right), (eq.right, eq.left)} & {(lone, j.term)}) or j.term == lone:
        out.add("eq_not_equality", f"`{render(eq)}` is not an equality between {j.letter} "
                f"and `{render(j.term)}`")
        return out.items
    if not ctx.is_definite(j.letter):
        out.add("letter_not_definite", f"{j.letter} is {ctx.flavor(j.letter).value}")
    s = tree.content(nid)
    if not is_statement(s):
        out.add("not_statement", "substitution adds a statement")
        return out.items
    r = statement_reason(s, ctx)
    if r is not None:
        out.add("not_admissible", r)
    try:
        expanded = substitute_letter_with_term(s, j.letter, j.term)
    except LetterIsAbbreviationHead as exc:
        out.add("letter_is_head", str(exc))
        return out.items
    if expanded != src:
        out.add("content_mismatch", f"replacing {j.letter} by `{render(j.term)}` gives "
                f"`{render(expanded)}`, not the ancestor `{render(src)}`")
    return out.items


# -- rule 3 ----------------------------------------------------------------


def check_branch(tree: ProofTree, left: str, right: str) -> list[Violation]:
    out = _Findings(tree, left, "branch")
    parent = tree.node(left).parent
    for nid in (left, right):
        if not isinstance(tree.node(nid).justification, J.Branch):
            out.nid = nid
            out.add("not_branch", "both pair children carry the branch justification")
    out.nid = left
    a, b = tree.content(left), tree.content(right)
    if not (is_statement(a) and is_statement(b)):
        out.add("not_statement", "pair children hold statements")
        return out.items
    if not tree.are_dual(a, b, parent):
        out.add("not_dual", f"`{render(a)}` and `{render(b)}` are not dual")
    ctx = tree.context(parent)
    for nid, s in ((left, a), (right, b)):
        r = statement_reason(s, ctx)
        if r is not None:
            out.nid = nid
            out.add("not_admissible", r)
    return out.items


def check_join(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "join")
    j = tree.node(nid).justification
    parent = tree.node(nid).parent
    if tree.node(parent).pair != (j.left, j.right):
        out.add("not_parent_pair", f"left={j.left} right={j.right} are not the parent's pair children")
        return out.items
    s = tree.content(nid)
    if not is_statement(s):
        out.add("not_statement", "join adds a statement")
        return out.items
    r = statement_reason(s, tree.context(parent))
    if r is not None:
        out.add("not_admissible", r)
    for side in (j.left, j.right):
        if not tree.deduces(side, s):
            out.add("not_in_branch", f"branch {side} has no unconditional descendant `{render(s)}`")
    return out.items


def check_explode(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "explode")
    j = tree.node(nid).justification
    a = _stmt_of(tree, j.d1, out, "d1")
    b = _stmt_of(tree, j.d2, out, "d2")
    if out:
        return out.items
    parent = tree.node(nid).parent
    if not tree.are_dual(a, b, parent):
        out.add("not_dual", f"`{render(a)}` and `{render(b)}` are not dual")
    s = tree.content(nid)
    if not is_statement(s):
        out.add("not_statement", "explosion adds a statement")
        return out.items
    r = statement_reason(s, tree.context(parent))
    if r is not None:
        out.add("not_admissible", r)
    return out.items


# -- rules 4 and 5 -----------------------------------------------------------


def definition_targets(tree: ProofTree, leaf: str, of: str, new: Optional[str]):
    """The two statements a definition from ``of`` adds below ``leaf``.

    Returns ``(statements, problem)``; exactly one is None.
    """
    e = tree.content(of)
    if not (isinstance(e, Quantified) and e.kind is Kind.EXISTS):
        return None, ("of_not_existential", f"`{render(e)}` is not an existential statement")
    ctx = tree.context(leaf)
    if statement_reason(e.hypothesis, ctx) is None:
        if new is not None:
            return None, ("unexpected_new", "hypothesis is admissible; no new letter is introduced")
        return [e.hypothesis, e.conclusion], None
    if isinstance(e.hypothesis, Quantified):
        return None, ("hypothesis_quantified", "hypothesis is quantified and not admissible")
    loose = indefinite_letters(e.hypothesis, ctx)
    if len(loose) != 1:
        return None, ("indefinite_count", f"hypothesis has {len(loose)} indefinite letters")
    if new is None:
        return None, ("missing_new", "hypothesis not admissible; a new letter is required")
    if ctx.flavor(new) is not Flavor.INACTIVE:
        return None, ("new_not_inactive", f"{new} is {ctx.flavor(new).value}, not inactive")
    (xi,) = loose
    return [substitute_letter(e.hypothesis, xi, new), substitute_letter(e.conclusion, xi, new)], None


def check_definition(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "definition")
    j = tree.node(nid).justification
    if _stmt_of(tree, j.of, out, "of") is None:
        return out.items
    if j.step not in (1, 2):
        out.add("bad_step", f"step {j.step} outside 1..2")
        return out.items
    first = _step1(tree, nid)
    targets, problem = definition_targets(tree, tree.node(first).parent, j.of, j.new)
    if problem:
        out.add(*problem)
        return out.items
    if tree.content(nid) != targets[j.step - 1]:
        _mismatch(out, tree.content(nid), targets[j.step - 1])
    return out.items


def deduction_target(tree: ProofTree, leaf: str, of: str, witness: Optional[str], let: Optional[str]):
    """``(statement, problem)`` for a deduction from universal ``of``."""
    u = tree.content(of)
    if not (isinstance(u, Quantified) and u.kind is Kind.FORALL):
        return None, ("of_not_universal", f"`{render(u)}` is not a universal statement")
    if witness is None:
        return None, ("missing_witness", "a witness ancestor is required")
    w = tree.content(witness)
    ctx = tree.context(leaf)
    if statement_reason(u.hypothesis, ctx) is None:
        if let is not None:
            return None, ("unexpected_let", "hypothesis is admissible; no letter is instantiated")
        if w != u.hypothesis:
            return None, ("witness_mismatch", f"witness `{render(w)}` is not the hypothesis "
                          f"`{render(u.hypothesis)}`")
        return u.conclusion, None
    if isinstance(u.hypothesis, Quantified):
        return None, ("hypothesis_quantified", "hypothesis is quantified and not admissible")
    loose = indefinite_letters(u.hypothesis, ctx)
    if len(loose) != 1:
        return None, ("indefinite_count", f"hypothesis has {len(loose)} indefinite letters")
    if let is None:
        return None, ("missing_let", "hypothesis not admissible; a definite letter is required")
    if not ctx.is_definite(let):
        return None, ("let_not_definite", f"{let} is {ctx.flavor(let).value}, not definite")
    (xi,) = loose
    want = substitute_letter(u.hypothesis, xi, let)
    if w != want:
        return None, ("witness_mismatch", f"witness `{render(w)}` is not `{render(want)}`")
    return substitute_letter(u.conclusion, xi, let), None


def check_deduction(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "deduction")
    j = tree.node(nid).justification
    if _stmt_of(tree, j.of, out, "of") is None:
        return out.items
    if j.witness is not None and _stmt_of(tree, j.witness, out, "witness") is None:
        return out.items
    target, problem = deduction_target(tree, tree.node(nid).parent, j.of, j.witness, j.let)
    if problem:
        out.add(*problem)
    elif tree.content(nid) != target:
        _mismatch(out, tree.content(nid), target)
    return out.items


# -- rules 6 and 7 -----------------------------------------------------------


def check_property_intro(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "property_intro")
    j = tree.node(nid).justification
    prop = tree.content(nid)
    if not isinstance(prop, Property):
        out.add("not_property", "property introduction adds a property")
        return out.items
    ctx = _parent_ctx(tree, nid)
    head_flavor = ctx.flavor(prop.head)
    if j.of is None:
        if j.letter is not None or j.term is not None:
            out.add("partial_copy", "letter/term given without the source property")
        elif head_flavor is not Flavor.INACTIVE:
            out.add("head_not_inactive", f"head {prop.head} is {head_flavor.value}; a modified "
                    "copy must name its source with of/letter/term")
        else:
            r = property_reason(prop, ctx)
            if r is not None:
                out.add("not_admissible", r)
        return out.items
    source = tree.content(j.of)
    if not isinstance(source, Property):
        out.add("of_not_property", f"of={j.of} holds no property")
        return out.items
    if j.letter is None or j.term is None:
        out.add("missing_parameter", "a modified copy needs letter and term")
        return out.items
    if head_flavor is not Flavor.ADJECTIVE or source.head != prop.head:
        out.add("head_not_adjective", f"head {prop.head} must be the adjective of the source property")
        return out.items
    r = property_reason(prop, ctx, source=source, replaced=j.letter, term=j.term)
    if r is not None:
        out.add("not_modified_copy", f"not the copy of `{render(source)}` with {j.letter} "
                f"replaced by `{render(j.term)}`")
    return out.items


def check_abbrev_subst(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "abbrev_subst")
    j = tree.node(nid).justification
    host = _stmt_of(tree, j.stmt, out, "stmt")
    if out:
        return out.items
    prop = tree.content(j.prop)
    if not isinstance(prop, Property):
        out.add("prop_not_property", f"prop={j.prop} holds no property")
        return out.items
    where = find_constituent_occurrences(host, prop.defining)
    if not 0 <= j.at < len(where):
        out.add("occurrence_out_of_range", f"at={j.at}, but `{render(prop.defining)}` occurs "
                f"{len(where)} time(s) as a constituent")
        return out.items
    expected = replace_at(host, where[j.at], prop.abbreviation)
    if tree.content(nid) != expected:
        _mismatch(out, tree.content(nid), expected)
    return out.items


# -- rules 8 to 10 -----------------------------------------------------------


def choice_targets(tree: ProofTree, leaf: str, j: J.Choice, step5: str = "diagram"):
    u = tree.content(j.of)
    src = choice_source(u)
    if src is None:
        return None, ("of_shape", f"`{render(u)}` is not `< xi = xi > [ eta = eta ] ...`")
    xi, eta, concl = src
    ctx = tree.context(leaf)
    for name in (xi, eta):
        if ctx.flavor(name) is not Flavor.INDEFINITE:
            return None, ("not_indefinite", f"{name} is {ctx.flavor(name).value}, not indefinite")
    if ctx.flavor(j.new) is not Flavor.INACTIVE:
        return None, ("new_not_inactive", f"{j.new} is {ctx.flavor(j.new).value}, not inactive")
    ds = (j.d1, j.d2, j.d3, j.d4, j.d5)
    for name in ds:
        if not ctx.is_definite(name):
            return None, ("not_definite", f"{name} is {ctx.flavor(name).value}, not definite")
    try:
        return choice_statements(concl, xi, eta, j.new, ds, step5), None
    except LetterIsAbbreviationHead as exc:
        return None, ("letter_is_head", str(exc))


def check_choice(tree: ProofTree, nid: str, options: CheckOptions = CheckOptions()) -> list[Violation]:
    out = _Findings(tree, nid, "choice")
    j = tree.node(nid).justification
    if _stmt_of(tree, j.of, out, "of") is None:
        return out.items
    if not 1 <= j.step <= 6:
        out.add("bad_step", f"step {j.step} outside 1..6")
        return out.items
    first = _step1(tree, nid)
    targets, problem = choice_targets(tree, tree.node(first).parent, j, options.choice_step5)
    if problem:
        out.add(*problem)
    elif tree.content(nid) != targets[j.step - 1]:
        _mismatch(out, tree.content(nid), targets[j.step - 1])
    return out.items


def check_fn_identity(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "fn_identity")
    j = tree.node(nid).justification
    u = _stmt_of(tree, j.of, out, "of")
    if u is None:
        return out.items
    src = fn_identity_source(u)
    if src is None:
        out.add("of_shape", f"`{render(u)}` is not `< p(xi) != q(xi) > [ p(xi) = p ] q(xi) = q`")
        return out.items
    p, q, xi = src
    ctx = _parent_ctx(tree, nid)
    for name in (p, q):
        if not ctx.is_definite(name):
            out.add("not_definite", f"{name} is {ctx.flavor(name).value}, not definite")
    if not ctx.is_indefinite(xi) or ctx.flavor(xi) is Flavor.INACTIVE:
        out.add("not_indefinite", f"{xi} is {ctx.flavor(xi).value}, not indefinite")
    expected = Relation(Letter(p), Sign.EQ, Letter(q))
    if tree.content(nid) != expected:
        _mismatch(out, tree.content(nid), expected)
    return out.items


def restrict_targets(tree: ProofTree, leaf: str, j: J.Restrict):
    prop = tree.content(j.prop)
    if not isinstance(prop, Property):
        return None, ("prop_not_property", f"prop={j.prop} holds no property")
    abbr = prop.abbreviation
    if len(abbr.args) != 1 or not isinstance(abbr.args[0], Letter):
        return None, ("abbreviation_shape", f"abbreviation `{render(abbr)}` does not consist of two letters")
    xi = abbr.args[0].name
    ctx = tree.context(leaf)
    if ctx.flavor(xi) is not Flavor.INDEFINITE:
        return None, ("not_indefinite", f"{xi} is {ctx.flavor(xi).value}, not indefinite")
    if not ctx.is_definite(j.g):
        return None, ("not_definite", f"{j.g} is {ctx.flavor(j.g).value}, not definite")
    if ctx.flavor(j.new) is not Flavor.INACTIVE:
        return None, ("new_not_inactive", f"{j.new} is {ctx.flavor(j.new).value}, not inactive")
    return restrict_statements(abbr, xi, j.g, j.new), None


def check_restrict(tree: ProofTree, nid: str) -> list[Violation]:
    out = _Findings(tree, nid, "restrict")
    j = tree.node(nid).justification
    if j.prop not in tree:
        out.add("unknown_reference", f"prop={j.prop} names no node")
        return out.items
    if not 1 <= j.step <= 4:
        out.add("bad_step", f"step {j.step} outside 1..4")
        return out.items
    first = _step1(tree, nid)
    targets, problem = restrict_targets(tree, tree.node(first).parent, j)
    if problem:
        out.add(*problem)
    elif tree.content(nid) != targets[j.step - 1]:
        _mismatch(out, tree.content(nid), targets[j.step - 1])
    return out.items


# -- structural checks shared by every node ----------------------------------


def check_structure(tree: ProofTree, nid: str) -> list[Violation]:
    """Placement, reference and step-order checks that precede rule checks."""
    node = tree.node(nid)
    j = node.justification
    rule = getattr(j, "rule", "unknown")
    out = _Findings(tree, nid, rule)
    if not isinstance(j, J.Justification):
        out.add("missing", "node carries no justification")
        return out.items
    if isinstance(j, J.Assume):
        if node.parent is not None and not isinstance(tree.node(node.parent).justification, J.Assume):
            out.add("not_preamble", "assumptions must form the initial chain from the root")
        elif node.link not in (Link.ROOT, Link.SUCCESSOR):
            out.add("not_preamble", "assumptions are successors")
        return out.items
    if isinstance(j, J.RootAxiom):
        return out.items
    if node.parent is None:
        out.add("rule_at_root", "the root is justified by the root axiom or an assumption")
        return out.items
    if isinstance(j, J.Branch) != (node.link in (Link.PAIR_LEFT, Link.PAIR_RIGHT)):
        out.add("wrong_link", "branch justifies exactly the pair children")
        return out.items
    strict = set(tree.strict_ancestors(nid))
    for key, ref in j.refs():
        if isinstance(j, J.Join):
            continue
        if ref not in tree:
            out.add("unknown_reference", f"{key}={ref} names no node")
        elif ref not in strict:
            out.add("not_ancestor", f"{key}={ref} is not an ancestor")
    if j.multi_step and not out:
        limit = J.STEP_COUNTS[j.rule]
        if not 1 <= j.step <= limit:
            out.add("bad_step", f"step {j.step} outside 1..{limit}")
        elif j.step > 1:
            prev = tree.node(node.parent).justification
            if not (isinstance(prev, type(j)) and j.same_instance(prev) and prev.step == j.step - 1):
                out.add("step_order", f"step {j.step} must directly follow step {j.step - 1} "
                        "of the same rule instance")
    return out.items


VALIDATORS: dict[type, Callable] = {
    J.RootAxiom: check_root,
    J.ElemAdd: check_elem_add,
    J.ElemSubst: check_elem_subst,
    J.FnSubst: check_fn_subst,
    J.Join: check_join,
    J.Explode: check_explode,
    J.Definition: check_definition,
    J.Deduction: check_deduction,
    J.PropertyIntro: check_property_intro,
    J.AbbrevSubst: check_abbrev_subst,
    J.Choice: check_choice,
    J.FnIdentity: check_fn_identity,
    J.Restrict: check_restrict,
}


def check_node(tree: ProofTree, nid: str, options: CheckOptions = CheckOptions()) -> list[Violation]:
    """Every violation charged to ``nid``.  A pair is checked at its left child."""
    found = check_structure(tree, nid)
    if found:
        return found
    node = tree.node(nid)
    j = node.justification
    if isinstance(j, J.Assume):
        return []
    if isinstance(j, J.Branch):
        if node.link is Link.PAIR_LEFT:
            return check_branch(tree, *tree.node(node.parent).pair)
        return []
    if isinstance(j, J.Choice):
        return check_choice(tree, nid, options)
    return VALIDATORS[type(j)](tree, nid)
