import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deftree.rules import (
    RuleError, apply_branch, apply_deduction, apply_definition, apply_elem_add, apply_elem_subst,
    apply_root, check_node, check_tree, naming_lints,
)
from deftree.script import parse_script, serialize_script
from deftree.search import (
    Exhausted, Found, GoalNotAdmissibleEverReachable, InvalidContext, SearchConfig, prove, refute,
)
from deftree.syntax import Kind, Letter, Quantified, Relation, Sign, dual_structural, is_elementary_equality
from deftree.syntax import parse_statement as P
from deftree.tree import ProofTree

from conftest import MUTANTS

THEOREM_GOALS = [("[ xi = xi ] xi = xi", 10), ("< xi = xi > [ eta = eta ] xi != eta", 12)]


def fresh_root(name: str = "a") -> ProofTree:
    t = ProofTree()
    apply_root(t, name)
    return t


def assumed(*statements: str) -> ProofTree:
    lines = ["proof ctx"]
    for i, s in enumerate(statements, 1):
        parent = f" of n{i - 1}" if i > 1 else ""
        lines.append(f"assume n{i}{parent}: {s}")
    return parse_script("\n".join(lines) + "\n")


# -- prove -----------------------------------------------------------------


@pytest.mark.parametrize("goal, bound", THEOREM_GOALS)
def test_theorem_goals_from_fresh_root(goal, bound):
    t = fresh_root()
    start = time.perf_counter()
    result = prove(t, t.root, P(goal), SearchConfig(max_depth=bound))
    assert time.perf_counter() - start < 30
    assert isinstance(result, Found) and result.depth <= bound
    assert check_tree(result.tree).valid
    assert result.tree.deduces(t.root, P(goal))


def test_fragment_appends_to_script():
    t = fresh_root()
    result = prove(t, t.root, P("[ xi = xi ] xi = xi"))
    text = serialize_script(t) + result.fragment
    again = parse_script(text)
    assert check_tree(again).valid and again.deduces(again.root, P("[ xi = xi ] xi = xi"))


def test_goal_already_on_chain(sample):
    result = prove(sample, "n1", P("c = b"))
    assert isinstance(result, Found)
    assert result.nodes == [] and result.fragment == "" and result.depth == 0


def test_exhausted_below_required_depth():
    t = fresh_root()
    result = prove(t, t.root, P("[ xi = xi ] xi = xi"), SearchConfig(max_depth=2))
    assert isinstance(result, Exhausted) and result.reason == "bounds"
    assert "max_depth=2" in result.report()


def test_state_cap():
    t = fresh_root()
    cfg = SearchConfig(max_states=5)
    result = prove(t, t.root, P("< xi = xi > [ eta = eta ] xi != eta"), cfg)
    assert isinstance(result, Exhausted) and result.reason == "max_states"


def test_determinism():
    goal = P("< xi = xi > [ eta = eta ] xi != eta")
    first = prove(fresh_root(), "n1", goal)
    second = prove(fresh_root(), "n1", goal)
    assert first.fragment == second.fragment and first.states == second.states


def test_rules_subset_respected():
    t = fresh_root()
    cfg = SearchConfig(enabled_rules={"ElemAdd", "Branch", "Join"})
    result = prove(t, t.root, P("[ xi = xi ] xi = xi"), cfg)
    assert isinstance(result, Exhausted)


# -- refute ----------------------------------------------------------------


def test_refute_second_russell_statement():
    t = assumed("[ eta = eta ] < xi = xi > [ < xi ( xi ) = xi > eta ( xi ) != xi ] "
                "< xi ( xi ) != xi > eta ( xi ) = xi")
    result = refute(t, t.root, SearchConfig(max_depth=10))
    assert isinstance(result, Found) and result.depth <= 10
    assert check_tree(result.tree).valid
    for leaf in result.tree.leaves():
        assert result.tree.is_contradictory(leaf) is not None


def test_refute_commuted_statement():
    t = assumed("[ eta = eta ] < xi = xi > eta != xi")
    result = refute(t, t.root)
    assert isinstance(result, Found) and result.depth <= 4


def test_refute_at_depth_zero():
    t = assumed("x = y", "x != y")
    result = refute(t, t.root)
    assert isinstance(result, Found) and result.depth == 0 and result.nodes == []


def test_refute_bare_root_exhausted():
    t = fresh_root()
    result = refute(t, t.root, SearchConfig(max_depth=4))
    assert isinstance(result, Exhausted)


# brute force: every elementary relation over a small letter pool, a few
# quantified case splits, substitution, definition and deduction.

POOL = ["a", "b", "c"]
RELS = [Relation(Letter(x), s, Letter(y)) for x in POOL for y in POOL for s in Sign]
QUANT = [P("< xi = xi > [ eta = eta ] xi != eta"), P("[ xi = xi ] xi = xi"), P("< xi = xi > xi != a")]


def _moves(t, leaf):
    anc = t.ancestors(leaf)
    for r in RELS:
        yield "succ", lambda w, r=r: apply_elem_add(w, leaf, r)
    split = []
    for s in RELS + QUANT:
        if dual_structural(s) not in split:
            split.append(s)
            yield "pair", lambda w, s=s: apply_branch(w, leaf, s)
    for e in anc:
        ce = t.content(e)
        if is_elementary_equality(ce) and ce.left != ce.right:
            for src in anc:
                for a, b in ((ce.left.name, ce.right.name), (ce.right.name, ce.left.name)):
                    yield "succ", lambda w, e=e, src=src, a=a, b=b: apply_elem_subst(w, leaf, e, src, a, b)
        if isinstance(ce, Quantified) and ce.kind is Kind.EXISTS:
            for new in [None] + POOL:
                yield "succ", lambda w, e=e, new=new: apply_definition(w, leaf, e, new)[-1]
        if isinstance(ce, Quantified) and ce.kind is Kind.FORALL:
            for let in [None] + POOL:
                yield "succ", lambda w, e=e, let=let: apply_deduction(w, leaf, e, None, let)


def brute_refutable(t, leaf, depth, memo):
    if t.is_contradictory(leaf) is not None:
        return True
    if depth == 0:
        return False
    key = (frozenset(t.content(n) for n in t.ancestors(leaf)), depth)
    if key not in memo:
        memo[key] = False
        memo[key] = any(_try(t, leaf, kind, mv, depth, memo) for kind, mv in _moves(t, leaf))
    return memo[key]


def _try(t, leaf, kind, move, depth, memo):
    w = t.copy()
    try:
        out = move(w)
    except (RuleError, ValueError):
        return False
    if kind == "pair":
        if check_node(w, out[0]):
            return False
        return all(brute_refutable(w, side, depth - 1, memo) for side in out)
    added = [n for n in w.ancestors(out) if n not in t]
    if len(added) > depth or any(check_node(w, n) for n in added):
        return False
    return brute_refutable(w, out, depth - len(added), memo)


def test_brute_force_oracle_finds_easy_refutation():
    t = assumed("a = a", "< xi = xi > xi != a")
    assert brute_refutable(t, "n2", 1, {})


def test_brute_force_bare_root_not_refutable_to_depth_four():
    t = fresh_root()
    assert not brute_refutable(t, t.root, 4, {})
    assert isinstance(refute(t, t.root, SearchConfig(max_depth=4)), Exhausted)


# -- soundness and monotonicity ----------------------------------------------------


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["b != a", "a = a", "[ xi = xi ] xi = xi", "< xi = xi > xi = xi",
                        "< xi = xi > [ eta = eta ] xi != eta", "b = b"]),
       st.integers(1, 6), st.integers(0, 3))
def test_found_extensions_recheck(goal, depth, letters):
    t = fresh_root()
    result = prove(t, t.root, P(goal), SearchConfig(max_depth=depth, max_new_letters=letters))
    if isinstance(result, Found):
        assert check_tree(result.tree).valid
        assert result.tree.deduces(t.root, P(goal))
        assert all(check_node(result.tree, n) == [] for n in result.nodes)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["[ xi = xi ] xi = xi", "b != a", "< xi = xi > xi = xi"]),
       st.integers(1, 5), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))
def test_monotone_in_bounds(goal, depth, letters, more_depth, more_letters):
    small = SearchConfig(max_depth=depth, max_new_letters=letters)
    big = SearchConfig(max_depth=depth + more_depth, max_new_letters=letters + more_letters)
    if isinstance(prove(fresh_root(), "n1", P(goal), small), Found):
        assert isinstance(prove(fresh_root(), "n1", P(goal), big), Found)


# -- errors ----------------------------------------------------------------


def test_invalid_context_rejected():
    bad = parse_script((MUTANTS / "sample_tree_signflip.pft").read_text())
    with pytest.raises(InvalidContext):
        prove(bad, bad.root, P("a = a"))
    with pytest.raises(InvalidContext):
        refute(bad, bad.root)


def test_chain_ending_in_case_split(sample):
    with pytest.raises(InvalidContext):
        prove(sample, "n1", P("[ xi = xi ] xi = xi"))


def test_unknown_start(sample):
    with pytest.raises(InvalidContext):
        prove(sample, "n99", P("a = a"))


def test_goal_never_admissible():
    t = fresh_root()
    with pytest.raises(GoalNotAdmissibleEverReachable):
        prove(t, t.root, P("A a"))


@pytest.mark.parametrize("kwargs", [
    dict(max_depth=0), dict(max_states=0), dict(max_new_letters=-1),
    dict(enabled_rules={"Choice"}),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


def test_fresh_letters_reserved():
    result = prove(fresh_root(), "n1", P("< xi = xi > [ eta = eta ] xi != eta"))
    assert "_v1" in result.fragment
    assert not [v for v in naming_lints(result.tree) if "_v" in v.message]
