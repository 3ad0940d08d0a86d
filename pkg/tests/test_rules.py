import random

import pytest

from deftree import justification as J
from deftree.rules import (
    CheckOptions, RuleError, apply_abbrev_subst, apply_fn_identity, apply_restrict, check_node,
    check_tree,
)
from deftree.script import parse_script
from deftree.syntax import complexity, is_statement, parse_statement as P
from deftree.tree import ProofTree

from conftest import CORPUS_FILES, load
from rule_cases import RULES

RULE_NAMES = sorted(RULES)


def tree_of(*lines: str) -> ProofTree:
    return parse_script("proof t\n" + "\n".join(lines) + "\n")


def clauses(tree: ProofTree, nid: str) -> list[str]:
    return [v.clause for v in check_node(tree, nid)]


# -- rule 1 ----------------------------------------------------------------


@pytest.mark.parametrize("text, clause", [
    ("a = a", None),
    ("a != a", "root.not_equality"),
    ("a = b", "root.not_reflexive"),
])
def test_root_oracles(text, clause):
    t = tree_of(f"root n1: {text} ; rule=root")
    assert clauses(t, "n1") == ([clause] if clause else [])


def test_elem_add_oracles():
    t = tree_of(
        "root n1: a = a ; rule=root",
        "succ n2 of n1: b != a ; rule=elem_add",
        "succ n3 of n2: b = b ; rule=elem_add",
        "succ n4 of n3: c = d ; rule=elem_add",
    )
    assert clauses(t, "n2") == [] and clauses(t, "n3") == []
    assert clauses(t, "n4") == ["elem_add.bad_flavor"]


@pytest.mark.parametrize("sign", ["=", "!="])
@pytest.mark.parametrize("flip", [False, True])
def test_elem_add_functional_variant(sign, flip):
    rel = f"f ( x ) {sign} h" if flip else f"h {sign} f ( x )"
    t = tree_of(
        "root n1: x = x ; rule=root",
        "succ n2 of n1: f = f ; rule=elem_add",
        f"succ n3 of n2: {rel} ; rule=elem_add term=f(x)",
    )
    assert clauses(t, "n3") == []


# -- rule 2 ----------------------------------------------------------------


SUBST_BASE = (
    "root n1: a = a ; rule=root",
    "succ n2 of n1: b != a ; rule=elem_add",
    "succ n3 of n2: b = b ; rule=elem_add",
    "pairL n4 of n3: a != b ; rule=branch",
    "pairR n5 of n3: a = b ; rule=branch",
)


@pytest.mark.parametrize("line, ok", [
    ("succ n6 of n5: b != b ; rule=elem_subst eq=n5 src=n2 from=a to=b", True),
    ("succ n6 of n5: a != a ; rule=elem_subst eq=n5 src=n2 from=b to=a", True),
    ("succ n6 of n5: a = a ; rule=elem_subst eq=n5 src=n2 from=b to=a", False),
    ("succ n6 of n5: b != b ; rule=elem_subst eq=n2 src=n2 from=a to=b", False),
])
def test_elem_subst_oracles(line, ok):
    t = tree_of(*SUBST_BASE, line)
    assert (clauses(t, "n6") == []) is ok


def test_elem_subst_reflexive_image(theorem):
    t = tree_of(
        "root n1: x = x ; rule=root",
        "succ n2 of n1: y != x ; rule=elem_add",
        "pairL n3 of n2: x = y ; rule=branch",
        "succ n4 of n3: y = y ; rule=elem_subst eq=n3 src=n1 from=x to=y",
        "pairR n5 of n2: x != y ; rule=branch",
    )
    assert check_tree(t).valid


FN_BASE = (
    "root n1: x = x ; rule=root",
    "succ n2 of n1: f = f ; rule=elem_add",
    "succ n3 of n2: g = g ; rule=elem_add",
)


@pytest.mark.parametrize("eq", ["h = f ( x )", "f ( x ) = h"])
def test_fn_subst_oracle_both_orientations(eq):
    t = tree_of(
        *FN_BASE,
        f"succ n4 of n3: {eq} ; rule=elem_add term=f(x)",
        "pairL n5 of n4: f ( x ) != g ; rule=branch",
        "succ n6 of n5: h != g ; rule=fn_subst eq=n4 src=n5 letter=h term=f(x)",
        "pairR n7 of n4: f ( x ) = g ; rule=branch",
    )
    assert check_tree(t).valid


def test_fn_subst_identity_case_and_mismatch():
    t = tree_of(
        *FN_BASE,
        "succ n4 of n3: h = f ( x ) ; rule=elem_add term=f(x)",
        "succ n5 of n4: g != x ; rule=elem_add",
    )
    ok = t.attach_successor("n5", P("g != x"), J.FnSubst(eq="n4", src="n5", letter="h",
                                                          term=P("h = f ( x )").right))
    assert clauses(t, ok) == []
    bad = t.attach_successor(ok, P("h = g"), J.FnSubst(eq="n4", src="n5", letter="h",
                                                       term=P("h = f ( x )").right))
    assert clauses(t, bad) == ["fn_subst.content_mismatch"]


# -- rule 3 ----------------------------------------------------------------


def test_branch_oracles(sample, theorem):
    assert clauses(sample, "n4") == []
    assert clauses(theorem, "n2") == []
    t = tree_of("root n1: a = a ; rule=root",
                "succ n2 of n1: b != a ; rule=elem_add",
                "pairL n3 of n2: a = b ; rule=branch",
                "pairR n4 of n2: a = b ; rule=branch")
    assert clauses(t, "n3") == ["branch.not_dual"]


def test_join_oracles(sample, theorem):
    assert clauses(sample, "n8") == []
    assert clauses(theorem, "n10") == []
    t = sample.copy()
    t.replace_content("n8", P("b != b"))
    assert "join.not_in_branch" in clauses(t, "n8")


def test_explode_oracles(sample, theorem):
    assert clauses(sample, "n7") == []
    assert clauses(theorem, "n14") == []
    t = sample.copy()
    t.remove_subtree("n7")
    bad = t.attach_successor("n6", P("a != b"), J.Explode(d1="n2", d2="n6"))
    assert clauses(t, bad) == ["explode.not_dual"]


# -- rules 4 and 5 -----------------------------------------------------------


def test_definition_oracles(theorem):
    assert theorem.content("n4") == P("x = x")
    assert theorem.content("n5") == P("< eta = eta > x = eta")
    assert clauses(theorem, "n4") == [] and clauses(theorem, "n5") == []
    second = load("russell_second")
    assert clauses(second, "n5") == [] and clauses(second, "n6") == []
    first = load("russell_first")
    # step 1 without step 2
    assert first.node("n10").is_leaf and clauses(first, "n10") == []


def test_definition_step_two_needs_step_one(theorem):
    t = theorem.copy()
    t.remove_subtree("n4")
    bad = t.attach_successor("n3", P("< eta = eta > x = eta"), J.Definition(of="n3", step=2, new="x"))
    assert clauses(t, bad) == ["definition.step_order"]


def test_deduction_oracles(theorem):
    assert theorem.content("n8") == P("x = y") and clauses(theorem, "n8") == []
    assert theorem.content("n13") == P("a != a") and clauses(theorem, "n13") == []
    first = load("russell_first")
    assert first.content("n9") == P("[ x ( x ) != x ] y != x") and clauses(first, "n9") == []


# -- rules 6 and 7 -----------------------------------------------------------


PROP_BASE = (
    "root n1: x = x ; rule=root",
    "succ n2 of n1: f = f ; rule=elem_add",
    "succ n3 of n2: A xi eta : xi = eta ; rule=property_intro",
)


def test_property_intro_oracles():
    t = tree_of(*PROP_BASE,
                "succ n4 of n3: A xi f ( xi ) : xi = f ( xi ) ; rule=property_intro of=n3 letter=eta term=f(xi)")
    assert clauses(t, "n3") == [] and clauses(t, "n4") == []
    t = tree_of(*PROP_BASE, "succ n4 of n3: f xi : xi = xi ; rule=property_intro")
    assert clauses(t, "n4") != []


def test_abbrev_subst_oracles():
    t = tree_of(*PROP_BASE,
                "pairL n4 of n3: < xi = xi > [ eta = eta ] xi = eta ; rule=branch",
                "pairR n5 of n3: [ xi = xi ] < eta = eta > xi != eta ; rule=branch")
    nid = apply_abbrev_subst(t, "n4", "n4", "n3", 0)
    assert t.content(nid) == P("< xi = xi > [ eta = eta ] A xi eta")
    assert clauses(t, nid) == []
    with pytest.raises(RuleError):
        apply_abbrev_subst(t, nid, "n4", "n3", 1)
    bad = t.attach_successor(nid, P("A xi eta"), J.AbbrevSubst(stmt="n4", prop="n3", at=1))
    assert clauses(t, bad) == ["abbrev_subst.occurrence_out_of_range"]


def test_abbrev_subst_whole_statement():
    t = tree_of("root n1: g = g ; rule=root",
                "succ n2 of n1: A : g = g ; rule=property_intro")
    nid = apply_abbrev_subst(t, "n2", "n1", "n2", 0)
    assert t.content(nid) == P("A") and clauses(t, nid) == []


# -- rules 8 to 10 -----------------------------------------------------------


def test_choice_schematic_statements():
    t = load("choice_schematic")
    assert [clauses(t, f"n{k}") for k in range(6, 12)] == [[]] * 6
    assert t.content("n11") == P("< f ( xi ) != f > A xi f ( xi )")


def test_choice_step5_readings():
    t = load("choice_schematic")
    assert check_tree(t).valid
    assert not check_tree(t, CheckOptions(choice_step5="prose")).valid
    t.replace_content("n10", P("< f ( xi ) = f > [ xi ( eta ) != xi ] < g ( eta ) != g > h ( xi ( eta ) ) != h"))
    assert clauses(t, "n10") == ["choice.content_mismatch"]
    assert check_node(t, "n10", CheckOptions(choice_step5="prose")) == []
    with pytest.raises(ValueError):
        CheckOptions(choice_step5="both")


def test_fn_identity_printed_example():
    t = load("function_identity")
    assert t.content("n4") == P("f = g") and clauses(t, "n4") == []


def test_fn_identity_same_letter():
    t = tree_of("root n1: f = f ; rule=root",
                "pairL n2 of n1: < f ( xi ) != f ( xi ) > [ f ( xi ) = f ] f ( xi ) = f ; rule=branch",
                "pairR n3 of n1: [ f ( xi ) != f ( xi ) ] < f ( xi ) = f > f ( xi ) != f ; rule=branch")
    nid = apply_fn_identity(t, "n2", "n2")
    assert t.content(nid) == P("f = f") and clauses(t, nid) == []


def test_fn_identity_mismatched_arguments():
    t = tree_of("root n1: f = f ; rule=root",
                "succ n2 of n1: g = g ; rule=elem_add",
                "pairL n3 of n2: < f ( xi ) != g ( eta ) > [ f ( xi ) = f ] g ( eta ) = g ; rule=branch",
                "pairR n4 of n2: [ f ( xi ) != g ( eta ) ] < f ( xi ) = f > g ( eta ) != g ; rule=branch",
                "succ n5 of n3: f = g ; rule=fn_identity of=n3")
    assert clauses(t, "n5") == ["fn_identity.of_shape"]


def test_restrict_schematic_statements():
    t = load("restrict_schematic")
    assert [clauses(t, f"n{k}") for k in range(5, 9)] == [[]] * 4
    assert t.content("n7") == P("< g ( xi ) != g > < A xi > f ( xi ) != f")


def test_restrict_rejects_three_letter_abbreviation():
    t = tree_of("root n1: g = g ; rule=root",
                "succ n2 of n1: A xi eta : xi = eta ; rule=property_intro",
                "pairL n3 of n2: < xi = xi > [ eta = eta ] xi = eta ; rule=branch",
                "pairR n4 of n2: [ xi = xi ] < eta = eta > xi != eta ; rule=branch")
    with pytest.raises(RuleError):
        apply_restrict(t, "n3", "n2", "g", "f")
    bad = t.attach_successor("n3", P("f = f"), J.Restrict(prop="n2", g="g", new="f", step=1))
    assert clauses(t, bad) == ["restrict.abbreviation_shape"]


def test_restrict_steps_out_of_order():
    t = load("restrict_schematic")
    t.remove_subtree("n5")
    bad = t.attach_successor("n4", P("< f ( xi ) != f > f ( xi ) = g ( xi )"),
                             J.Restrict(prop="n2", g="g", new="f", step=2))
    assert clauses(t, bad) == ["restrict.step_order"]


# -- structure ---------------------------------------------------------------


def test_reference_must_be_ancestor(sample):
    t = sample.copy()
    t.remove_subtree("n7")
    bad = t.attach_successor("n6", P("a != b"), J.Explode(d1="n3", d2="n4"))
    assert clauses(t, bad) == ["explode.not_ancestor"]


def test_assumptions_only_in_preamble(sample):
    t = sample.copy()
    bad = t.attach_successor("n7", P("a = a"), J.Assume())
    assert clauses(t, bad) == ["assume.not_preamble"]


# -- constructor and validator agreement ------------------------------------------------


@pytest.mark.parametrize("rule", RULE_NAMES)
def test_legal_applications_accepted(rule):
    legal, _ = RULES[rule]
    for seed in range(50):
        tree, added = legal(random.Random(seed))
        assert all(check_node(tree, n) == [] for n in added), (rule, seed)
        assert check_tree(tree).valid, (rule, seed)


@pytest.mark.parametrize("rule", RULE_NAMES)
def test_illegal_applications_rejected(rule):
    _, illegal = RULES[rule]
    for seed in range(50):
        tree, nid = illegal(random.Random(seed))
        found = check_node(tree, nid)
        assert found, (rule, seed)
        expected_rule = "branch" if tree.node(nid).justification.rule == "branch" else rule
        assert found[0].rule == expected_rule


@pytest.mark.parametrize("rule", ["definition", "deduction", "choice", "fn_identity", "restrict",
                                  "abbrev_subst"])
def test_rule_output_admissible(rule):
    legal, _ = RULES[rule]
    for seed in range(50):
        tree, added = legal(random.Random(seed))
        for n in added:
            content = tree.content(n)
            if is_statement(content):
                assert tree.is_admissible(content, n), (rule, seed, n)


# -- invariants over the corpus ----------------------------------------------------


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_complexity_descent(path):
    tree = parse_script(path.read_text())
    for nid in tree.preorder():
        j = tree.node(nid).justification
        if isinstance(j, (J.Definition, J.Deduction)):
            assert complexity(tree.content(nid)) < complexity(tree.content(j.of))


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_prefix_legality(path):
    tree = parse_script(path.read_text())
    multi = [n for n in tree.preorder() if tree.node(n).justification.multi_step]
    for nid in multi:
        cut = tree.copy()
        if cut.node(nid).pair is not None:
            cut.remove_pair(nid)
        if cut.node(nid).successor is not None:
            cut.remove_subtree(cut.node(nid).successor)
        cur = nid
        while cut.node(cur).justification.multi_step:
            assert check_node(cut, cur) == [], (path.stem, nid, cur)
            if cut.node(cur).justification.step == 1:
                break
            cur = cut.node(cur).parent


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_corpus_valid(path):
    assert check_tree(parse_script(path.read_text())).violations == []
