import re

import pytest

from deftree import justification as J
from deftree.rules import check_tree
from deftree.script import (
    DuplicateId, EmptyTree, MalformedStatement, ScriptError, StructureError, UnknownKey, UnknownParent,
    UnknownRule, export_dot, format_script, parse_script, render_text, serialize_script,
)
from deftree.syntax import parse_statement as P
from deftree.tree import Link, ProofTree

from conftest import CORPUS_FILES, ROOT, load

GOLDEN = ROOT / "tests" / "golden"
ids = dict(ids=lambda p: p.stem)


def _boxes(dot: str) -> int:
    return len(re.findall(r'^\s+"[^"]+" \[label=', dot, re.M))


def _edges(dot: str) -> int:
    return dot.count("->")


# -- parsing -----------------------------------------------------------------


def test_successor_line():
    t = parse_script("proof t\nroot n1: a = a ; rule=root\nsucc n2 of n1: b != a ; rule=elem_add\n")
    assert t.node("n2").parent == "n1" and t.node("n2").link is Link.SUCCESSOR
    assert t.content("n2") == P("b != a")


def test_sample_tree_shape(sample):
    assert len(list(sample.preorder())) == 11
    assert len(sample.edges()) == 10


@pytest.mark.parametrize("text, error", [
    ("proof t\nroot n1: a = a ; rule=root\nsucc n1 of n1: b != a ; rule=elem_add\n", DuplicateId),
    ("proof t\nroot n1: a = a ; rule=root\nsucc n2 of n9: b != a ; rule=elem_add\n", UnknownParent),
    ("proof t\nroot n1: a = a ; rule=magic\n", UnknownRule),
    ("proof t\nroot n1: a = a ; rule=root colour=red\n", UnknownKey),
    ("proof t\nroot n1: a = ; rule=root\n", MalformedStatement),
    ("proof t\nroot n1: a = a ; rule=root\npairL n2 of n1: a = a ; rule=branch\n", StructureError),
    ("", EmptyTree),
    ("proof t\n# nothing here\n", EmptyTree),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_script(text)


def test_malformed_statement_reports_position():
    with pytest.raises(MalformedStatement) as info:
        parse_script("proof t\nroot n1: a = a ; rule=root\nsucc n2 of n1: [ b != a ; rule=elem_add\n")
    assert "3" in str(info.value)


def test_empty_tree_serialization():
    with pytest.raises(ScriptError):
        serialize_script(ProofTree())


# -- round trip and formatting -------------------------------------------------------


@pytest.mark.parametrize("path", CORPUS_FILES, **ids)
def test_serialize_parse_byte_identity(path):
    text = path.read_text()
    assert serialize_script(parse_script(text)) == text


@pytest.mark.parametrize("path", CORPUS_FILES, **ids)
def test_format_idempotent(path):
    text = path.read_text()
    once = format_script(text)
    assert format_script(once) == once == text


def test_format_spacing():
    text = "proof t\nroot n1: a=a ; rule=root\nsucc   n2 of n1:   b!=a ;rule=elem_add\n"
    out = format_script(text)
    assert "succ n2 of n1: b != a ; rule=elem_add" in out
    assert format_script(out) == out


def test_format_preserves_verdict():
    text = load("sample_tree")
    messy = serialize_script(text).replace(" != ", "!=").replace(" = ", "=")
    assert check_tree(parse_script(messy)).valid == check_tree(parse_script(format_script(messy))).valid


def test_parameters_survive_round_trip(theorem):
    again = parse_script(serialize_script(theorem))
    for nid in theorem.preorder():
        assert again.node(nid).justification == theorem.node(nid).justification
        assert again.content(nid) == theorem.content(nid)
    assert again.node("n8").justification == J.Deduction(of="n5", witness="n7", let="y")


def test_claims_survive_round_trip(theorem):
    again = parse_script(serialize_script(theorem))
    assert again.claims == theorem.claims and len(again.claims) == 2


def test_unicode_input_formats_to_ascii():
    out = format_script("proof t\nroot n1: ξ=ξ ; rule=root\n")
    assert "root n1: ξ = ξ ; rule=root" in out


# -- rendering -----------------------------------------------------------------


def test_dot_counts(sample):
    dot = export_dot(sample, check_tree(sample))
    assert dot.startswith('digraph "sample_tree" {') and dot.rstrip().endswith("}")
    assert _boxes(dot) == 11 and _edges(dot) == 10
    assert dot.count('label="L"') == 2 and dot.count('label="R"') == 2


def test_dot_single_root():
    t = parse_script("proof t\nroot n1: a = a ; rule=root\n")
    dot = export_dot(t)
    assert _boxes(dot) == 1 and _edges(dot) == 0


@pytest.mark.parametrize("name", ["russell_first", "russell_second"])
def test_russell_leaves_marked(name):
    tree = load(name)
    dot = export_dot(tree, check_tree(tree))
    text = render_text(tree, check_tree(tree))
    for leaf in tree.leaves():
        assert re.search(rf'^\s+"{leaf}" \[.*xlabel="contradiction"', dot, re.M), leaf
        assert re.search(rf"\({leaf}\)  \[contradiction\]$", text, re.M), leaf


@pytest.mark.parametrize("path", CORPUS_FILES, **ids)
def test_render_golden(path):
    tree = parse_script(path.read_text())
    report = check_tree(tree)
    assert export_dot(tree, report) == (GOLDEN / f"{path.stem}.dot").read_text()
    assert render_text(tree, report) == (GOLDEN / f"{path.stem}.txt").read_text()
