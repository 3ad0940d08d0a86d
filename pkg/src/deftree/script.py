"""The ``.pft`` proof-script format.

One node per line, parents named explicitly::

    proof sample_tree
    root n1: a = a ; rule=root
    succ n2 of n1: b != a ; rule=elem_add
    pairL n4 of n3: a != b ; rule=branch
    pairR n9 of n3: a = b ; rule=branch
    assume n1: [ eta = eta ] < xi = xi > eta != xi
    claim n1 refutes
    claim n1 deduces: [ xi = xi ] xi = xi

``#`` starts a comment line; comments stay attached to the line below.
Justification values: node ids, letters, compact terms (``term=f(x)``) and
integers.  Canonical form is what :func:`serialize_script` writes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import justification as J
from .syntax import ParseError, Term, parse_content, parse_statement, parse_term, render, render_compact
from .tree import Claim, Link, ProofTree, TreeError


class ScriptError(Exception):
    code = "script_error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class DuplicateId(ScriptError):
    code = "duplicate_id"


class UnknownParent(ScriptError):
    code = "unknown_parent"


class UnknownRule(ScriptError):
    code = "unknown_rule"


class UnknownKey(ScriptError):
    code = "unknown_key"


class MalformedStatement(ScriptError):
    code = "malformed_statement"


class MalformedLine(ScriptError):
    code = "malformed_line"


class StructureError(ScriptError):
    code = "structure_error"


class EmptyTree(ScriptError):
    code = "empty_tree"


_NODE_RE = re.compile(
    r"^(?P<kind>root|succ|pairL|pairR|assume)\s+(?P<id>[\w.\-]+)"
    r"(?:\s+of\s+(?P<parent>[\w.\-]+))?\s*:(?P<rest>.*)$"
)
_CLAIM_RE = re.compile(r"^claim\s+(?P<id>[\w.\-]+)\s+(?P<kind>deduces|refutes)\s*(?P<rest>.*)$")
_IDENT_RE = re.compile(r"^[^\W\d]\w*$")
_ID_RE = re.compile(r"^[\w.\-]+$")


@dataclass
class NodeLine:
    lineno: int
    kind: str
    id: str
    parent: Optional[str]
    content: object
    justification: object
    comments: list[str] = field(default_factory=list)


@dataclass
class ScriptDocument:
    name: str
    lines: list[NodeLine]
    claims: list[Claim]
    header_comments: list[str] = field(default_factory=list)
    trailing_comments: list[str] = field(default_factory=list)


def _parse_value(kind: str, raw: str, key: str, lineno: int):
    if kind == "node":
        if not _ID_RE.match(raw):
            raise MalformedLine(f"bad node id {raw!r} for {key}", lineno)
        return raw
    if kind == "letter":
        if not _IDENT_RE.match(raw):
            raise MalformedLine(f"bad letter {raw!r} for {key}", lineno)
        return raw
    if kind == "term":
        try:
            return parse_term(raw)
        except ParseError as exc:
            raise MalformedStatement(f"bad term for {key}: {exc.message}", lineno) from None
    try:
        return int(raw)
    except ValueError:
        raise MalformedLine(f"{key} expects an integer, got {raw!r}", lineno) from None


def parse_justification(text: str, lineno: int = 0):
    pairs = {}
    for item in text.split():
        if "=" not in item:
            raise MalformedLine(f"expected key=value, got {item!r}", lineno)
        key, _, value = item.partition("=")
        if key in pairs:
            raise MalformedLine(f"key {key} given twice", lineno)
        pairs[key] = value
    rule = pairs.pop("rule", None)
    if rule is None:
        raise MalformedLine("justification lacks rule=", lineno)
    cls = J.JUSTIFICATIONS.get(rule)
    if cls is None or cls is J.Assume:
        raise UnknownRule(f"unknown rule {rule!r}", lineno)
    kwargs = {}
    for key, attr, kind, required in J.field_specs(cls):
        if key in pairs:
            kwargs[attr] = _parse_value(kind, pairs.pop(key), key, lineno)
        elif required:
            raise MalformedLine(f"rule {rule} requires {key}=", lineno)
    if pairs:
        raise UnknownKey(f"unknown key(s) for {rule}: {', '.join(sorted(pairs))}", lineno)
    return cls(**kwargs)


def format_justification(j) -> str:
    parts = [f"rule={j.rule}"]
    for key, kind, value in j.params():
        parts.append(f"{key}={render_compact(value) if kind == 'term' else value}")
    return " ".join(parts)


def _parse_content(text: str, lineno: int, offset: int):
    try:
        return parse_content(text)
    except ParseError as exc:
        col = offset + exc.column if exc.column is not None else None
        raise MalformedStatement(exc.message, lineno, col) from None


def parse_document(text: str) -> ScriptDocument:
    name = None
    lines: list[NodeLine] = []
    claims: list[Claim] = []
    header: list[str] = []
    pending: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            pending.append(line[1:].strip())
            continue
        if line.startswith("proof ") or line == "proof":
            if name is not None or lines:
                raise MalformedLine("the proof line comes first and only once", lineno)
            name = line[len("proof"):].strip() or "proof"
            header, pending = pending, []
            continue
        m = _CLAIM_RE.match(line)
        if m:
            stmt = None
            rest = m.group("rest").strip()
            if m.group("kind") == "deduces":
                if not rest.startswith(":"):
                    raise MalformedLine("expected ':' after 'deduces'", lineno)
                body = rest[1:]
                try:
                    stmt = parse_statement(body)
                except ParseError as exc:
                    raise MalformedStatement(exc.message, lineno) from None
            elif rest:
                raise MalformedLine("'refutes' takes no argument", lineno)
            claims.append(Claim(m.group("kind"), m.group("id"), stmt, tuple(pending)))
            pending = []
            continue
        m = _NODE_RE.match(line)
        if not m:
            raise MalformedLine(f"cannot read line {line!r}", lineno)
        kind, nid, parent = m.group("kind"), m.group("id"), m.group("parent")
        rest = m.group("rest")
        body, sep, just_text = rest.partition(";")
        offset = raw.index(":", raw.index(nid)) + 1
        content = _parse_content(body, lineno, offset)
        if nid in seen:
            raise DuplicateId(f"node id {nid} declared twice", lineno)
        seen.add(nid)
        if kind == "assume":
            if sep:
                raise MalformedLine("assume lines carry no justification", lineno)
            just = J.Assume()
        else:
            if not sep:
                raise MalformedLine("missing '; rule=...' justification", lineno)
            just = parse_justification(just_text, lineno)
        if (kind == "root") != (parent is None) and kind != "assume":
            raise MalformedLine("root lines have no parent; other lines need 'of <parent>'", lineno)
        lines.append(NodeLine(lineno, kind, nid, parent, content, just, pending))
        pending = []
    return ScriptDocument(name or "proof", lines, claims, header, pending)


def build_tree(doc: ScriptDocument) -> ProofTree:
    tree = ProofTree(doc.name)
    tree.header_comments = list(doc.header_comments)
    tree.trailing_comments = list(doc.trailing_comments)
    declared = {ln.id for ln in doc.lines}
    by_parent_right = {}
    for ln in doc.lines:
        if ln.kind == "pairR":
            if ln.parent in by_parent_right:
                raise StructureError(f"node {ln.parent} already has pair children", ln.lineno)
            by_parent_right[ln.parent] = ln
    for ln in doc.lines:
        try:
            if ln.parent is not None and ln.parent not in tree:
                if ln.kind == "pairR" and ln.id in tree:
                    continue
                raise UnknownParent(
                    f"parent {ln.parent} is {'declared later' if ln.parent in declared else 'undeclared'}",
                    ln.lineno)
            if ln.kind == "pairR":
                if ln.id not in tree:
                    raise StructureError(f"pairR {ln.id} has no preceding pairL", ln.lineno)
                continue
            if ln.parent is None:
                nid = tree.add_root(ln.content, ln.justification, ln.id)
            elif ln.kind == "pairL":
                right = by_parent_right.get(ln.parent)
                if right is None:
                    raise StructureError(f"pairL {ln.id} has no matching pairR", ln.lineno)
                nid, rid = tree.attach_pair(ln.parent, ln.content, right.content, ln.justification,
                                            right.justification, (ln.id, right.id))
                tree.node(rid).comments = list(right.comments)
            else:
                nid = tree.attach_successor(ln.parent, ln.content, ln.justification, ln.id)
            tree.node(nid).comments = list(ln.comments)
        except TreeError as exc:
            raise StructureError(str(exc), ln.lineno) from None
    tree.claims = list(doc.claims)
    return tree


def parse_script(text: str) -> ProofTree:
    doc = parse_document(text)
    if not doc.lines:
        raise EmptyTree("script declares no nodes")
    return build_tree(doc)


_KIND_OF_LINK = {Link.ROOT: "root", Link.SUCCESSOR: "succ", Link.PAIR_LEFT: "pairL",
                 Link.PAIR_RIGHT: "pairR"}


def node_line(tree: ProofTree, nid: str) -> str:
    node = tree.node(nid)
    j = node.justification
    if isinstance(j, J.Assume):
        head = f"assume {nid}" + (f" of {node.parent}" if node.parent else "")
        return f"{head}: {render(node.content)}"
    head = f"{_KIND_OF_LINK[node.link]} {nid}" + (f" of {node.parent}" if node.parent else "")
    return f"{head}: {render(node.content)} ; {format_justification(j)}"


def _comment_lines(comments) -> list[str]:
    return [f"# {c}".rstrip() for c in comments]


def serialize_nodes(tree: ProofTree, ids) -> list[str]:
    out = []
    for nid in ids:
        out.extend(_comment_lines(tree.node(nid).comments))
        out.append(node_line(tree, nid))
    return out


def serialize_claims(claims) -> list[str]:
    out = []
    for c in claims:
        out.extend(_comment_lines(c.comments))
        if c.kind == "deduces":
            out.append(f"claim {c.node} deduces: {render(c.statement)}")
        else:
            out.append(f"claim {c.node} {c.kind}")
    return out


def serialize_script(tree: ProofTree) -> str:
    if tree.root is None:
        raise EmptyTree("cannot serialize an empty tree")
    out = _comment_lines(tree.header_comments)
    out.append(f"proof {tree.name}")
    out.extend(serialize_nodes(tree, tree.preorder()))
    out.extend(serialize_claims(tree.claims))
    out.extend(_comment_lines(tree.trailing_comments))
    return "\n".join(out) + "\n"


def format_script(text: str) -> str:
    """Canonical formatting; idempotent."""
    return serialize_script(parse_script(text))


# -- rendering ---------------------------------------------------------------


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(tree: ProofTree, report=None) -> str:
    """DOT digraph: boxes per node, solid successor edges, dashed L/R pair edges."""
    contradictions = report.contradictions if report is not None else {
        n: p for n in tree.preorder() if (p := tree.is_contradictory(n)) is not None}
    failing = {v.node for v in report.violations} if report is not None else set()
    lines = [f'digraph "{_dot_escape(tree.name)}" {{',
             '  node [shape=box, fontname="monospace"];']
    for nid in tree.preorder():
        attrs = [f'label="{_dot_escape(render(tree.content(nid)))}"']
        if nid in contradictions:
            attrs.append('style=filled, fillcolor="#f4cccc"')
            attrs.append('xlabel="contradiction"')
        if nid in failing:
            attrs.append('color=red, penwidth=2')
        lines.append(f'  "{nid}" [{", ".join(attrs)}];')
    for parent, child, link in tree.edges():
        if link is Link.SUCCESSOR:
            lines.append(f'  "{parent}" -> "{child}" [style=solid, weight=10];')
        else:
            side = "L" if link is Link.PAIR_LEFT else "R"
            lines.append(f'  "{parent}" -> "{child}" [style=dashed, label="{side}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(tree: ProofTree, report=None) -> str:
    """Indented outline: successors stay in column, pair children indent."""
    contradictions = report.contradictions if report is not None else {
        n: p for n in tree.preorder() if (p := tree.is_contradictory(n)) is not None}
    out = []

    def walk(nid: str, indent: int, tag: str) -> None:
        while nid is not None:
            node = tree.node(nid)
            mark = "  [contradiction]" if nid in contradictions else ""
            out.append(f"{'    ' * indent}{tag}{render(node.content)}  ({nid}){mark}")
            tag = ""
            if node.pair:
                walk(node.pair[0], indent + 1, "L: ")
                walk(node.pair[1], indent + 1, "R: ")
            nid = node.successor

    if tree.root is not None:
        walk(tree.root, 0, "")
    return "\n".join(out) + "\n"
