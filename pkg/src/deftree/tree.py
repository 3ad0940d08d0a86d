"""Proof trees, letter flavors, admissibility, duality and contradiction."""

from __future__ import annotations

import copy
import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .syntax import (
    Abbrev, App, Content, Letter, Property, Quantified, Relation, Statement, Term,
    is_statement, letter_names, letters_of, render, substitute_letter,
)


class TreeError(Exception):
    code = "structure_error"


class UnknownNode(TreeError, KeyError):
    code = "unknown_node"

    def __str__(self) -> str:
        return f"unknown node {self.args[0]!r}"


class DuplicateId(TreeError):
    code = "duplicate_id"


class RootExists(TreeError):
    code = "root_exists"


class SuccessorExists(TreeError):
    code = "successor_exists"


class PairExists(TreeError):
    code = "pair_exists"


class PairOnNonLeaf(TreeError):
    code = "pair_on_non_leaf"


class PropertyInPair(TreeError):
    code = "property_in_pair"


class Flavor(enum.Enum):
    INACTIVE = "inactive"
    INDEFINITE = "indefinite"
    DEFINITE = "definite"
    ADJECTIVE = "adjective"


class Link(enum.Enum):
    ROOT = "root"
    SUCCESSOR = "succ"
    PAIR_LEFT = "pairL"
    PAIR_RIGHT = "pairR"


# -- contexts --------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """Letter flavors induced by an ancestor chain.

    ``unquantified`` collects letters seen in unquantified statements; a
    letter in it is definite unless it is also an adjective.  ``properties``
    keeps the ancestry's properties for abbreviation duality.
    """

    active: frozenset = frozenset()
    adjectives: frozenset = frozenset()
    unquantified: frozenset = frozenset()
    properties: tuple = ()

    def extend(self, content: Content) -> Context:
        names = letter_names(content)
        adjectives, unquantified, properties = self.adjectives, self.unquantified, self.properties
        if isinstance(content, Property):
            adjectives = adjectives | {content.head}
            properties = properties + (content,)
        elif not isinstance(content, Quantified):
            unquantified = unquantified | names
        return Context(self.active | names, adjectives, unquantified, properties)

    def with_definite(self, names: Iterable[str]) -> Context:
        names = frozenset(names)
        return Context(self.active | names, self.adjectives, self.unquantified | names,
                       self.properties)

    def flavor(self, name: str) -> Flavor:
        if name not in self.active:
            return Flavor.INACTIVE
        if name in self.adjectives:
            return Flavor.ADJECTIVE
        if name in self.unquantified:
            return Flavor.DEFINITE
        return Flavor.INDEFINITE

    def is_definite(self, name: str) -> bool:
        return name in self.unquantified and name not in self.adjectives

    def is_adjective(self, name: str) -> bool:
        return name in self.adjectives

    def is_indefinite(self, name: str) -> bool:
        """Neither adjective nor definite; inactive letters included."""
        return name not in self.adjectives and name not in self.unquantified

    def fresh_synthetic(self) -> str:
        for k in itertools.count(1):
            name = f"#{k}"
            if name not in self.active:
                return name


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _term_letters_reason(term_letters: Iterable[str], ctx: Context) -> Optional[str]:
    for name in sorted(set(term_letters)):
        if not ctx.is_definite(name):
            return f"letter {name} is {ctx.flavor(name).value}, not definite"
    return None


def statement_reason(s: Statement, ctx: Context) -> Optional[str]:
    """None if ``s`` is admissible under ``ctx``, else why not."""
    if isinstance(s, Relation):
        return _term_letters_reason(letters_of(s).terms, ctx)
    if isinstance(s, Abbrev):
        if not ctx.is_adjective(s.head):
            return f"abbreviation head {s.head} is {ctx.flavor(s.head).value}, not an adjective"
        return _term_letters_reason(letters_of(s).terms, ctx)
    if isinstance(s, Quantified):
        r_hyp = statement_reason(s.hypothesis, ctx)
        r_concl = statement_reason(s.conclusion, ctx)
        if r_hyp is None and r_concl is None:
            return None
        if isinstance(s.hypothesis, Quantified):
            return f"hypothesis is quantified and not admissible ({r_hyp or r_concl})"
        loose = indefinite_letters(s.hypothesis, ctx)
        if len(loose) != 1:
            if r_hyp is None:
                return f"conclusion not admissible ({r_concl})"
            return (f"hypothesis has {len(loose)} indefinite letters"
                    f" ({', '.join(sorted(loose)) or 'none'}): {r_hyp}")
        (name,) = loose
        syn = ctx.fresh_synthetic()
        inner = ctx.with_definite([syn])
        r_hyp2 = statement_reason(substitute_letter(s.hypothesis, name, syn), inner)
        if r_hyp2 is not None:
            return f"hypothesis not admissible with {name} fixed ({r_hyp2})"
        r_concl2 = statement_reason(substitute_letter(s.conclusion, name, syn), inner)
        if r_concl2 is not None:
            return f"conclusion not admissible with {name} fixed ({r_concl2})"
        return None
    raise TypeError(f"not a statement: {s!r}")


def indefinite_letters(s: Statement, ctx: Context) -> set[str]:
    """Distinct letters of an unquantified statement that are neither
    definite nor adjective under ``ctx``."""
    return {n for n in letter_names(s) if ctx.is_indefinite(n)}


def match_term_substitution(pattern, target, name: str) -> Optional[Term]:
    """Find ``t`` with ``substitute_letter_with_term(pattern, name, t) == target``.

    Returns None if no single term works, or if ``name`` does not occur.
    """
    binding: dict[str, Term] = {}

    def term(p: Term, t: Term) -> bool:
        if isinstance(p, Letter) and p.name == name:
            if name in binding:
                return binding[name] == t
            binding[name] = t
            return True
        if isinstance(p, Letter):
            return p == t
        return isinstance(t, App) and term(p.function, t.function) and term(p.argument, t.argument)

    def walk(p, t) -> bool:
        if type(p) is not type(t):
            return False
        if isinstance(p, Relation):
            return p.sign is t.sign and term(p.left, t.left) and term(p.right, t.right)
        if isinstance(p, Quantified):
            return p.kind is t.kind and walk(p.hypothesis, t.hypothesis) and walk(p.conclusion, t.conclusion)
        if isinstance(p, Abbrev):
            return (p.head == t.head and len(p.args) == len(t.args)
                    and all(term(a, b) for a, b in zip(p.args, t.args)))
        if isinstance(p, Property):
            return walk(p.abbreviation, t.abbreviation) and walk(p.defining, t.defining)
        return False

    if not walk(pattern, target):
        return None
    return binding.get(name)


def property_reason(prop: Property, ctx: Context, source: Optional[Property] = None,
                    replaced: Optional[str] = None, term: Optional[Term] = None) -> Optional[str]:
    """Admissibility of a property.

    For an adjective head the property must be a modified copy of an
    ancestry property; pass ``source``/``replaced``/``term`` to pin the
    copy, otherwise every ancestry property is tried.
    """
    counts = letters_of(prop)
    head = prop.head
    if counts.all[head] != 1:
        return f"head {head} occurs more than once in the property"
    flavor = ctx.flavor(head)
    if flavor is Flavor.INACTIVE:
        abbr = prop.abbreviation
        if any(isinstance(a, App) for a in abbr.args):
            return "abbreviation of a new property contains functional brackets"
        arg_names = [a.name for a in abbr.args]
        for name in arg_names:
            if ctx.is_definite(name):
                return f"abbreviation contains definite letter {name}"
        defining_letters = letters_of(prop.defining)
        for name in arg_names:
            if arg_names.count(name) > 1:
                return f"letter {name} occurs more than once in the abbreviation"
            if not defining_letters.all[name]:
                return f"letter {name} does not occur in the defining statement"
        fixed = prop.defining
        inner = ctx
        for name in arg_names:
            syn = inner.fresh_synthetic()
            fixed = substitute_letter(fixed, name, syn)
            inner = inner.with_definite([syn])
        r = statement_reason(fixed, inner)
        if r is not None:
            return f"defining statement not admissible with abbreviation letters fixed ({r})"
        return None
    if flavor is Flavor.ADJECTIVE:
        if source is not None:
            candidates = [source]
        else:
            candidates = [p for p in ctx.properties if p.head == head]
        for cand in candidates:
            if cand.head != head:
                continue
            names = [replaced] if replaced is not None else sorted(
                {a.name for a in cand.abbreviation.args if isinstance(a, Letter)})
            for name in names:
                if name is None or not ctx.is_indefinite(name):
                    continue
                if not any(isinstance(a, Letter) and a.name == name for a in cand.abbreviation.args):
                    continue
                found = match_term_substitution(cand, prop, name)
                if found is not None and (term is None or found == term):
                    return None
        return "not a modified copy of an ancestry property"
    return f"head {head} is {flavor.value}; must be inactive or adjective"


def content_reason(c: Content, ctx: Context) -> Optional[str]:
    if isinstance(c, Property):
        return property_reason(c, ctx)
    return statement_reason(c, ctx)


def admissibility(c: Content, ctx: Context) -> Admissibility:
    r = content_reason(c, ctx)
    return Admissibility(r is None, r or "")


def dual_in(s1: Statement, s2: Statement, ctx: Context, _depth: int = 0) -> bool:
    """Duality of two statements given the ancestry's properties."""
    if isinstance(s1, Relation) and isinstance(s2, Relation):
        return s1.left == s2.left and s1.right == s2.right and s1.sign is not s2.sign
    if isinstance(s1, Quantified) and isinstance(s2, Quantified):
        return (s1.kind is not s2.kind and s1.hypothesis == s2.hypothesis
                and dual_in(s1.conclusion, s2.conclusion, ctx, _depth))
    if isinstance(s1, Abbrev) and isinstance(s2, Abbrev) and _depth < 32:
        defs1 = [p.defining for p in ctx.properties if p.abbreviation == s1]
        defs2 = [p.defining for p in ctx.properties if p.abbreviation == s2]
        return any(dual_in(a, b, ctx, _depth + 1) for a in defs1 for b in defs2)
    return False


# -- the tree --------------------------------------------------------------


@dataclass(eq=False)
class ProofNode:
    id: str
    content: Content
    parent: Optional[str]
    link: Link
    justification: object
    successor: Optional[str] = None
    pair: Optional[tuple[str, str]] = None
    comments: list[str] = field(default_factory=list)

    @property
    def children(self) -> list[str]:
        out = list(self.pair) if self.pair else []
        if self.successor:
            out.append(self.successor)
        return out

    @property
    def is_leaf(self) -> bool:
        return self.successor is None and self.pair is None


@dataclass(frozen=True)
class Claim:
    """A statement a script makes about its own tree.

    ``deduces``: ``statement`` is on the successor chain of ``node``.
    ``refutes``: every leaf below ``node`` is in the state of contradiction.
    """

    kind: str
    node: str
    statement: Optional[Statement] = None
    comments: tuple = ()


class ProofTree:
    def __init__(self, name: str = "proof"):
        self.name = name
        self.nodes: dict[str, ProofNode] = {}
        self.root: Optional[str] = None
        self.header_comments: list[str] = []
        self.claims: list[Claim] = []
        self.trailing_comments: list[str] = []
        self._retired: set[str] = set()
        self._counter = itertools.count(1)
        self._ctx: dict[str, Context] = {}
        self._contra: dict[str, Optional[tuple[str, str]]] = {}

    # -- lookup ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, nid: str) -> bool:
        return nid in self.nodes

    def node(self, nid: str) -> ProofNode:
        try:
            return self.nodes[nid]
        except KeyError:
            raise UnknownNode(nid) from None

    def content(self, nid: str) -> Content:
        return self.node(nid).content

    def ancestors(self, nid: str) -> list[str]:
        out = []
        cur: Optional[str] = self.node(nid).id
        while cur is not None:
            out.append(cur)
            cur = self.nodes[cur].parent
        return out

    def strict_ancestors(self, nid: str) -> list[str]:
        return self.ancestors(nid)[1:]

    def is_ancestor(self, candidate: str, nid: str) -> bool:
        return candidate in self.ancestors(nid)

    def depth(self, nid: str) -> int:
        return len(self.ancestors(nid)) - 1

    def unconditional_descendants(self, nid: str) -> list[str]:
        out = [self.node(nid).id]
        while (nxt := self.nodes[out[-1]].successor) is not None:
            out.append(nxt)
        return out

    def descendants(self, nid: str) -> list[str]:
        return list(self.preorder(nid))

    def preorder(self, start: Optional[str] = None) -> Iterator[str]:
        """Pre-order: node, pair-left subtree, pair-right subtree, successor subtree."""
        if start is None:
            start = self.root
            if start is None:
                return
        stack = [start]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def leaves(self, start: Optional[str] = None) -> list[str]:
        return [n for n in self.preorder(start) if self.nodes[n].is_leaf]

    def edges(self) -> list[tuple[str, str, Link]]:
        return [(n.parent, n.id, n.link) for n in map(self.nodes.get, self.preorder())
                if n.parent is not None]

    # -- mutation -------------------------------------------------------

    def _new_id(self, wanted: Optional[str]) -> str:
        if wanted is not None:
            if wanted in self.nodes or wanted in self._retired:
                raise DuplicateId(f"node id {wanted!r} already used")
            return wanted
        while True:
            cand = f"n{next(self._counter)}"
            if cand not in self.nodes and cand not in self._retired:
                return cand

    def add_root(self, content: Content, justification=None, node_id: Optional[str] = None) -> str:
        if self.root is not None:
            raise RootExists("tree already has a root")
        nid = self._new_id(node_id)
        self.nodes[nid] = ProofNode(nid, content, None, Link.ROOT, justification)
        self.root = nid
        return nid

    def attach_successor(self, parent: str, content: Content, justification=None,
                         node_id: Optional[str] = None) -> str:
        p = self.node(parent)
        if p.successor is not None:
            raise SuccessorExists(f"node {parent} already has a successor")
        nid = self._new_id(node_id)
        self.nodes[nid] = ProofNode(nid, content, parent, Link.SUCCESSOR, justification)
        p.successor = nid
        return nid

    def attach_pair(self, parent: str, left: Statement, right: Statement,
                    justification=None, right_justification=None,
                    ids: tuple[Optional[str], Optional[str]] = (None, None)) -> tuple[str, str]:
        p = self.node(parent)
        if p.pair is not None:
            raise PairExists(f"node {parent} already has pair children")
        if not p.is_leaf:
            raise PairOnNonLeaf(f"node {parent} is not a leaf")
        if not (is_statement(left) and is_statement(right)):
            raise PropertyInPair("pair children must hold statements")
        lid = self._new_id(ids[0])
        rid = self._new_id(ids[1])
        if lid == rid:
            raise DuplicateId(f"node id {lid!r} used twice")
        rj = justification if right_justification is None else right_justification
        self.nodes[lid] = ProofNode(lid, left, parent, Link.PAIR_LEFT, justification)
        self.nodes[rid] = ProofNode(rid, right, parent, Link.PAIR_RIGHT, rj)
        p.pair = (lid, rid)
        return lid, rid

    def attach(self, parent: str, link: Link | str, contents, justifications=None, ids=None):
        """Generic form: ``link`` is ``succ`` (one content) or ``pair`` (two)."""
        kind = link.value if isinstance(link, Link) else link
        if kind in ("succ", "successor"):
            return self.attach_successor(parent, contents, justifications, ids)
        if kind == "pair":
            lj, rj = justifications if isinstance(justifications, tuple) else (justifications, None)
            return self.attach_pair(parent, contents[0], contents[1], lj, rj, ids or (None, None))
        raise TreeError(f"unknown link kind {kind!r}")

    def remove_subtree(self, nid: str) -> None:
        node = self.node(nid)
        if node.link in (Link.PAIR_LEFT, Link.PAIR_RIGHT):
            raise TreeError("pair children are removed together; remove via the sibling's parent pair")
        doomed = list(self.preorder(nid))
        if node.parent is not None:
            self.nodes[node.parent].successor = None
        else:
            self.root = None
        for d in doomed:
            del self.nodes[d]
            self._retired.add(d)
            self._ctx.pop(d, None)
            self._contra.pop(d, None)

    def remove_pair(self, parent: str) -> None:
        p = self.node(parent)
        if p.pair is None:
            return
        for child in p.pair:
            for d in list(self.preorder(child)):
                del self.nodes[d]
                self._retired.add(d)
                self._ctx.pop(d, None)
                self._contra.pop(d, None)
        p.pair = None

    def replace_content(self, nid: str, content: Content) -> None:
        """Edit a node in place and drop cached flavors below it."""
        self.node(nid).content = content
        for d in self.preorder(nid):
            self._ctx.pop(d, None)
            self._contra.pop(d, None)

    def copy(self) -> ProofTree:
        return copy.deepcopy(self)

    # -- flavors --------------------------------------------------------

    def context(self, nid: str) -> Context:
        """Flavors relative to ``nid`` (the node counts as its own ancestor)."""
        if nid in self._ctx:
            return self._ctx[nid]
        chain = []
        cur: Optional[str] = self.node(nid).id
        while cur is not None and cur not in self._ctx:
            chain.append(cur)
            cur = self.nodes[cur].parent
        ctx = self._ctx[cur] if cur is not None else Context()
        for n in reversed(chain):
            ctx = ctx.extend(self.nodes[n].content)
            self._ctx[n] = ctx
        return ctx

    def flavor(self, name: str, nid: str) -> Flavor:
        return self.context(nid).flavor(name)

    def is_admissible(self, c: Content, nid: str) -> Admissibility:
        return admissibility(c, self.context(nid))

    def are_dual(self, s1: Statement, s2: Statement, nid: str) -> bool:
        return dual_in(s1, s2, self.context(nid))

    def is_contradictory(self, nid: str) -> Optional[tuple[str, str]]:
        """A pair of ancestors with mutually dual statements, or None."""
        if nid in self._contra:
            return self._contra[nid]
        chain = []
        cur: Optional[str] = self.node(nid).id
        while cur is not None and cur not in self._contra:
            chain.append(cur)
            cur = self.nodes[cur].parent
        for n in reversed(chain):
            node = self.nodes[n]
            inherited = self._contra.get(node.parent) if node.parent is not None else None
            found = inherited
            if found is None:
                found = self._find_dual_pair(n)
            self._contra[n] = found
        return self._contra[nid]

    def _find_dual_pair(self, nid: str) -> Optional[tuple[str, str]]:
        ctx = self.context(nid)
        anc = [a for a in self.ancestors(nid) if is_statement(self.nodes[a].content)]
        node = self.nodes[nid]
        if isinstance(node.content, Property):
            # a new property may turn two older abbreviations dual
            pairs = itertools.combinations(reversed(anc), 2)
        elif is_statement(node.content):
            pairs = ((a, nid) for a in reversed(anc[1:]))
        else:
            return None
        for a, b in pairs:
            if dual_in(self.nodes[a].content, self.nodes[b].content, ctx):
                return (a, b)
        return None

    def deduces(self, nid: str, goal: Statement) -> bool:
        return any(self.nodes[n].content == goal for n in self.unconditional_descendants(nid))

    def describe(self, nid: str) -> str:
        return f"{nid}: {render(self.content(nid))}"
