"""Statement language: terms, relations, quantified concatenations,
abbreviations and properties.

Concrete syntax (ASCII; the unicode forms are accepted on input)::

    stmt := '[' stmt ']' stmt          existential
          | '<' stmt '>' stmt          universal
          | term ('=' | '!=') term     relation
          | IDENT term*                abbreviation
    term := IDENT ('(' term ')')*
    prop := IDENT term* ':' stmt

Canonical rendering separates every token by a single space.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Union


class ParseError(ValueError):
    """Raised for malformed statement text.  ``column`` is 1-based."""

    code = "parse_error"

    def __init__(self, message: str, column: int | None = None):
        self.message = message
        self.column = column
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}")


class UnbalancedBrackets(ParseError):
    code = "unbalanced_brackets"


class DanglingRelationalSign(ParseError):
    code = "dangling_relational_sign"


class AbbreviationHeadNotBareLetter(ParseError):
    code = "abbreviation_head_not_bare_letter"


class EmptyInput(ParseError):
    code = "empty_input"


class NotStructurallyDualizable(ValueError):
    pass


class LetterIsAbbreviationHead(ValueError):
    pass


class Sign(enum.Enum):
    EQ = "="
    NEQ = "!="

    def flip(self) -> Sign:
        return Sign.NEQ if self is Sign.EQ else Sign.EQ


class Kind(enum.Enum):
    EXISTS = "["
    FORALL = "<"

    def flip(self) -> Kind:
        return Kind.FORALL if self is Kind.EXISTS else Kind.EXISTS

    @property
    def close(self) -> str:
        return "]" if self is Kind.EXISTS else ">"


# -- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Letter:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    """Functional term ``function ( argument )``."""

    function: Term
    argument: Term

    def __str__(self) -> str:
        return render(self)


Term = Union[Letter, App]


# -- statements ------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    left: Term
    sign: Sign
    right: Term

    @property
    def is_reflexive(self) -> bool:
        return self.left == self.right

    @property
    def is_elementary(self) -> bool:
        return isinstance(self.left, Letter) and isinstance(self.right, Letter)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Quantified:
    kind: Kind
    hypothesis: Statement
    conclusion: Statement

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Abbrev:
    head: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        return render(self)


Statement = Union[Relation, Quantified, Abbrev]


@dataclass(frozen=True)
class Property:
    abbreviation: Abbrev
    defining: Statement

    @property
    def head(self) -> str:
        return self.abbreviation.head

    def __str__(self) -> str:
        return render(self)


Content = Union[Relation, Quantified, Abbrev, Property]

STATEMENT_TYPES = (Relation, Quantified, Abbrev)


def is_statement(obj: object) -> bool:
    return isinstance(obj, STATEMENT_TYPES)


# -- convenience constructors ----------------------------------------------


def letter(name: str) -> Letter:
    return Letter(name)


def app(function: Term | str, *args: Term | str) -> Term:
    """``app('x', 'y', 'f')`` is the term ``x(y)(f)``."""
    term = Letter(function) if isinstance(function, str) else function
    for a in args:
        term = App(term, Letter(a) if isinstance(a, str) else a)
    return term


def membership(element: Term | str, holder: Term | str) -> Relation:
    """``w(x) != w``: membership of x at w."""
    w = Letter(holder) if isinstance(holder, str) else holder
    return Relation(App(w, Letter(element) if isinstance(element, str) else element), Sign.NEQ, w)


def non_membership(element: Term | str, holder: Term | str) -> Relation:
    m = membership(element, holder)
    return Relation(m.left, Sign.EQ, m.right)


def forall(hyp: Statement, concl: Statement) -> Quantified:
    return Quantified(Kind.FORALL, hyp, concl)


def exists(hyp: Statement, concl: Statement) -> Quantified:
    return Quantified(Kind.EXISTS, hyp, concl)


# -- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[^\W\d]\w*)
  | (?P<neq>!=|≠)
  | (?P<sym>[=\[\]<>():⟨⟩])
    """,
    re.VERBOSE,
)

_ALIASES = {"≠": "!=", "⟨": "<", "⟩": ">"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' or the symbol itself
    text: str
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        raw = m.group()
        if kind == "ident":
            tokens.append(Token("ident", raw, pos + 1))
        elif kind != "ws":
            sym = _ALIASES.get(raw, raw)
            tokens.append(Token(sym, sym, pos + 1))
        pos = m.end()
    return tokens


# -- parser ----------------------------------------------------------------

_CLOSERS = {"[": "]", "<": ">", "(": ")"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.end_column = len(text) + 1

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def column(self) -> int:
        tok = self.peek()
        return tok.column if tok is not None else self.end_column

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_close(self, opener: Token) -> None:
        want = _CLOSERS[opener.kind]
        tok = self.peek()
        if tok is None or tok.kind != want:
            got = "end of input" if tok is None else repr(tok.text)
            raise UnbalancedBrackets(
                f"expected {want!r} to close {opener.kind!r} from column {opener.column}, got {got}",
                self.column(),
            )
        self.take()

    def term(self) -> Term:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            self._unexpected("a letter")
        t: Term = Letter(self.take().text)
        while (tok := self.peek()) is not None and tok.kind == "(":
            opener = self.take()
            arg = self.term()
            self.expect_close(opener)
            t = App(t, arg)
        return t

    def statement(self) -> Statement:
        tok = self.peek()
        if tok is None:
            raise (EmptyInput("empty statement") if self.pos == 0
                   else UnbalancedBrackets("statement expected", self.column()))
        if tok.kind in ("[", "<"):
            opener = self.take()
            hyp = self.statement()
            self.expect_close(opener)
            concl = self.statement()
            kind = Kind.EXISTS if opener.kind == "[" else Kind.FORALL
            return Quantified(kind, hyp, concl)
        if tok.kind in ("=", "!="):
            raise DanglingRelationalSign("relational sign without left side", tok.column)
        first = self.term()
        nxt = self.peek()
        if nxt is not None and nxt.kind in ("=", "!="):
            sign = Sign.EQ if self.take().kind == "=" else Sign.NEQ
            nxt = self.peek()
            if nxt is None or nxt.kind != "ident":
                raise DanglingRelationalSign("relational sign without right side", self.column())
            return Relation(first, sign, self.term())
        if isinstance(first, App):
            raise AbbreviationHeadNotBareLetter(
                f"abbreviation head {render(first)!r} carries a functional bracket", tok.column
            )
        args = []
        while (nxt := self.peek()) is not None and nxt.kind == "ident":
            args.append(self.term())
        if nxt is not None and nxt.kind in ("=", "!="):
            raise DanglingRelationalSign("relational sign after an abbreviation", nxt.column)
        return Abbrev(first.name, tuple(args))

    def finish(self) -> None:
        tok = self.peek()
        if tok is None:
            return
        if tok.kind in ("]", ">", ")"):
            raise UnbalancedBrackets(f"unmatched {tok.text!r}", tok.column)
        self._unexpected("end of input")

    def _unexpected(self, wanted: str):
        tok = self.peek()
        if tok is None:
            raise UnbalancedBrackets(f"expected {wanted}, got end of input", self.column())
        if tok.kind in ("]", ">", ")", "("):
            raise UnbalancedBrackets(f"expected {wanted}, got {tok.text!r}", tok.column)
        if tok.kind in ("=", "!="):
            raise DanglingRelationalSign(f"expected {wanted}, got {tok.text!r}", tok.column)
        raise ParseError(f"expected {wanted}, got {tok.text!r}", tok.column)


def parse_statement(text: str) -> Statement:
    p = _Parser(text)
    if not p.tokens:
        raise EmptyInput("empty statement")
    if any(t.kind == ":" for t in p.tokens):
        col = next(t.column for t in p.tokens if t.kind == ":")
        raise ParseError("property symbol in a statement", col)
    s = p.statement()
    p.finish()
    return s


def parse_term(text: str) -> Term:
    p = _Parser(text)
    if not p.tokens:
        raise EmptyInput("empty term")
    t = p.term()
    p.finish()
    return t


def parse_property(text: str) -> Property:
    p = _Parser(text)
    if not p.tokens:
        raise EmptyInput("empty property")
    colons = [t for t in p.tokens if t.kind == ":"]
    if len(colons) != 1:
        raise ParseError("a property contains exactly one property symbol",
                         colons[1].column if colons else None)
    head = p.statement()
    if not isinstance(head, Abbrev):
        raise ParseError("the part before ':' must be an abbreviation", 1)
    tok = p.peek()
    if tok is None or tok.kind != ":":
        raise ParseError("property symbol must follow the abbreviation", p.column())
    p.take()
    if p.peek() is None:
        raise EmptyInput("property without defining statement")
    defining = p.statement()
    p.finish()
    return Property(head, defining)


def parse_content(text: str) -> Statement | Property:
    """Parse a node string: a property if it holds ``:``, else a statement."""
    if any(t.kind == ":" for t in tokenize(text)):
        return parse_property(text)
    return parse_statement(text)


# -- rendering -------------------------------------------------------------


def tokens_of(obj: Content | Term) -> Iterator[str]:
    if isinstance(obj, Letter):
        yield obj.name
    elif isinstance(obj, App):
        yield from tokens_of(obj.function)
        yield "("
        yield from tokens_of(obj.argument)
        yield ")"
    elif isinstance(obj, Relation):
        yield from tokens_of(obj.left)
        yield obj.sign.value
        yield from tokens_of(obj.right)
    elif isinstance(obj, Quantified):
        yield obj.kind.value
        yield from tokens_of(obj.hypothesis)
        yield obj.kind.close
        yield from tokens_of(obj.conclusion)
    elif isinstance(obj, Abbrev):
        yield obj.head
        for a in obj.args:
            yield from tokens_of(a)
    elif isinstance(obj, Property):
        yield from tokens_of(obj.abbreviation)
        yield ":"
        yield from tokens_of(obj.defining)
    else:
        raise TypeError(f"cannot render {obj!r}")


def render(obj: Content | Term) -> str:
    return " ".join(tokens_of(obj))


def render_compact(term: Term) -> str:
    """Space-free term text, used inside ``key=value`` pairs."""
    return "".join(tokens_of(term))


_UNICODE = {"!=": "≠", "<": "⟨", ">": "⟩"}
_GREEK = {
    "alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ", "epsilon": "ε",
    "zeta": "ζ", "eta": "η", "theta": "θ", "iota": "ι", "kappa": "κ",
    "lambda": "λ", "mu": "μ", "nu": "ν", "xi": "ξ", "omicron": "ο", "pi": "π",
    "rho": "ρ", "sigma": "σ", "tau": "τ", "upsilon": "υ", "phi": "φ",
    "chi": "χ", "psi": "ψ", "omega": "ω",
}
GREEK_NAMES = frozenset(_GREEK) | frozenset(_GREEK.values())


def render_unicode(obj: Content | Term) -> str:
    """Display form with mathematical symbols (not parsed back by tools)."""
    return " ".join(_UNICODE.get(t, _GREEK.get(t, t)) for t in tokens_of(obj))


# -- classification --------------------------------------------------------


@dataclass(frozen=True)
class StatementKind:
    is_relation: bool
    is_elementary: bool
    is_quantified: bool
    is_functional: bool
    is_reflexive: bool
    is_abbreviation: bool


def _has_app(obj: Content | Term) -> bool:
    return "(" in tokens_of(obj)


def classify(s: Statement) -> StatementKind:
    rel = isinstance(s, Relation)
    functional = _has_app(s)
    return StatementKind(
        is_relation=rel,
        is_elementary=rel and not functional,
        is_quantified=isinstance(s, Quantified),
        is_functional=functional,
        is_reflexive=rel and s.is_reflexive,
        is_abbreviation=isinstance(s, Abbrev),
    )


def is_unquantified(s: Statement) -> bool:
    return not isinstance(s, Quantified)


def is_elementary_equality(s: object) -> bool:
    return isinstance(s, Relation) and s.sign is Sign.EQ and s.is_elementary


def complexity(s: Statement) -> int:
    if isinstance(s, Quantified):
        return 1 + complexity(s.hypothesis) + complexity(s.conclusion)
    return 0


def dual_structural(s: Statement) -> Statement:
    if isinstance(s, Relation):
        return Relation(s.left, s.sign.flip(), s.right)
    if isinstance(s, Quantified):
        return Quantified(s.kind.flip(), s.hypothesis, dual_structural(s.conclusion))
    raise NotStructurallyDualizable(
        f"abbreviation {render(s)!r} has no dual without property context"
    )


# -- letters and substitution ----------------------------------------------


@dataclass(frozen=True)
class LetterCount:
    heads: Counter
    terms: Counter

    @property
    def all(self) -> Counter:
        return self.heads + self.terms

    def names(self) -> set[str]:
        return set(self.heads) | set(self.terms)


def _term_letters(t: Term) -> Iterator[str]:
    if isinstance(t, Letter):
        yield t.name
    else:
        yield from _term_letters(t.function)
        yield from _term_letters(t.argument)


def _walk_letters(obj: Content | Term, heads: Counter, terms: Counter) -> None:
    if isinstance(obj, (Letter, App)):
        terms.update(_term_letters(obj))
    elif isinstance(obj, Relation):
        _walk_letters(obj.left, heads, terms)
        _walk_letters(obj.right, heads, terms)
    elif isinstance(obj, Quantified):
        _walk_letters(obj.hypothesis, heads, terms)
        _walk_letters(obj.conclusion, heads, terms)
    elif isinstance(obj, Abbrev):
        heads[obj.head] += 1
        for a in obj.args:
            _walk_letters(a, heads, terms)
    elif isinstance(obj, Property):
        _walk_letters(obj.abbreviation, heads, terms)
        _walk_letters(obj.defining, heads, terms)


def letters_of(obj: Content | Term) -> LetterCount:
    heads: Counter = Counter()
    terms: Counter = Counter()
    _walk_letters(obj, heads, terms)
    return LetterCount(heads, terms)


def letter_names(obj: Content | Term) -> set[str]:
    return letters_of(obj).names()


def _subst_term(t: Term, old: str, new: Term) -> Term:
    if isinstance(t, Letter):
        return new if t.name == old else t
    return App(_subst_term(t.function, old, new), _subst_term(t.argument, old, new))


def map_terms(obj, fn, head_fn=lambda h: h):
    if isinstance(obj, (Letter, App)):
        return fn(obj)
    if isinstance(obj, Relation):
        return Relation(fn(obj.left), obj.sign, fn(obj.right))
    if isinstance(obj, Quantified):
        return Quantified(obj.kind, map_terms(obj.hypothesis, fn, head_fn),
                          map_terms(obj.conclusion, fn, head_fn))
    if isinstance(obj, Abbrev):
        return Abbrev(head_fn(obj.head), tuple(fn(a) for a in obj.args))
    if isinstance(obj, Property):
        return Property(map_terms(obj.abbreviation, fn, head_fn),
                        map_terms(obj.defining, fn, head_fn))
    raise TypeError(f"not a statement: {obj!r}")


def substitute_letter(s, old: str, new: str):
    """Replace every occurrence of letter ``old`` by ``new``, heads included."""
    if old == new:
        raise ValueError("substitution needs two different letters")
    repl = Letter(new)
    return map_terms(s, lambda t: _subst_term(t, old, repl),
                      lambda h: new if h == old else h)


def substitute_letter_with_term(s, name: str, term: Term):
    """Replace every term occurrence of ``name`` by ``term``; heads are kept."""
    counts = letters_of(s)
    if counts.heads[name] and not counts.terms[name]:
        raise LetterIsAbbreviationHead(f"{name!r} occurs only as an abbreviation head")
    return map_terms(s, lambda t: _subst_term(t, name, term))


def rename_letters(s, mapping: dict[str, str]):
    """Simultaneous renaming (used for letter swaps)."""

    def ren(t: Term) -> Term:
        if isinstance(t, Letter):
            return Letter(mapping.get(t.name, t.name))
        return App(ren(t.function), ren(t.argument))

    return map_terms(s, ren, lambda h: mapping.get(h, h))


# -- constituents ----------------------------------------------------------

Path = tuple[int, ...]
HYPOTHESIS, CONCLUSION = 0, 1


def constituents(s: Statement, path: Path = ()) -> Iterator[tuple[Path, Statement]]:
    """Pre-order walk over grammatical sub-statements (hypothesis first)."""
    yield path, s
    if isinstance(s, Quantified):
        yield from constituents(s.hypothesis, path + (HYPOTHESIS,))
        yield from constituents(s.conclusion, path + (CONCLUSION,))


def find_constituent_occurrences(host: Statement, needle: Statement) -> list[Path]:
    return [p for p, sub in constituents(host) if sub == needle]


def constituent_at(host: Statement, path: Path) -> Statement:
    s = host
    for step in path:
        if not isinstance(s, Quantified):
            raise IndexError(f"no constituent at {path}")
        s = s.hypothesis if step == HYPOTHESIS else s.conclusion
    return s


def replace_at(host: Statement, path: Path, new: Statement) -> Statement:
    if not path:
        return new
    if not isinstance(host, Quantified):
        raise IndexError(f"no constituent at {path}")
    head, rest = path[0], path[1:]
    if head == HYPOTHESIS:
        return Quantified(host.kind, replace_at(host.hypothesis, rest, new), host.conclusion)
    return Quantified(host.kind, host.hypothesis, replace_at(host.conclusion, rest, new))


def relation_paths(s: Content) -> list[tuple]:
    """Paths to every Relation inside ``s`` (property defining part is ``('d', ...)``)."""
    if isinstance(s, Property):
        return [("d",) + p for p in relation_paths(s.defining)]
    return [p for p, sub in constituents(s) if isinstance(sub, Relation)]


def flip_relation_at(s: Content, path: tuple) -> Content:
    if isinstance(s, Property):
        return Property(s.abbreviation, flip_relation_at(s.defining, path[1:]))
    rel = constituent_at(s, path)
    return replace_at(s, path, Relation(rel.left, rel.sign.flip(), rel.right))
