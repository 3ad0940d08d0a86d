"""Statement shapes prescribed by the multi-step rules (choice, restriction,
function identity).  Validators and constructors both read them."""

from __future__ import annotations

from ..syntax import (
    App, Kind, Letter, Quantified, Relation, Sign, Statement, exists, forall, membership,
    non_membership, substitute_letter_with_term,
)

STEP5_READINGS = ("diagram", "prose")


def choice_statements(conclusion: Statement, xi: str, eta: str, f: str,
                      d: tuple[str, str, str, str, str],
                      step5: str = "diagram") -> list[Statement]:
    """The six successors added by the choice rule.

    ``conclusion`` is the sub-conclusion of the universal ancestor; ``d``
    holds the five definite letters in order.
    """
    d1, d2, d3, d4, d5 = d
    f_of_xi = App(Letter(f), Letter(xi))
    last = membership if step5 == "prose" else non_membership
    return [
        membership(d1, f),
        forall(membership(xi, d2), membership(xi, f)),
        forall(membership(xi, d3), forall(membership(eta, xi), membership(eta, f))),
        forall(membership(xi, f), membership(f_of_xi, f)),
        forall(non_membership(xi, f),
               exists(membership(eta, xi),
                      forall(membership(eta, d4), last(App(Letter(xi), Letter(eta)), d5)))),
        forall(membership(xi, f), substitute_letter_with_term(conclusion, eta, f_of_xi)),
    ]


def restrict_statements(abbreviation: Statement, xi: str, g: str, f: str) -> list[Statement]:
    f_xi = App(Letter(f), Letter(xi))
    g_xi = App(Letter(g), Letter(xi))
    return [
        Relation(Letter(f), Sign.EQ, Letter(f)),
        forall(membership(xi, f), Relation(f_xi, Sign.EQ, g_xi)),
        forall(membership(xi, g), forall(abbreviation, membership(xi, f))),
        forall(membership(xi, f), exists(membership(xi, g), abbreviation)),
    ]


def choice_source(s: Statement):
    """``(xi, eta, sub_conclusion)`` if ``s`` is ``< xi = xi > [ eta = eta ] C``."""
    if not (isinstance(s, Quantified) and s.kind is Kind.FORALL):
        return None
    inner = s.conclusion
    if not (isinstance(inner, Quantified) and inner.kind is Kind.EXISTS):
        return None
    out = []
    for h in (s.hypothesis, inner.hypothesis):
        if not (isinstance(h, Relation) and h.sign is Sign.EQ and h.is_elementary and h.is_reflexive):
            return None
        out.append(h.left.name)
    if out[0] == out[1]:
        return None
    return out[0], out[1], inner.conclusion


def fn_identity_source(s: Statement):
    """``(p, q, xi)`` if ``s`` is ``< p(xi) != q(xi) > [ p(xi) = p ] q(xi) = q``."""
    if not (isinstance(s, Quantified) and s.kind is Kind.FORALL):
        return None
    h = s.hypothesis
    if not (isinstance(h, Relation) and h.sign is Sign.NEQ):
        return None
    terms = []
    for t in (h.left, h.right):
        if not (isinstance(t, App) and isinstance(t.function, Letter) and isinstance(t.argument, Letter)):
            return None
        terms.append(t)
    if terms[0].argument != terms[1].argument:
        return None
    p, q, xi = terms[0].function.name, terms[1].function.name, terms[0].argument.name
    expected = exists(non_membership(xi, p), non_membership(xi, q))
    if s.conclusion != expected:
        return None
    return p, q, xi
