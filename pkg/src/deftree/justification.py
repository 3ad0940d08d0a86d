"""Rule instances attached to proof nodes.

Every justification is a frozen dataclass; field order is the canonical key
order of the script format.  Field metadata records how a value is written:
``node`` (a node id), ``letter``, ``term`` or ``int``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import ClassVar, Optional

from .syntax import Term


def _node(optional=False):
    return field(default=None, metadata={"kind": "node", "optional": optional}) if optional \
        else field(metadata={"kind": "node"})


def _letter(optional=False):
    return field(default=None, metadata={"kind": "letter", "optional": optional}) if optional \
        else field(metadata={"kind": "letter"})


def _term(optional=False):
    return field(default=None, metadata={"kind": "term", "optional": optional}) if optional \
        else field(metadata={"kind": "term"})


def _int(default=None):
    return field(default=default, metadata={"kind": "int"})


class Justification:
    rule: ClassVar[str]
    multi_step: ClassVar[bool] = False

    def params(self) -> list[tuple[str, str, object]]:
        """(key, kind, value) for every field that is set."""
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                out.append((f.name.rstrip("_"), f.metadata["kind"], value))
        return out

    def refs(self) -> list[tuple[str, str]]:
        return [(k, v) for k, kind, v in self.params() if kind == "node"]

    def same_instance(self, other: Justification) -> bool:
        """True when ``other`` is the previous step of the same multi-step rule use."""
        if type(other) is not type(self) or not self.multi_step:
            return False
        mine = [(k, v) for k, _, v in self.params() if k != "step"]
        theirs = [(k, v) for k, _, v in other.params() if k != "step"]
        return mine == theirs


@dataclass(frozen=True, kw_only=True)
class RootAxiom(Justification):
    rule: ClassVar[str] = "root"


@dataclass(frozen=True, kw_only=True)
class Assume(Justification):
    rule: ClassVar[str] = "assume"


@dataclass(frozen=True, kw_only=True)
class ElemAdd(Justification):
    rule: ClassVar[str] = "elem_add"
    term: Optional[Term] = _term(optional=True)


@dataclass(frozen=True, kw_only=True)
class ElemSubst(Justification):
    rule: ClassVar[str] = "elem_subst"
    eq: str = _node()
    src: str = _node()
    from_: str = _letter()
    to: str = _letter()


@dataclass(frozen=True, kw_only=True)
class FnSubst(Justification):
    rule: ClassVar[str] = "fn_subst"
    eq: str = _node()
    src: str = _node()
    letter: str = _letter()
    term: Term = _term()


@dataclass(frozen=True, kw_only=True)
class Branch(Justification):
    rule: ClassVar[str] = "branch"


@dataclass(frozen=True, kw_only=True)
class Join(Justification):
    rule: ClassVar[str] = "join"
    left: str = _node()
    right: str = _node()


@dataclass(frozen=True, kw_only=True)
class Explode(Justification):
    rule: ClassVar[str] = "explode"
    d1: str = _node()
    d2: str = _node()


@dataclass(frozen=True, kw_only=True)
class Definition(Justification):
    rule: ClassVar[str] = "definition"
    multi_step: ClassVar[bool] = True
    of: str = _node()
    step: int = _int(1)
    new: Optional[str] = _letter(optional=True)


@dataclass(frozen=True, kw_only=True)
class Deduction(Justification):
    rule: ClassVar[str] = "deduction"
    of: str = _node()
    witness: Optional[str] = _node(optional=True)
    let: Optional[str] = _letter(optional=True)


@dataclass(frozen=True, kw_only=True)
class PropertyIntro(Justification):
    rule: ClassVar[str] = "property_intro"
    of: Optional[str] = _node(optional=True)
    letter: Optional[str] = _letter(optional=True)
    term: Optional[Term] = _term(optional=True)


@dataclass(frozen=True, kw_only=True)
class AbbrevSubst(Justification):
    rule: ClassVar[str] = "abbrev_subst"
    stmt: str = _node()
    prop: str = _node()
    at: int = _int(0)


@dataclass(frozen=True, kw_only=True)
class Choice(Justification):
    rule: ClassVar[str] = "choice"
    multi_step: ClassVar[bool] = True
    of: str = _node()
    step: int = _int(1)
    new: str = _letter()
    d1: str = _letter()
    d2: str = _letter()
    d3: str = _letter()
    d4: str = _letter()
    d5: str = _letter()


@dataclass(frozen=True, kw_only=True)
class FnIdentity(Justification):
    rule: ClassVar[str] = "fn_identity"
    of: str = _node()


@dataclass(frozen=True, kw_only=True)
class Restrict(Justification):
    rule: ClassVar[str] = "restrict"
    multi_step: ClassVar[bool] = True
    prop: str = _node()
    g: str = _letter()
    new: str = _letter()
    step: int = _int(1)


JUSTIFICATIONS: dict[str, type] = {
    cls.rule: cls
    for cls in (RootAxiom, Assume, ElemAdd, ElemSubst, FnSubst, Branch, Join, Explode,
                Definition, Deduction, PropertyIntro, AbbrevSubst, Choice, FnIdentity,
                Restrict)
}

STEP_COUNTS = {"definition": 2, "choice": 6, "restrict": 4}


def field_specs(cls: type) -> list[tuple[str, str, str, bool]]:
    """(script key, attribute name, kind, required) for a justification class."""
    out = []
    for f in fields(cls):
        required = f.metadata["kind"] != "int" and not f.metadata.get("optional", False)
        out.append((f.name.rstrip("_"), f.name, f.metadata["kind"], required))
    return out
