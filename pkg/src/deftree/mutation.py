"""Single-node mutants of a proof tree: relational sign flips and letter swaps."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .syntax import flip_relation_at, letter_names, relation_paths, rename_letters
from .tree import ProofTree


@dataclass(frozen=True)
class Mutant:
    node: str
    kind: str  # "signflip" or "swap"
    detail: str
    tree: ProofTree


def mutants(tree: ProofTree) -> Iterator[Mutant]:
    """Every sign flip of one relation occurrence and every swap of two letters at one node.

    Mutations that leave the node content unchanged are skipped.
    """
    for nid in tree.preorder():
        content = tree.content(nid)
        for k, path in enumerate(relation_paths(content)):
            yield _with(tree, nid, "signflip", f"relation {k}", flip_relation_at(content, path))
        for a, b in combinations(sorted(letter_names(content)), 2):
            new = rename_letters(content, {a: b, b: a})
            if new != content:
                yield _with(tree, nid, "swap", f"{a}<->{b}", new)


def _with(tree: ProofTree, nid: str, kind: str, detail: str, content) -> Mutant:
    t = tree.copy()
    t.replace_content(nid, content)
    return Mutant(nid, kind, detail, t)
