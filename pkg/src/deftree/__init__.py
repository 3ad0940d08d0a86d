"""Checker, script format and bounded search for a tree-shaped proof calculus."""

from .syntax import parse_statement, parse_content, render
from .tree import ProofTree
from .script import parse_script, serialize_script
from .rules.check import check_tree

__all__ = ["parse_statement", "parse_content", "render", "ProofTree", "parse_script",
           "serialize_script", "check_tree"]
__version__ = "0.1.0"
