"""Rule validators, constructors and whole-tree checking."""

from .check import CheckReport, check_claims, check_tree, deduces, flavor_lints, naming_lints
from .constructors import *  # noqa: F401,F403
from .constructors import __all__ as _constructors
from .validators import (
    CheckOptions, Violation, check_abbrev_subst, check_branch, check_choice, check_deduction,
    check_definition, check_elem_add, check_elem_subst, check_explode, check_fn_identity,
    check_fn_subst, check_join, check_node, check_property_intro, check_restrict, check_root,
    check_structure,
)

__all__ = [
    "CheckOptions", "CheckReport", "Violation", "check_tree", "check_node", "check_claims",
    "check_structure", "deduces", "flavor_lints", "naming_lints",
    "check_root", "check_elem_add", "check_elem_subst", "check_fn_subst", "check_branch",
    "check_join", "check_explode", "check_definition", "check_deduction",
    "check_property_intro", "check_abbrev_subst", "check_choice", "check_fn_identity",
    "check_restrict", *_constructors,
]
