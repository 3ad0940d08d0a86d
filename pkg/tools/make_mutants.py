"""Regenerate the mutants/ fixture set from the corpus.

For every corpus tree one sign flip and one letter swap are written, preferring
mutants that produce a single violation.  The expected clause is recorded in a
header comment read back by the tests.
"""

import sys
from pathlib import Path

from deftree.mutation import mutants
from deftree.rules.check import check_tree
from deftree.script import parse_script, serialize_script

ROOT = Path(__file__).resolve().parent.parent


def pick(tree, kind):
    best = None
    for m in mutants(tree):
        if m.kind != kind or m.node == tree.root:
            continue
        report = check_tree(m.tree)
        if not report.violations:
            continue
        if len(report.violations) == 1:
            return m, report
        if best is None:
            best = (m, report)
    return best


def main() -> int:
    out_dir = ROOT / "mutants"
    out_dir.mkdir(exist_ok=True)
    for path in sorted((ROOT / "corpus").glob("*.pft")):
        tree = parse_script(path.read_text())
        for kind in ("signflip", "swap"):
            found = pick(tree, kind)
            if found is None:
                continue
            m, report = found
            m.tree.header_comments = [
                f"mutant of {path.stem}: node {m.node}, {kind} ({m.detail})",
                f"expect: {report.violations[0].clause}",
            ]
            m.tree.name = f"{path.stem}_{kind}"
            (out_dir / f"{path.stem}_{kind}.pft").write_text(serialize_script(m.tree))
    return 0


if __name__ == "__main__":
    sys.exit(main())
