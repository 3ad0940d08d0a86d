"""Regenerate the render golden files under tests/golden from the corpus."""

from pathlib import Path

from deftree.rules import check_tree
from deftree.script import export_dot, parse_script, render_text

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    out = ROOT / "tests" / "golden"
    out.mkdir(exist_ok=True)
    for path in sorted((ROOT / "corpus").glob("*.pft")):
        tree = parse_script(path.read_text())
        report = check_tree(tree)
        (out / f"{path.stem}.dot").write_text(export_dot(tree, report))
        (out / f"{path.stem}.txt").write_text(render_text(tree, report))


if __name__ == "__main__":
    main()
