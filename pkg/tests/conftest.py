from pathlib import Path

import pytest

from deftree.script import parse_script

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
MUTANTS = ROOT / "mutants"

CORPUS_FILES = sorted(CORPUS.glob("*.pft"))
MUTANT_FILES = sorted(MUTANTS.glob("*.pft"))


def load(name: str):
    return parse_script((CORPUS / f"{name}.pft").read_text())


@pytest.fixture
def sample():
    return load("sample_tree")


@pytest.fixture
def theorem():
    return load("theorem_root")


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
