import json
from pathlib import Path

import pytest

from gcmate.graphs import Graph

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def reference():
    return json.loads((DATA / "reference_matrices.json").read_text())


@pytest.fixture(scope="session")
def example1(reference):
    return Graph.from_matrix(reference["example1_A"])


@pytest.fixture(scope="session")
def example2(reference):
    return Graph.from_matrix(reference["example2_A"])


@pytest.fixture(scope="session")
def example1_mate_printed(reference):
    return Graph.from_matrix(reference["example1_mate_printed"])


@pytest.fixture
def report():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""

    def _report(label: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
