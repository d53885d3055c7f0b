from pathlib import Path

import pytest

from coct.expression import evaluate, read_expression

FIXTURES = Path(__file__).parent / "fixtures"

# Filled by test_acceptance.py; echoed in the terminal summary.
ACCEPTANCE_LINES = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def load_expr(name):
    return read_expression(FIXTURES / name)


@pytest.fixture
def c5():
    return load_expr("c5.expr")


@pytest.fixture
def c5_graph(c5):
    return evaluate(c5)


@pytest.fixture
def triangle():
    return load_expr("triangle.expr")


@pytest.fixture
def c5_triangle():
    return load_expr("c5_triangle.expr")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
