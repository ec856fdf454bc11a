import pytest

from mgc_residuals.catalog import all_entries

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def catalog():
    return list(all_entries())


@pytest.fixture
def report():
    """Record a one-line verdict for the acceptance summary."""
    def _report(criterion, passed, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  [{criterion}] {detail}")
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
