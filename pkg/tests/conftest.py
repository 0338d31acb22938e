import pytest

from foxcover import intlinalg

intlinalg.VERIFY_SNF = True

_acceptance: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        doc = report.user_properties and dict(report.user_properties).get("criterion")
        _acceptance.append((doc or report.nodeid, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}")


@pytest.fixture
def no_snf_verify(monkeypatch):
    """Production configuration, for timing measurements."""
    monkeypatch.setattr(intlinalg, "VERIFY_SNF", False)
