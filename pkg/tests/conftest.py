import pytest

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}
_NOTES: list[str] = []


@pytest.fixture
def acceptance_note():
    """Attach an informational line to the acceptance summary."""
    return _NOTES.append


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.failed:
            msg = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else ""
            detail = msg.splitlines()[0] if msg else ""
        _ACCEPTANCE[number] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[number]
        line = f"[{status}] criterion {number:>2}: {title}"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)
    for note in _NOTES:
        terminalreporter.write_line(f"[INFO] {note}")
