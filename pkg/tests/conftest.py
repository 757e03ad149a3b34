import pytest

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_criterion"):
        doc = (item.function.__doc__ or "").strip().splitlines()
        title = doc[0] if doc else item.name
        prev = _acceptance.get(item.nodeid, (title, "PASS"))
        if report.failed:
            _acceptance[item.nodeid] = (title, "FAIL")
        elif report.when == "call":
            _acceptance[item.nodeid] = (title, prev[1] if prev[1] == "FAIL" else "PASS")
        elif report.skipped:
            _acceptance[item.nodeid] = (title, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance):
        title, status = _acceptance[nodeid]
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{status:4s}  {name}: {title}")
