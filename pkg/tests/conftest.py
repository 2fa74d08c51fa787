import pytest

_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


@pytest.fixture
def detail(request):
    """Dict a criterion test fills with the numbers it measured."""
    found: dict = {}
    request.node.criterion_detail = found
    return found


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    info = getattr(item, "criterion_detail", {})
    text = ", ".join(f"{k}={v}" for k, v in info.items())
    _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", title, text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, text = _CRITERIA[number]
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {title}" + (f"  ({text})" if text else ""))
