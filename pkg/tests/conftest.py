import pytest

_outcomes = pytest.StashKey[dict]()
_details = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion covered by the test")
    config.stash[_outcomes] = {}
    config.stash[_details] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    cid = mark.args[0]
    seen = item.config.stash[_outcomes]
    ok = rep.passed and seen.get(cid, True)
    seen[cid] = ok


@pytest.fixture
def record(request):
    """record(text) attaches a one-line summary to the test's criterion."""
    cid = request.node.get_closest_marker("criterion").args[0]
    details = request.config.stash[_details]

    def _record(text):
        details.setdefault(cid, []).append(text)

    return _record


def pytest_terminal_summary(terminalreporter, config):
    outcomes = config.stash[_outcomes]
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    details = config.stash[_details]
    for cid in sorted(outcomes, key=lambda c: int(c[1:])):
        status = "PASS" if outcomes[cid] else "FAIL"
        terminalreporter.write_line(f"{cid} {status}: {'; '.join(details.get(cid, []))}")
