import pytest

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "seen": False, "notes": []})
    if rep.when == "call":
        entry["seen"] = True
    if rep.failed or rep.skipped:
        entry["ok"] = False
    entry["notes"].extend(v for k, v in item.user_properties if k == "detail")


@pytest.fixture
def detail(request):
    """Attach a one-line measurement to the acceptance summary."""
    def add(text):
        request.node.user_properties.append(("detail", text))
    return add


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        verdict = "PASS" if e["ok"] and e["seen"] else "FAIL"
        tr.write_line(f"criterion {n:>2} {verdict}  {e['title']}")
        for note in dict.fromkeys(e["notes"]):
            tr.write_line(f"              {note}")
