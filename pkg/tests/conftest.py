import pytest

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.setdefault(crit, []).append(
            (report.outcome, dict(report.user_properties).get("detail", ""))
        )


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        runs = _ACCEPTANCE[crit]
        ok = all(outcome == "passed" for outcome, _ in runs)
        detail = runs[-1][1] if ok else next(d for o, d in runs if o != "passed")
        parts = f" ({len(runs)} parts)" if len(runs) > 1 else ""
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}{parts}  {detail}")


@pytest.fixture
def criterion(request):
    """Tag a test with its acceptance number; call ``criterion(n, detail)``."""

    def tag(number: int, detail: str = ""):
        props = dict(request.node.user_properties)
        props["criterion"] = number
        props["detail"] = detail
        request.node.user_properties[:] = list(props.items())

    return tag
