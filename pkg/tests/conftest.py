import pytest

from slpenc import available_backends

BACKENDS = sorted(available_backends())

# acceptance results, printed once at the end of the session
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session", params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def acceptance():
    """Record ``(ok, detail)`` for a criterion; the summary prints them all."""

    def record(key, ok, detail):
        ACCEPTANCE[key] = (ok, detail)
        print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
