import pytest
from hypothesis import HealthCheck, settings

from karokit import karo

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.fixture(scope="session")
def spec():
    return karo()


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, "text", ok)``."""

    def record(n: int, text: str, ok: bool) -> None:
        prev = _CRITERIA.get(n)
        _CRITERIA[n] = (text, bool(ok) and (prev is None or prev[1]))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        text, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
