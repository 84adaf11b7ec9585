"""Shared fixtures and the acceptance summary printed at the end of a run."""
import pytest

from ncatrees.construction import BINARY_BASIC, BINARY_OPT, GENERAL_OPT

ALL_PROFILES = [BINARY_BASIC, BINARY_OPT, GENERAL_OPT]

_acceptance: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str = ""):
    _acceptance[criterion] = (ok, detail)


@pytest.fixture(params=ALL_PROFILES, ids=lambda p: p.profile)
def params(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda k: (len(k.split()[0]), k)):
        ok, detail = _acceptance[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
