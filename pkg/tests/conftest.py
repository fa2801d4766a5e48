import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("exact", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

GOLDEN = Path(__file__).with_name("golden.json")


@pytest.fixture(scope="session")
def golden():
    return json.loads(GOLDEN.read_text())


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for n in sorted(ACCEPTANCE):
        ok, secs, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}")
