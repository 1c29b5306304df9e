from __future__ import annotations

import pytest

# criterion number -> (passed, summary); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, summary = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {summary}")


@pytest.fixture
def k3():
    from k3arith.lattice import k3_lattice

    return k3_lattice()
