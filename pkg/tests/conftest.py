import numpy as np
import pytest

from cvqaoa.quadrature import DEFAULT_ANCILLA, DEFAULT_INPUT

# 10^(-5.3/10)/2 and 10^(9.0/10)/2
VAR_SQ = 0.14756046133331926
VAR_ANTI = 3.971641173621408


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def sources():
    return DEFAULT_INPUT, DEFAULT_ANCILLA


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance check; printed in the terminal summary."""

    def _report(name: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        print(ACCEPTANCE_LINES[-1])
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
