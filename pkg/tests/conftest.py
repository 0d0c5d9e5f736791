import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pubgoods import CircuitInstance, Game, Gate, NOR, PURIFY  # noqa: E402
from pubgoods.reduction import compile_circuit  # noqa: E402

_acceptance: dict[int, tuple[str, str]] = {}


@pytest.fixture
def cycle3():
    """Directed 3-cycle 0 -> 1 -> 2 -> 0 at p = 1/2."""
    return Game.from_edges(3, [(0, 1), (1, 2), (2, 0)], F(1, 2))


@pytest.fixture
def cycle2():
    return Game.from_edges(2, [(0, 1), (1, 0)], F(1, 2))


@pytest.fixture
def loop_circuit():
    """PURIFY(a -> b, c) and NOR(b, c -> a) with a, b, c = 0, 1, 2."""
    return CircuitInstance(3, (Gate(PURIFY, 0, 1, 2), Gate(NOR, 1, 2, 0)))


@pytest.fixture
def loop_compiled(loop_circuit):
    return compile_circuit(loop_circuit, F(1, 2), F(1, 10))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, value in report.user_properties:
        if key == "acceptance":
            number, title = value
            prev = _acceptance.get(number, (title, "PASS"))[1]
            status = "PASS" if report.passed and prev == "PASS" else "FAIL"
            _acceptance[number] = (title, status)


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        item.user_properties.append(("acceptance", tuple(marker.args)))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, status = _acceptance[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
