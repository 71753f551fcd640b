import numpy as np
import pytest

from finsim.actuation import DriveProfile
from finsim.dynamics import BodyPlan, simulate, sweep_head

DEFAULT_HEAD_LENGTHS = np.geomspace(0.07334, 0.880, 8)

_acceptance_lines = []


@pytest.fixture(scope="session")
def default_plan():
    return BodyPlan()


@pytest.fixture(scope="session")
def default_drive():
    return DriveProfile(waveform="gearbox_sine", frequency=1.59, amplitude=0.1)


@pytest.fixture(scope="session")
def default_trace(default_plan, default_drive):
    return simulate(default_plan, default_drive, duration=10.0, dt=1e-4)


@pytest.fixture(scope="session")
def default_sweep(default_plan, default_drive):
    return sweep_head(default_plan, DEFAULT_HEAD_LENGTHS, default_drive)


@pytest.fixture
def acceptance_report():
    def report(number, name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}"
        if detail:
            line += f" ({detail})"
        _acceptance_lines.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
