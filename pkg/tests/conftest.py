import sys
from pathlib import Path

import pytest

from sfcoin import Engine, Parcel, Role

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"

sys.path.insert(0, str(Path(__file__).resolve().parent))

# Filled by test_acceptance.py; printed at the end of the session.
ACCEPTANCE_LINES: list[str] = []

PARCEL = Parcel(lat_min=-3.5, lat_max=-3.0, lon_min=-60.5, lon_max=-60.0)


def make_engine(investors=("alice", "bob"), landowners=("lo1",), supply=400000):
    e = Engine()
    e.open_account("fund", Role.FUND)
    for a in investors:
        e.open_account(a, Role.INVESTOR)
    for a in landowners:
        e.open_account(a, Role.LANDOWNER)
    if supply:
        e.ico_mint(supply, "fund")
    return e


@pytest.fixture
def engine():
    return make_engine()


@pytest.fixture
def parcel():
    return PARCEL


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
