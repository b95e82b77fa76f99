import os

import pytest

from polarks.hexagon import classical_hexagon, orbit_closure, skew_hexagon
from polarks.space import build_polar_space


@pytest.fixture(scope="session")
def doily():
    return build_polar_space(2)


@pytest.fixture(scope="session")
def w52():
    return build_polar_space(3)


@pytest.fixture(scope="session")
def classical_copy(w52):
    return classical_hexagon(w52)


@pytest.fixture(scope="session")
def skew_copy(w52):
    return skew_hexagon(w52)


@pytest.fixture(scope="session")
def classical_orbit(w52, classical_copy):
    return orbit_closure(w52, classical_copy)


@pytest.fixture(scope="session")
def skew_orbit(w52, skew_copy):
    return orbit_closure(w52, skew_copy)


def stretch_enabled() -> bool:
    return os.environ.get("POLARKS_STRETCH") == "1"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = {}
    for status in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            label = "PASS" if status == "passed" else status.upper()
            if rows.get(name) != "FAILED":
                rows[name] = label
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(rows):
            terminalreporter.write_line(f"{rows[name]:>7}  {name}")
