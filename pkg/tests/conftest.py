import numpy as np
import pytest
from hypothesis import settings

from spinres import TwoSiteState

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_x_state(rng, with_y_minus=True) -> TwoSiteState:
    """A valid X state: diagonal from a Dirichlet draw, coherences inside the positivity bounds."""
    up, um, zz2 = rng.dirichlet([1.0, 1.0, 1.0])
    z = zz2 / 2.0
    y_plus = rng.uniform(-1, 1) * z
    y_minus = rng.uniform(-1, 1) * np.sqrt(up * um) if with_y_minus else 0.0
    return TwoSiteState(up, um, z, y_plus, y_minus)


@pytest.fixture
def rng():
    return np.random.default_rng(20231019)


# Eq. 13 state as written in the paper (all coherences -1/4)
EQ13 = TwoSiteState(0.25, 0.25, 0.25, -0.25, -0.25)


# --- acceptance summary: one PASS/FAIL line per criterion ----------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        number = int(name.split("_")[2])
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  ({name})")
