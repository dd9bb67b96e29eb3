"""Shared fixtures plus the acceptance-summary report.

Every test in test_acceptance.py is one acceptance criterion; the terminal
summary prints one PASS/FAIL line per criterion so a run's verdict can be
read without scrolling through the dots.
"""

import pytest

from swarmgiant import Scenario

_ACCEPTANCE_FILE = "test_acceptance.py"
_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if _ACCEPTANCE_FILE not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results[name] = report.outcome
    elif report.outcome != "passed" and name not in _acceptance_results:
        # setup/teardown crash counts as a failure of the criterion
        _acceptance_results[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in _acceptance_results.items():
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")


# A one-room allocation mission small enough to finish in well under a
# second of wall time. Four robots, demand four, a 0.3 m doorway.
def mini_allocation_dict() -> dict:
    return {
        "name": "mini-allocation",
        "seed": 7,
        "arena": {"width": 3.0, "height": 2.0},
        "robot_defaults": {"max_speed": 0.2},
        "walls": [
            {"a": [0.9, 1.2], "b": [0.9, 2.0]},
            {"a": [2.1, 1.2], "b": [2.1, 2.0]},
            {"a": [0.9, 1.2], "b": [1.35, 1.2]},
            {"a": [1.65, 1.2], "b": [2.1, 1.2]},
        ],
        "regions": [{"id": 0, "rect": [0.9, 1.2, 2.1, 2.0], "demand": 4}],
        "doors": [{"region": 0, "a": [1.35, 1.2], "b": [1.65, 1.2]}],
        "spawn_grid": {"count": 4, "cols": 4, "center": [1.5, 0.5],
                       "spacing": 0.22, "heading": 1.5707963267948966},
        "mission": {"t_dwell": 5.0, "timeout": 300.0},
    }


@pytest.fixture
def mini_scenario() -> Scenario:
    return Scenario(mini_allocation_dict())
