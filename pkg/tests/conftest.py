import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gnss_threat_sim.io import SynthParams, Trajectory, synth_trace  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"

# G19/G20 are the satellites the fixtures target
FIXTURE_PRNS = (2, 5, 12, 19, 20, 25, 29, 31)


def fixture_trace(duration=600.0, **kw):
    params = dict(duration=duration, rate=1.0, n_satellites=len(FIXTURE_PRNS),
                  prns=FIXTURE_PRNS, seed=0, snr_db={"L1": 45.0, "L5": 45.0})
    params.update(kw)
    return list(synth_trace(SynthParams(**params)))


@pytest.fixture
def scenario_doc():
    def load(name):
        return json.loads((SCENARIOS / name).read_text())
    return load


@pytest.fixture(scope="session")
def fast_time_trace():
    return fixture_trace()


@pytest.fixture
def static_trajectory():
    return Trajectory(kind="static")


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = report.user_properties and dict(report.user_properties).get("criterion")
    if crit:
        _criteria[crit[0]] = (crit[1], "PASS" if report.passed else "FAIL")


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m and not any(k == "criterion" for k, _ in item.user_properties):
        item.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria, key=int):
        title, verdict = _criteria[num]
        terminalreporter.write_line(f"[{verdict}] AC{num:>2}: {title}")
