import numpy as np
import pytest

from bjsarima.sarima import SarimaSpec
from bjsarima.series import Period
from bjsarima.simulate import SimulationConfig, simulate
from bjsarima.transform import DifferenceSpec

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    cid, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _ACCEPTANCE[(cid, item.nodeid)] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (cid, _), (status, title) in sorted(_ACCEPTANCE.items(), key=lambda kv: int(kv[0][0])):
        terminalreporter.write_line(f"[{status}] criterion {cid:>2}: {title}")


SEASONAL = DifferenceSpec(0, 1, 12)
LEVEL = DifferenceSpec(0, 0, 12)


def sim(spec, coefficients, *, length=500, seed=0, delta=0.0, sigma=1.0, burn_in=None):
    cfg = SimulationConfig(spec=spec, coefficients=coefficients, delta=delta, sigma=sigma,
                           length=length, seed=seed, burn_in=burn_in, start=Period(1993, 1))
    return simulate(cfg)


@pytest.fixture
def ar1_series():
    spec = SarimaSpec(ar=[1])
    ts, shocks = sim(spec, {"AR(1)": 0.5}, length=400, seed=11)
    return spec, ts, shocks


@pytest.fixture
def seasonal_series():
    spec = SarimaSpec(ar=[1], sar=[12], diff=SEASONAL)
    ts, shocks = sim(spec, {"AR(1)": 0.5, "SAR(12)": -0.4}, length=300, seed=5, sigma=10.0)
    return spec, ts, shocks
