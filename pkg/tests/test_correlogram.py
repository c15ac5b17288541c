import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from bjsarima.correlogram import acf, correlogram, durbin_levinson, ljung_box, pacf, render
from bjsarima.errors import DegenerateSeriesError
from bjsarima.sarima import SarimaSpec

from .conftest import sim
from .oracles import ls_autoregression_pacf


def test_alternating_lag_one():
    T = 100
    x = np.tile([1.0, -1.0], T // 2)
    assert acf(x, 1)[0] == pytest.approx(-(T - 1) / T, abs=1e-15)


def test_lag_zero_is_one():
    # the same formula at k = 0
    x = np.random.default_rng(0).normal(size=50)
    dev = x - x.mean()
    assert (dev @ dev) / (dev @ dev) == 1.0


def test_constant_series_degenerate():
    with pytest.raises(DegenerateSeriesError):
        acf([3.0] * 20, 5)


def test_noise_lag_one_within_band():
    inside = 0
    for seed in range(1000):
        x = np.random.default_rng(seed).normal(size=1000)
        inside += abs(acf(x, 1)[0]) < 2 / math.sqrt(1000)
    # nominal coverage is about 0.954; sampling sd at 1000 trials is 0.007
    assert inside >= 930


def test_pac_first_equals_ac_first():
    x = np.random.default_rng(1).normal(size=120).cumsum()
    assert pacf(x, 10)[0] == acf(x, 10)[0]


def test_ar1_pacf_cuts_off():
    spec = SarimaSpec(ar=[1])
    good = 0
    for seed in range(20):
        ts, _ = sim(spec, {"AR(1)": 0.6}, length=5000, seed=seed)
        p = pacf(ts.values, 10)
        assert p[0] == pytest.approx(0.6, abs=0.05)
        good += np.all(np.abs(p[1:]) < 2 / math.sqrt(5000))
    assert good >= 10  # 9 lags at ~5% each: P(all inside) ~ 0.63


def test_ar1_pacf_per_lag_rate():
    spec = SarimaSpec(ar=[1])
    outside = []
    for seed in range(20):
        ts, _ = sim(spec, {"AR(1)": 0.6}, length=5000, seed=100 + seed)
        outside.extend(np.abs(pacf(ts.values, 10)[1:]) >= 2 / math.sqrt(5000))
    assert np.mean(outside) <= 0.10


def test_pacf_matches_regression_oracle():
    x = np.random.default_rng(9).normal(size=200)
    np.testing.assert_allclose(pacf(x, 15), ls_autoregression_pacf(x, 15), atol=1e-6)


def test_durbin_levinson_unit_pivot():
    with pytest.raises(DegenerateSeriesError):
        durbin_levinson([1.0, 1.0, 1.0])


def test_ljung_box_first_lag_value():
    q, _ = ljung_box([0.510], 168)
    assert q[0] == pytest.approx(168 * 170 * 0.510 ** 2 / 167)
    assert q[0] == pytest.approx(44.545, abs=0.2)


def test_ljung_box_zero_autocorrelation():
    q, prob = ljung_box(np.zeros(12), 100)
    np.testing.assert_array_equal(q, 0.0)
    np.testing.assert_array_equal(prob, 1.0)


def test_ljung_box_df_adjust_blanks_first_lags():
    _, prob = ljung_box(np.full(10, 0.1), 150, df_adjust=4)
    assert np.all(np.isnan(prob[:4]))
    assert not np.any(np.isnan(prob[4:]))


def test_white_noise_ljung_box_size():
    rejects = 0
    for seed in range(500):
        x = np.random.default_rng(seed).normal(size=200)
        _, prob = ljung_box(acf(x, 12), 200)
        rejects += prob[-1] < 0.05
    assert 0.03 <= rejects / 500 <= 0.08


def test_render_layout():
    x = np.random.default_rng(2).normal(size=60)
    text = render(correlogram(x, 5, df_adjust=2))
    header = text.splitlines()[1]
    for col in ("AC", "PAC", "Q-Stat", "Prob"):
        assert col in header
    rows = text.splitlines()[2:]
    assert len(rows) == 5
    assert rows[0].rstrip().endswith(rows[0].split()[-1])
    assert len(rows[1].split()) < len(rows[2].split()) or rows[2].split()[-1] != ""


series = arrays(np.float64, st.integers(20, 80), elements=st.floats(-100, 100))


@given(series)
def test_bounds_and_monotone_q(x):
    if np.ptp(x) < 1e-6:
        return
    c = correlogram(x, 8, df_adjust=1)
    assert np.all(np.abs(c.ac) <= 1 + 1e-12)
    assert np.all(np.diff(c.q_stat) >= 0)
    p = c.q_prob[~np.isnan(c.q_prob)]
    assert np.all((p >= 0) & (p <= 1))
