import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bjsarima.diagnostics import diagnose, lm_test, residual_check, render_lm, to_dict
from bjsarima.errors import CollinearityError
from bjsarima.sarima import SarimaSpec, build_model, estimate
from bjsarima.series import TimeSeries

from .conftest import LEVEL, SEASONAL, sim

SPEC = SarimaSpec(ar=[1], sar=[12], diff=SEASONAL)
COEFS = {"AR(1)": 0.5, "SAR(12)": -0.4}


def test_residual_check_df_adjust():
    ts, _ = sim(SPEC, COEFS, length=200, seed=1)
    c = residual_check(build_model(SPEC, ts, COEFS, with_errors=False), 24)
    assert c.df_adjust == 2
    assert np.isnan(c.q_prob[:2]).all() and not np.isnan(c.q_prob[2:]).any()


def test_lm_design_rows():
    ts, _ = sim(SPEC, COEFS, length=200, seed=1)
    lm = lm_test(build_model(SPEC, ts, COEFS, with_errors=False), 12)
    names = [r.name for r in lm.rows]
    assert names[:2] == ["AR(1)", "SAR(12)"]
    assert names[2:] == [f"RESID(-{k})" for k in range(1, 13)]
    assert lm.dof == lm.nobs - 14


def test_lm_against_lstsq():
    ts, _ = sim(SPEC, COEFS, length=200, seed=3)
    m = build_model(SPEC, ts, COEFS, with_errors=False)
    lm = lm_test(m, 4)
    a = np.asarray(m.residuals)
    z = m.differenced.values
    lag = lambda x, k: np.r_[np.zeros(k), x[:-k]]
    X = np.column_stack([lag(z, 1), lag(z, 12)] + [lag(a, k) for k in range(1, 5)])
    beta, *_ = np.linalg.lstsq(X, a, rcond=None)
    np.testing.assert_allclose([r.coefficient for r in lm.rows], beta, atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.01, 1000), st.integers(0, 1000))
def test_lm_scale_invariant(c, seed):
    ts, _ = sim(SPEC, COEFS, length=150, seed=seed)
    base = lm_test(build_model(SPEC, ts, COEFS, with_errors=False), 6)
    scaled_ts = TimeSeries(ts.start, c * ts.values)
    scaled = lm_test(build_model(SPEC, scaled_ts, COEFS, with_errors=False), 6)
    np.testing.assert_allclose([r.t_stat for r in scaled.rows], [r.t_stat for r in base.rows],
                               rtol=1e-6, atol=1e-8)


def test_planted_ar_detected():
    ts, _ = sim(SarimaSpec(ar=[1]), {"AR(1)": 0.5}, length=400, seed=4)
    m = build_model(SarimaSpec(diff=LEVEL), ts, {})
    lm = lm_test(m, 12)
    assert abs(lm.rows[0].t_stat) > 2 and lm.rows[0].name == "RESID(-1)"
    assert not diagnose(m).adequate


def test_resid_rows_calibrated():
    hits = []
    for seed in range(150):
        ts, _ = sim(SPEC, COEFS, length=300, seed=500 + seed)
        lm = lm_test(build_model(SPEC, ts, COEFS, with_errors=False), 12)
        hits.extend(abs(r.t_stat) > 2 for r in lm.resid_rows())
    assert 0.02 <= np.mean(hits) <= 0.08


def test_collinear_ma_design():
    spec = SarimaSpec(ma=[1], diff=LEVEL)
    ts, _ = sim(spec, {"MA(1)": 0.3}, length=120, seed=6)
    m = build_model(spec, ts, {"MA(1)": 0.3}, with_errors=False)
    with pytest.raises(CollinearityError) as info:
        lm_test(m, 12)
    assert info.value.columns


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 5), st.integers(1, 35))
def test_band_verdict_monotone_in_max_lag(seed, short):
    ts, _ = sim(SPEC, COEFS, length=200, seed=seed)
    c = residual_check(build_model(SPEC, ts, COEFS, with_errors=False), 36)
    if c.within_band(36):
        assert c.within_band(short)


def test_fitted_model_report(seasonal_series):
    spec, ts, _ = seasonal_series
    rep = diagnose(estimate(spec, ts))
    d = to_dict(rep)
    assert set(d) >= {"adequate"}
    text = render_lm(rep.lm)
    assert "RESID(-12)" in text and "Obs*R" in text.replace("·", "*")
