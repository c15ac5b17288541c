import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bjsarima.errors import LengthError, SpecificationError
from bjsarima.polynomial import LagPolynomial
from bjsarima.sarima import (FittedModel, SarimaSpec, admissible, build_model, criteria,
                             css_residuals, estimate, estimate_with_constant_rule, expand)
from bjsarima.series import TimeSeries
from bjsarima.transform import DifferenceSpec

from .conftest import LEVEL, SEASONAL, sim


def test_expand_cross_term():
    spec = SarimaSpec(ar=[1], sar=[12])
    ar, _ = expand(spec, {"AR(1)": 0.2, "SAR(12)": 0.3})
    # (1 - 0.2B)(1 - 0.3B^12) = 1 - 0.2B - 0.3B^12 + 0.06B^13
    assert ar.degree == 13
    assert ar[1] == pytest.approx(-0.2) and ar[12] == pytest.approx(-0.3)
    assert ar[13] == pytest.approx(0.06)


def test_expand_published_like_cross_term():
    spec = SarimaSpec(ar=[1], sar=[12])
    ar, _ = expand(spec, {"AR(1)": 0.2, "SAR(12)": -0.395})
    assert ar[13] == pytest.approx(-0.079)


def test_expand_ma_sign():
    _, ma = expand(SarimaSpec(ma=[2], sma=[12]), {"MA(2)": 0.5, "SMA(12)": -0.4})
    np.testing.assert_allclose([ma[0], ma[2], ma[12], ma[14]], [1, 0.5, -0.4, -0.2])


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_expand_bilinear(a, b, c):
    spec = SarimaSpec(ar=[1], sar=[12])
    ar, _ = expand(spec, {"AR(1)": a, "SAR(12)": b})
    ar2, _ = expand(spec, {"AR(1)": a + c, "SAR(12)": b})
    # the cross coefficient is linear in the nonseasonal coefficient
    assert ar2[13] - ar[13] == pytest.approx(c * b, abs=1e-12)


def test_missing_coefficient():
    with pytest.raises(SpecificationError, match="SAR\\(12\\)"):
        expand(SarimaSpec(ar=[1], sar=[12]), {"AR(1)": 0.1})


def test_duplicate_lag_rejected():
    with pytest.raises(SpecificationError):
        SarimaSpec(ar=[1, 1])


def test_term_names_order():
    spec = SarimaSpec(ar=[9, 1], ma=[14], sar=[12], sma=[24], constant=True)
    assert spec.term_names == ["AR(1)", "AR(9)", "SAR(12)", "MA(14)", "SMA(24)", "C"]
    assert spec.n_params == 6 and spec.n_arma == 5


def test_css_pure_ar():
    a = css_residuals([1.0, 0.5, 0.25], LagPolynomial([1, -0.5]), LagPolynomial.one())
    np.testing.assert_allclose(a, [1.0, 0.0, 0.0], atol=1e-15)


def test_css_pure_ma():
    a = css_residuals([1.0, 0.0], LagPolynomial.one(), LagPolynomial([1, 0.5]))
    np.testing.assert_allclose(a, [1.0, -0.5])


def test_css_recovers_generating_shocks():
    spec = SarimaSpec(ar=[1], ma=[1], diff=LEVEL)
    coefs = {"AR(1)": 0.5, "MA(1)": 0.3}
    ts, shocks = sim(spec, coefs, length=300, seed=8)
    ar, ma = expand(spec, coefs)
    a = css_residuals(ts.values, ar, ma)
    # the presample effect decays like 0.3^t
    np.testing.assert_allclose(a[50:], shocks[50:], atol=1e-10)


def test_css_loop_oracle():
    rng = np.random.default_rng(0)
    z = rng.normal(size=40)
    phi, theta, mu = 0.4, -0.3, 0.7
    a = np.zeros_like(z)
    for t in range(z.size):
        prev_dev = z[t - 1] - mu if t else 0.0
        prev_a = a[t - 1] if t else 0.0
        a[t] = (z[t] - mu) - phi * prev_dev - theta * prev_a
    got = css_residuals(z, LagPolynomial([1, -phi]), LagPolynomial([1, theta]), delta=mu * (1 - phi))
    np.testing.assert_allclose(got, a, atol=1e-12)


def test_criteria_formula():
    loglik, aic, bic = criteria(100.0, 50, 3)
    l = -25 * (1 + math.log(2 * math.pi) + math.log(2.0))
    assert loglik == pytest.approx(l)
    assert aic == pytest.approx(-2 * l / 50 + 6 / 50)
    assert bic == pytest.approx(-2 * l / 50 + 3 * math.log(50) / 50)


@given(st.floats(1, 1e6), st.integers(20, 500), st.integers(0, 10), st.floats(1.001, 2))
def test_criteria_monotone(ssr, T, n, factor):
    _, aic, bic = criteria(ssr, T, n)
    _, aic2, bic2 = criteria(ssr * factor, T, n)
    _, aic3, bic3 = criteria(ssr, T, n + 1)
    assert aic2 > aic and bic2 > bic
    assert aic3 > aic and bic3 > bic


def test_admissible_seasonal_factor():
    spec = SarimaSpec(sar=[12])
    assert admissible(spec, {"SAR(12)": 0.9})
    assert not admissible(spec, {"SAR(12)": 1.0})


def test_white_noise_with_constant():
    rng = np.random.default_rng(12)
    x = 10 + 2 * rng.normal(size=2000)
    m = estimate(SarimaSpec(constant=True, diff=LEVEL), TimeSeries("1990-01", x))
    assert m.delta == pytest.approx(x.mean(), rel=1e-4)
    assert m.sigma2 == pytest.approx(x.var(), rel=0.02)


def test_optimum_beats_truth(seasonal_series):
    spec, seasonal_series, _ = seasonal_series
    fit = estimate(spec, seasonal_series)
    truth = build_model(spec, seasonal_series, {"AR(1)": 0.5, "SAR(12)": -0.4}, with_errors=False)
    assert fit.ssr <= truth.ssr
    assert fit.coefficients["AR(1)"] == pytest.approx(0.5, abs=0.12)


def test_ar1_t_statistic(ar1_series):
    _, ar1_series, _ = ar1_series
    m = estimate(SarimaSpec(ar=[1], diff=LEVEL), ar1_series)
    phi = m.coefficients["AR(1)"]
    # textbook standard error for AR(1)
    assert m.std_errors["AR(1)"] == pytest.approx(math.sqrt((1 - phi ** 2) / m.nobs), rel=0.1)


def test_too_short_for_parameters():
    with pytest.raises(LengthError):
        estimate(SarimaSpec(ar=[1, 2, 3], diff=LEVEL), TimeSeries("2000-01", np.arange(14.0)))


def test_constant_rule_drops_insignificant(ar1_series):
    _, ar1_series, _ = ar1_series
    m = estimate_with_constant_rule(SarimaSpec(ar=[1], constant=True, diff=LEVEL), ar1_series)
    assert not m.spec.constant


def test_json_round_trip_bit_exact(ar1_series):
    _, ar1_series, _ = ar1_series
    m = estimate(SarimaSpec(ar=[1], ma=[2], constant=True, diff=LEVEL), ar1_series)
    back = FittedModel.from_json(m.to_json())
    assert back.coefficients == m.coefficients
    assert back.delta == m.delta and back.bic == m.bic
    np.testing.assert_array_equal(back.residuals, m.residuals)
    assert back.spec == m.spec


def test_spec_dict_round_trip():
    spec = SarimaSpec(ar=[1, 9], sma=[24], diff=DifferenceSpec(1, 1, 12), constant=True)
    assert SarimaSpec.from_dict(spec.to_dict()) == spec
