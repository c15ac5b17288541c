"""Point forecasts on the original scale and forecast-accuracy measures."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, HorizonError
from .sarima import FittedModel
from .series import MAX_YEAR, Period
from .transform import integrate


@dataclass(frozen=True, eq=False)
class ForecastResult:
    origin: Period
    horizon: int
    points: np.ndarray

    def periods(self) -> list[Period]:
        return [self.origin + h for h in range(1, self.horizon + 1)]


def forecast_z(model: FittedModel, horizon: int) -> np.ndarray:
    """Conditional-expectation forecasts of the differenced series.

    Works on deviations ``x = z - mu``: ``x_hat = -sum ar_k x_{t-k} +
    sum ma_k a_{t-k}`` with future shocks zero and presample values zero.
    """
    z = model.differenced.values
    ar, ma = model.ar_poly.coef, model.ma_poly.coef
    mu = model.mu
    T = z.size
    x = np.concatenate([z - mu, np.zeros(horizon)])
    a = np.concatenate([np.asarray(model.residuals, float), np.zeros(horizon)])
    for t in range(T, T + horizon):
        acc = 0.0
        for k in range(1, ar.size):
            if t - k >= 0:
                acc -= ar[k] * x[t - k]
        for k in range(1, ma.size):
            if 0 <= t - k < T:
                acc += ma[k] * a[t - k]
        x[t] = acc
    return x[T:] + mu


def forecast(model: FittedModel, horizon: int) -> ForecastResult:
    if horizon < 1:
        raise HorizonError(f"horizon must be at least 1, got {horizon}")
    origin = model.series.end
    if (origin + horizon).year > MAX_YEAR:
        raise HorizonError(f"horizon {horizon} runs past year {MAX_YEAR}")
    zf = forecast_z(model, horizon)
    points = integrate(model.differenced, zf)
    points.flags.writeable = False
    return ForecastResult(origin=origin, horizon=horizon, points=points)


def fitted_values(model: FittedModel) -> tuple:
    """In-sample one-step-ahead predictions on the original scale.

    Returns ``(periods, values)`` for the observations after the
    differencing warmup; each prediction equals ``y_t - a_t``.
    """
    y = model.series.values
    span = model.spec.diff.span
    pred = y[span:] - np.asarray(model.residuals)
    periods = [model.series.period(i) for i in range(span, len(model.series))]
    return periods, pred


@dataclass(frozen=True)
class AccuracyReport:
    rmse: float
    mad: float
    mape: Optional[float]
    theil_u: float
    n: int

    def to_dict(self) -> dict:
        return {"n": self.n, "rmse": self.rmse, "mad": self.mad, "mape": self.mape,
                "theil_u": self.theil_u}


def accuracy(actual, predicted) -> AccuracyReport:
    """RMSE, MAD, MAPE (percent) and Theil's U1.

    ``U1 = rmse / (sqrt(mean a^2) + sqrt(mean p^2))``, bounded in [0, 1].
    MAPE is ``None`` (with a warning) if any actual value is zero.
    """
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.size != p.size:
        raise DimensionError(f"actual has {a.size} values, predicted has {p.size}")
    if a.size == 0:
        raise DimensionError("accuracy needs at least one value")
    err = a - p
    rmse = math.sqrt(float(np.mean(err ** 2)))
    mad = float(np.mean(np.abs(err)))
    if np.any(a == 0.0):
        warnings.warn("actual series contains zeros; MAPE not reported", RuntimeWarning,
                      stacklevel=2)
        mape = None
    else:
        mape = 100.0 * float(np.mean(np.abs(err) / np.abs(a)))
    denom = math.sqrt(float(np.mean(a ** 2))) + math.sqrt(float(np.mean(p ** 2)))
    theil = rmse / denom if denom > 0 else 0.0
    return AccuracyReport(rmse=rmse, mad=mad, mape=mape, theil_u=theil, n=int(a.size))


def render_accuracy(rep: AccuracyReport) -> str:
    mape = "n/a" if rep.mape is None else f"{rep.mape:.3f}"
    return (f"Forecast accuracy (n={rep.n})\n"
            f"  RMSE       {rep.rmse:.3f}\n"
            f"  MAD        {rep.mad:.3f}\n"
            f"  MAPE (%)   {mape}\n"
            f"  Theil's U  {rep.theil_u:.3f}\n")


def render_table(res: ForecastResult) -> str:
    """Month-by-year table in the layout of a monthly forecast report."""
    from .series import MONTH_NAMES
    by_year = {}
    for p, v in zip(res.periods(), res.points):
        by_year.setdefault(p.year, {})[p.month] = v
    years = sorted(by_year)
    lines = [f"{'Month':<10}" + "".join(f"{y:>12d}" for y in years)]
    for m in range(1, 13):
        cells = [by_year[y].get(m) for y in years]
        if all(c is None for c in cells):
            continue
        lines.append(f"{MONTH_NAMES[m - 1]:<10}" +
                     "".join(f"{'':>12}" if c is None else f"{c:>12.3f}" for c in cells))
    return "\n".join(lines) + "\n"
