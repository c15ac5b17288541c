"""Seasonal ARIMA modelling along the Box-Jenkins workflow.

The functions ``correlogram``, ``forecast`` and ``simulate`` live in the
submodules of the same name.
"""

from .correlogram import Correlogram, acf, ljung_box, pacf
from .diagnostics import DiagnosticsReport, diagnose, lm_test, residual_check
from .forecast import AccuracyReport, ForecastResult, accuracy, fitted_values
from .polynomial import LagPolynomial
from .sarima import FittedModel, SarimaSpec, criteria, css_residuals, estimate, expand
from .select import Leaderboard, rank, suggest_lags
from .series import Period, SeasonalPivot, TimeSeries, emit_csv, ingest_csv, seasonal_pivot
from .simulate import SimulationConfig
from .transform import DifferencedSeries, DifferenceSpec, difference, integrate, restore
from .unitroot import AdfResult, adf_test, decide_differencing

__version__ = "0.1.0"
