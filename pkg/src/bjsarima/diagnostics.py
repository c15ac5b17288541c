"""Residual adequacy checks: residual correlogram and an LM serial-correlation
regression.

The LM auxiliary regression puts the fitted model's own lag terms next to
the lagged residuals: lagged differenced values at the AR and SAR lags,
lagged residuals at the MA and SMA lags, a constant when the model has one,
and ``RESID(-1) .. RESID(-lags)``.  Lagged values reaching before the
sample start are zero.  This is a linearized Breusch-Godfrey layout for
ARMA models, not a reproduction of any particular package's internals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy import stats

from .correlogram import Correlogram, correlogram
from .errors import CollinearityError, LengthError
from .sarima import FittedModel

ADEQUACY_T = 2.0
DEFAULT_MAX_LAG = 36
DEFAULT_LM_LAGS = 12


@dataclass(frozen=True)
class LMRow:
    name: str
    coefficient: float
    std_error: float
    t_stat: float
    p_value: float


@dataclass(frozen=True, eq=False)
class LMResult:
    rows: tuple
    nobs: int
    dof: int
    obs_r2: float
    obs_r2_prob: float
    lags: int

    def resid_rows(self) -> list[LMRow]:
        return [r for r in self.rows if r.name.startswith("RESID(")]

    def max_abs_t(self) -> float:
        return max((abs(r.t_stat) for r in self.rows), default=0.0)


def residual_check(model: FittedModel, max_lag: int = DEFAULT_MAX_LAG) -> Correlogram:
    """Correlogram of the residuals; Q-statistic degrees of freedom are
    reduced by the number of ARMA coefficients."""
    a = np.asarray(model.residuals, dtype=float)
    max_lag = min(max_lag, (a.size - 1) // 2)
    return correlogram(a, max_lag, df_adjust=model.spec.n_arma)


def _lagged(x: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(x)
    if k < x.size:
        out[k:] = x[: x.size - k]
    return out


def _design(model: FittedModel, lags: int):
    a = np.asarray(model.residuals, dtype=float)
    z = model.differenced.values
    cols, names = [], []
    spec = model.spec
    if spec.constant:
        cols.append(np.ones(a.size))
        names.append("C")
    for k in spec.ar:
        cols.append(_lagged(z, k)); names.append(f"AR({k})")
    for k in spec.sar:
        cols.append(_lagged(z, k)); names.append(f"SAR({k})")
    for k in spec.ma:
        cols.append(_lagged(a, k)); names.append(f"MA({k})")
    for k in spec.sma:
        cols.append(_lagged(a, k)); names.append(f"SMA({k})")
    for k in range(1, lags + 1):
        cols.append(_lagged(a, k)); names.append(f"RESID(-{k})")
    return a, np.column_stack(cols), names


def lm_test(model: FittedModel, lags: int = DEFAULT_LM_LAGS) -> LMResult:
    """Auxiliary least-squares regression of residuals on model terms and
    lagged residuals.  Two-sided p-values use Student's t with
    ``nobs - n_regressors`` degrees of freedom."""
    if lags < 1:
        raise ValueError("lags must be at least 1")
    a, X, names = _design(model, lags)
    n, p = X.shape
    if n <= p:
        raise LengthError(f"{n} residuals cannot support {p} auxiliary regressors")
    q, r, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(n, p) * np.finfo(float).eps * diag[0] if diag.size and diag[0] > 0 else 0.0
    rank = int(np.sum(diag > max(tol, 1e-10 * (diag[0] if diag.size else 1.0))))
    if rank < p:
        dependent = [names[i] for i in piv[rank:]]
        raise CollinearityError(
            "collinear LM design; dependent columns: " + ", ".join(dependent), columns=dependent)
    beta, *_ = np.linalg.lstsq(X, a, rcond=None)
    resid = a - X @ beta
    dof = n - p
    s2 = float(resid @ resid) / dof
    xtx_inv = np.linalg.inv(X.T @ X)
    se = np.sqrt(s2 * np.diag(xtx_inv))
    tvals = beta / se
    pvals = 2.0 * stats.t.sf(np.abs(tvals), dof)
    rows = tuple(LMRow(nm, float(b), float(s), float(t), float(pv))
                 for nm, b, s, t, pv in zip(names, beta, se, tvals, pvals))
    # uncentred R^2: residuals have no intercept of their own
    tss = float(a @ a)
    r2 = 1.0 - float(resid @ resid) / tss if tss > 0 else 0.0
    obs_r2 = n * r2
    return LMResult(rows=rows, nobs=n, dof=dof, obs_r2=obs_r2,
                    obs_r2_prob=float(stats.chi2.sf(obs_r2, lags)), lags=lags)


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    residual_correlogram: Correlogram
    lm: LMResult
    adequate: bool

    @property
    def lm_rows(self):
        return self.lm.rows


def diagnose(model: FittedModel, max_lag: int = DEFAULT_MAX_LAG,
             lm_lags: int = DEFAULT_LM_LAGS) -> DiagnosticsReport:
    """Residual correlogram plus LM regression.

    Adequate when every residual AC and PAC up to ``max_lag`` lies inside
    ``+/-2/sqrt(T)`` and every LM row has ``|t| < 2``.
    """
    c = residual_check(model, max_lag)
    lm = lm_test(model, lm_lags)
    ok = c.within_band() and all(abs(r.t_stat) < ADEQUACY_T for r in lm.rows)
    return DiagnosticsReport(residual_correlogram=c, lm=lm, adequate=bool(ok))


def render_lm(lm: LMResult) -> str:
    lines = [f"LM test for residual serial correlation ({lm.lags} lags, "
             f"{lm.nobs} observations)",
             f"{'Variable':<11} {'Coefficient':>12} {'Std. Error':>11} {'t-Statistic':>12} {'Prob.':>7}"]
    for r in lm.rows:
        lines.append(f"{r.name:<11} {r.coefficient:>12.3f} {r.std_error:>11.3f} "
                     f"{r.t_stat:>12.3f} {r.p_value:>7.3f}")
    lines.append(f"Obs*R-squared {lm.obs_r2:.3f}   Prob. Chi-Square({lm.lags}) {lm.obs_r2_prob:.3f}")
    return "\n".join(lines) + "\n"


def to_dict(rep: DiagnosticsReport) -> dict:
    return {
        "adequate": rep.adequate,
        "residual_correlogram": rep.residual_correlogram.to_dict(),
        "lm": {
            "lags": rep.lm.lags, "nobs": rep.lm.nobs, "obs_r2": rep.lm.obs_r2,
            "obs_r2_prob": rep.lm.obs_r2_prob,
            "rows": [{"variable": r.name, "coefficient": r.coefficient, "std_error": r.std_error,
                      "t_stat": r.t_stat, "p_value": r.p_value} for r in rep.lm.rows],
        },
    }
