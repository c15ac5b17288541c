"""Augmented Dickey-Fuller test, constant-only deterministic term.

Critical values come from MacKinnon's (2010) response surfaces,
p-values from MacKinnon's (1994) asymptotic approximation.  Both are
embedded below for the single-series constant case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import ndtr

from .correlogram import acf
from .errors import CollinearityError, DegenerateSeriesError, LengthError, UnsupportedFrequencyError
from .transform import DifferenceSpec, difference

# tau_c: crit(T) = b0 + b1/T + b2/T^2 + b3/T^3 at 1%, 5%, 10%
_CRIT_SURFACE = {
    "1%": (-3.43035, -6.5393, -16.786, -79.433),
    "5%": (-2.86154, -2.8903, -4.234, -40.040),
    "10%": (-2.56677, -1.5384, -2.809, 0.0),
}

# p = Phi(poly(tau)); small-p branch for tau <= TAU_STAR
_TAU_STAR = -1.61
_TAU_MIN = -18.83
_TAU_MAX = 2.74
_SMALLP = (2.1659, 1.4412, 3.8269e-2)
_LARGEP = (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2)


def mackinnon_critical(nobs: float) -> dict:
    """Critical values at 1%, 5% and 10% for a regression with ``nobs`` rows."""
    inv = 0.0 if math.isinf(nobs) else 1.0 / nobs
    return {level: b[0] + b[1] * inv + b[2] * inv ** 2 + b[3] * inv ** 3
            for level, b in _CRIT_SURFACE.items()}


def mackinnon_pvalue(tau: float) -> float:
    if tau > _TAU_MAX:
        return 1.0
    if tau < _TAU_MIN:
        return 0.0
    coef = _SMALLP if tau <= _TAU_STAR else _LARGEP
    return float(ndtr(np.polynomial.polynomial.polyval(tau, coef)))


def schwert_maxlag(nobs: int) -> int:
    return int(math.floor(12.0 * (nobs / 100.0) ** 0.25))


@dataclass(frozen=True)
class AdfResult:
    t_stat: float
    p_value: float
    critical: dict
    lags_used: int
    nobs: int
    deterministic: str = "constant"

    def rejects(self, level: str = "5%") -> bool:
        """True when the unit-root null is rejected at ``level``."""
        return self.t_stat < self.critical[level]

    def to_dict(self) -> dict:
        return {"t_stat": self.t_stat, "p_value": self.p_value, "critical": dict(self.critical),
                "lags_used": self.lags_used, "nobs": self.nobs,
                "deterministic": self.deterministic}


def _design(y: np.ndarray, k: int, maxlag: int):
    # rows aligned on a common sample starting at maxlag+1 so ICs compare
    dy = np.diff(y)
    n = dy.size - maxlag
    target = dy[maxlag:]
    cols = [np.ones(n), y[maxlag:-1]]
    cols += [dy[maxlag - i: dy.size - i] for i in range(1, k + 1)]
    return target, np.column_stack(cols)


def _ols(target, X):
    n, p = X.shape
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-10 * max(diag.max(), 1e-300):
        bad = [i for i in range(p) if diag[i] <= 1e-10 * diag.max()]
        raise CollinearityError("singular ADF regressor matrix", columns=bad)
    beta = np.linalg.solve(r, q.T @ target)
    resid = target - X @ beta
    ssr = float(resid @ resid)
    return beta, ssr, r


def adf_test(values, max_lags: Optional[int] = None) -> AdfResult:
    """ADF regression ``dy_t = a + theta*y_{t-1} + sum b_i dy_{t-i} + e_t``.

    The augmentation order is chosen by AIC over ``0..max_lags`` on a common
    sample; ``max_lags=None`` uses Schwert's bound ``floor(12 (T/100)^{1/4})``.
    The selected order is then re-estimated on all available rows.
    """
    y = np.asarray(getattr(values, "values", values), dtype=float).ravel()
    T = y.size
    if max_lags is None:
        max_lags = schwert_maxlag(T)
        # keep the auto bound usable for short series
        max_lags = max(0, min(max_lags, T - 21))
    if T < 20 + max_lags:
        raise LengthError(f"ADF needs at least {20 + max_lags} observations, have {T}")
    if np.ptp(y) == 0.0:
        raise DegenerateSeriesError("constant series: ADF regression undefined")

    best_k, best_ic = 0, np.inf
    for k in range(max_lags + 1):
        target, X = _design(y, k, max_lags)
        n = target.size
        _, ssr, _ = _ols(target, X)
        if ssr <= 0:
            raise DegenerateSeriesError("perfect fit in ADF regression")
        llf = -0.5 * n * (math.log(2 * math.pi) + math.log(ssr / n) + 1)
        ic = -2 * llf + 2 * X.shape[1]
        if ic < best_ic - 1e-12:
            best_k, best_ic = k, ic

    target, X = _design(y, best_k, best_k)
    beta, ssr, r = _ols(target, X)
    n, p = X.shape
    s2 = ssr / (n - p)
    rinv = np.linalg.inv(r)
    se_theta = math.sqrt(s2 * float(rinv[1] @ rinv[1]))
    tau = float(beta[1] / se_theta)
    return AdfResult(t_stat=tau, p_value=mackinnon_pvalue(tau),
                     critical=mackinnon_critical(n), lags_used=best_k, nobs=n)


SPIKE_LAGS = 36


@dataclass(frozen=True)
class DifferencingAdvice:
    recommendation: str
    adf: dict = field(default_factory=dict)
    spikes: dict = field(default_factory=dict)

    @property
    def spec(self) -> DifferenceSpec:
        return {"none": DifferenceSpec(0, 0, 12), "regular": DifferenceSpec(1, 0, 12),
                "seasonal": DifferenceSpec(0, 1, 12)}[self.recommendation]


def _spike_count(values) -> int:
    x = np.asarray(values, dtype=float)
    k = min(SPIKE_LAGS, x.size - 1)
    r = acf(x, k)
    return int(np.sum(np.abs(r) > 2.0 / math.sqrt(x.size)))


def decide_differencing(ts, level: str = "5%") -> DifferencingAdvice:
    """Recommend ``none``, ``regular`` or ``seasonal`` differencing.

    If the ADF test rejects a unit root on the original series no
    differencing is recommended.  Otherwise the regular (d=1) and seasonal
    (D=1, s=12) differences are tested, and among those that reject the
    one with fewer autocorrelation spikes over lags 1..36 wins; ties go to
    seasonal.  If neither rejects, both stay in contention.
    """
    freq = getattr(ts, "frequency", 12)
    if freq != 12:
        raise UnsupportedFrequencyError(f"seasonal branch needs frequency 12, got {freq}")
    y = np.asarray(getattr(ts, "values", ts), dtype=float)
    if np.ptp(y) == 0.0:
        raise DegenerateSeriesError("constant series: nothing to difference")
    variants = {
        "none": y,
        "regular": difference(y, DifferenceSpec(1, 0, 12)).values,
        "seasonal": difference(y, DifferenceSpec(0, 1, 12)).values,
    }
    results = {name: adf_test(v) for name, v in variants.items()}
    spikes = {name: _spike_count(v) for name, v in variants.items()}
    if results["none"].rejects(level):
        choice = "none"
    else:
        pool = [n for n in ("regular", "seasonal") if results[n].rejects(level)]
        pool = pool or ["regular", "seasonal"]
        choice = "seasonal" if "seasonal" in pool else pool[0]
        if "regular" in pool and spikes["regular"] < spikes["seasonal"]:
            choice = "regular"
    return DifferencingAdvice(recommendation=choice, adf=results, spikes=spikes)


def render(res: AdfResult, title: str = "") -> str:
    lines = [title] if title else []
    lines += [
        "Augmented Dickey-Fuller test (constant, no trend)",
        f"  t-Statistic        {res.t_stat:9.3f}",
        f"  one-sided p-value  {res.p_value:9.3f}",
        f"  lags used          {res.lags_used:9d}",
        f"  observations       {res.nobs:9d}",
    ]
    for level in ("1%", "5%", "10%"):
        lines.append(f"  {level:>3} critical value {res.critical[level]:9.3f}")
    return "\n".join(lines) + "\n"
