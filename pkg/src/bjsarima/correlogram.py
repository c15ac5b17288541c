"""Sample autocorrelation, partial autocorrelation and Ljung-Box Q."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DegenerateSeriesError, LengthError

_PIVOT_EPS = 1e-12


def acf(values, max_lag: int) -> np.ndarray:
    """Autocorrelations ``r_1 .. r_max_lag``.

    Uses the full-sample sum of squares as denominator for every lag, so
    ``|r_k| <= 1``.  Lag 0 is not included.
    """
    x = np.asarray(values, dtype=float).ravel()
    T = x.size
    if max_lag < 0 or T < max_lag + 1:
        raise LengthError(f"need at least {max_lag + 1} observations for {max_lag} lags, have {T}")
    dev = x - x.mean()
    denom = dev @ dev
    if denom <= 0.0 or denom <= 1e-28 * max(1.0, float(np.max(np.abs(x)))) ** 2:
        raise DegenerateSeriesError("series has zero variance; autocorrelation undefined")
    return np.array([dev[: T - k] @ dev[k:] for k in range(1, max_lag + 1)]) / denom


def durbin_levinson(r: Sequence[float]) -> np.ndarray:
    """Partial autocorrelations from autocorrelations ``r_1 .. r_K``."""
    r = np.asarray(r, dtype=float)
    K = r.size
    pac = np.empty(K)
    if K == 0:
        return pac
    phi = np.array([r[0]])
    pac[0] = r[0]
    v = 1.0 - r[0] ** 2
    for k in range(1, K):
        if v <= _PIVOT_EPS:
            raise DegenerateSeriesError(
                f"Durbin-Levinson recursion hit a unit pivot at lag {k + 1}")
        kk = (r[k] - phi @ r[k - 1::-1]) / v
        phi = np.concatenate([phi - kk * phi[::-1], [kk]])
        pac[k] = kk
        v *= 1.0 - kk ** 2
    return pac


def pacf(values, max_lag: int) -> np.ndarray:
    x = np.asarray(values, dtype=float).ravel()
    if max_lag >= x.size / 2:
        raise LengthError(f"max_lag must be below T/2 = {x.size / 2:g}")
    return durbin_levinson(acf(x, max_lag))


def ljung_box(ac, T: int, df_adjust: int = 0):
    """Cumulative Ljung-Box ``Q(K) = T(T+2) sum_{k<=K} r_k^2 / (T-k)``.

    Returns ``(q, prob)`` arrays; ``prob[K-1]`` is the chi-square upper tail
    with ``K - df_adjust`` degrees of freedom, or NaN when ``K <= df_adjust``.
    """
    r = np.asarray(ac, dtype=float)
    K = r.size
    if T <= K:
        raise LengthError(f"T={T} must exceed the largest lag {K}")
    if df_adjust < 0:
        raise ValueError("df_adjust must be non-negative")
    lags = np.arange(1, K + 1)
    q = T * (T + 2) * np.cumsum(r ** 2 / (T - lags))
    dof = lags - df_adjust
    prob = np.full(K, np.nan)
    ok = dof > 0
    prob[ok] = stats.chi2.sf(q[ok], dof[ok])
    return q, prob


@dataclass(frozen=True, eq=False)
class Correlogram:
    ac: np.ndarray
    pac: np.ndarray
    q_stat: np.ndarray
    q_prob: np.ndarray
    nobs: int
    df_adjust: int = 0

    @property
    def lags(self) -> np.ndarray:
        return np.arange(1, self.ac.size + 1)

    @property
    def band(self) -> float:
        return 2.0 / np.sqrt(self.nobs)

    @property
    def max_lag(self) -> int:
        return self.ac.size

    def prob(self, lag: int) -> Optional[float]:
        p = self.q_prob[lag - 1]
        return None if np.isnan(p) else float(p)

    def within_band(self, max_lag: Optional[int] = None) -> bool:
        k = self.max_lag if max_lag is None else min(max_lag, self.max_lag)
        b = self.band
        return bool(np.all(np.abs(self.ac[:k]) < b) and np.all(np.abs(self.pac[:k]) < b))

    def spikes(self, max_lag: Optional[int] = None) -> int:
        """Number of autocorrelations outside the band."""
        k = self.max_lag if max_lag is None else min(max_lag, self.max_lag)
        return int(np.sum(np.abs(self.ac[:k]) > self.band))

    def to_dict(self) -> dict:
        return {
            "nobs": self.nobs,
            "df_adjust": self.df_adjust,
            "band": self.band,
            "rows": [
                {"lag": int(k), "ac": float(a), "pac": float(p), "q_stat": float(q),
                 "prob": None if np.isnan(pr) else float(pr)}
                for k, a, p, q, pr in zip(self.lags, self.ac, self.pac, self.q_stat, self.q_prob)
            ],
        }


def correlogram(values, max_lag: int, df_adjust: int = 0) -> Correlogram:
    x = np.asarray(values, dtype=float).ravel()
    ac = acf(x, max_lag)
    pac = pacf(x, max_lag)
    q, prob = ljung_box(ac, x.size, df_adjust)
    return Correlogram(ac=ac, pac=pac, q_stat=q, q_prob=prob, nobs=x.size, df_adjust=df_adjust)


def _bar(value: float, band: float, half: int = 10) -> str:
    # centred text bar; '|' marks the zero line, ':' the confidence band
    cells = [" "] * (2 * half + 1)
    cells[half] = "|"
    b = min(half, int(round(band * half)))
    if b > 0:
        cells[half - b] = ":"
        cells[half + b] = ":"
    n = min(half, int(round(abs(value) * half)))
    for i in range(1, n + 1):
        cells[half + i if value > 0 else half - i] = "*"
    return "".join(cells)


def render(c: Correlogram, title: str = "") -> str:
    lines = []
    if title:
        lines.append(title)
    lines.append(f"Included observations: {c.nobs}   band: +/-{c.band:.3f}")
    lines.append(f"{'Autocorrelation':<21}  {'Partial Correlation':<21}  "
                 f"{'':>3} {'AC':>7} {'PAC':>7} {'Q-Stat':>9} {'Prob':>6}")
    for k, a, p, q, pr in zip(c.lags, c.ac, c.pac, c.q_stat, c.q_prob):
        prob = "" if np.isnan(pr) else f"{pr:.3f}"
        lines.append(f"{_bar(a, c.band)}  {_bar(p, c.band)}  "
                     f"{k:>3} {a:>7.3f} {p:>7.3f} {q:>9.3f} {prob:>6}")
    return "\n".join(lines) + "\n"


def render_csv(c: Correlogram) -> str:
    out = ["lag,ac,pac,q_stat,prob"]
    for k, a, p, q, pr in zip(c.lags, c.ac, c.pac, c.q_stat, c.q_prob):
        prob = "" if np.isnan(pr) else repr(float(pr))
        out.append(f"{int(k)},{float(a)!r},{float(p)!r},{float(q)!r},{prob}")
    return "\n".join(out) + "\n"
