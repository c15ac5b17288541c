"""Candidate ranking by information criteria and correlogram-based lag hints."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .correlogram import Correlogram
from .errors import BoxJenkinsError, EstimationFailed, IncomparableCandidatesError, InputError
from .sarima import FittedModel, SarimaSpec, estimate

NONSEASONAL_CAP = 24
SEASONAL_MULTIPLES = 3


@dataclass(frozen=True, eq=False)
class LeaderboardRow:
    spec: SarimaSpec
    bic: float
    aic: float
    adj_r2: float
    converged: bool
    model: Optional[FittedModel] = None
    error: Optional[str] = None

    def key(self) -> tuple:
        bic = self.bic if math.isfinite(self.bic) else math.inf
        aic = self.aic if math.isfinite(self.aic) else math.inf
        return (not self.converged, bic, aic, self.spec.n_params, self.spec.sort_key())


@dataclass(frozen=True, eq=False)
class Leaderboard:
    rows: tuple

    @property
    def best(self) -> LeaderboardRow:
        return self.rows[0]

    def to_dict(self) -> dict:
        return {"rows": [{"rank": i + 1, "model": r.spec.label(), "spec": r.spec.to_dict(),
                          "bic": _j(r.bic), "aic": _j(r.aic), "adj_r2": _j(r.adj_r2),
                          "converged": r.converged, "error": r.error}
                         for i, r in enumerate(self.rows)]}


def _j(v):
    return float(v) if v is not None and math.isfinite(v) else None


def _fit_row(spec: SarimaSpec, ts) -> LeaderboardRow:
    try:
        m = estimate(spec, ts)
    except EstimationFailed as exc:
        m = exc.best
        if m is None:
            return LeaderboardRow(spec, math.nan, math.nan, math.nan, False, error=str(exc))
        return LeaderboardRow(spec, m.bic, m.aic, m.adj_r2, False, model=m, error=str(exc))
    except BoxJenkinsError as exc:
        return LeaderboardRow(spec, math.nan, math.nan, math.nan, False, error=str(exc))
    return LeaderboardRow(spec, m.bic, m.aic, m.adj_r2, True, model=m)


def rank(specs: Sequence[SarimaSpec], ts, max_workers: int = 1) -> Leaderboard:
    """Fit every candidate and sort by BIC, then AIC, then parameter count.

    Failed or non-converged fits are kept, flagged, and sorted last.  All
    candidates must share one differencing spec so the criteria refer to
    the same dependent series.
    """
    specs = list(specs)
    if not specs:
        raise InputError("no candidate models given")
    diffs = {s.diff for s in specs}
    if len(diffs) > 1:
        raise IncomparableCandidatesError(
            "candidates use different differencing specs: "
            + "; ".join(f"d={d.d} D={d.D} s={d.s}" for d in sorted(diffs, key=lambda d: (d.d, d.D, d.s))))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(lambda s: _fit_row(s, ts), specs))
    else:
        rows = [_fit_row(s, ts) for s in specs]
    return Leaderboard(rows=tuple(sorted(rows, key=LeaderboardRow.key)))


def suggest_lags(c: Correlogram, T: Optional[int] = None, s: int = 12):
    """Lags whose PAC (AR candidates) or AC (MA candidates) leave the band.

    Keeps at most 24 nonseasonal lags and the first three seasonal
    multiples of ``s``.  Returns ``(ar_lags, ma_lags)``.
    """
    T = c.nobs if T is None else T
    band = 2.0 / math.sqrt(T)

    def pick(values):
        lags = [k for k, v in enumerate(values, start=1) if abs(v) > band]
        seasonal = [k for k in lags if k % s == 0][:SEASONAL_MULTIPLES]
        nonseasonal = [k for k in lags if k % s != 0][:NONSEASONAL_CAP]
        return sorted(nonseasonal + seasonal)

    return pick(c.pac), pick(c.ac)


def render(board: Leaderboard) -> str:
    lines = [f"{'No':>3}  {'Model Variable':<48} {'BIC':>9} {'AIC':>9} {'Adj. R2':>8}  Conv"]
    for i, r in enumerate(board.rows, start=1):
        def f(v, w):
            return f"{v:>{w}.3f}" if math.isfinite(v) else f"{'n/a':>{w}}"
        lines.append(f"{i:>3}  {r.spec.label():<48} {f(r.bic, 9)} {f(r.aic, 9)} "
                     f"{f(r.adj_r2, 8)}  {'yes' if r.converged else 'NO'}")
    return "\n".join(lines) + "\n"


def render_csv(board: Leaderboard) -> str:
    out = ["rank,model,bic,aic,adj_r2,converged"]
    for i, r in enumerate(board.rows, start=1):
        vals = ["" if not math.isfinite(v) else repr(float(v)) for v in (r.bic, r.aic, r.adj_r2)]
        out.append(f'{i},"{r.spec.label()}",{vals[0]},{vals[1]},{vals[2]},{str(r.converged).lower()}')
    return "\n".join(out) + "\n"
