"""Command-line front end for the identification / estimation / diagnostic
checking / forecasting workflow.

Exit codes: 0 success, 1 bad input or flags, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import warnings
from typing import Optional, Sequence

import numpy as np

from . import correlogram as corr
from . import diagnostics as diag
from . import forecast as fc
from . import sarima
from . import select as sel
from . import unitroot
from .errors import BoxJenkinsError, CollinearityError, ComputationError, InputError
from .series import MONTH_NAMES, TimeSeries, emit_csv, emit_rows, ingest_csv, read_csv, seasonal_pivot
from .simulate import SimulationConfig, simulate
from .transform import DifferenceSpec, difference


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _lags(values) -> list[int]:
    out = []
    for v in values or ():
        for part in str(v).split(","):
            part = part.strip()
            if part:
                try:
                    out.append(int(part))
                except ValueError:
                    raise UsageError(f"lag {part!r} is not an integer") from None
    return out


def _diff(args) -> DifferenceSpec:
    return DifferenceSpec(args.d, args.D, args.s)


def _read_series(path) -> TimeSeries:
    try:
        return read_csv(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _read_text(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def _load_model(path) -> sarima.FittedModel:
    try:
        return sarima.FittedModel.from_dict(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path} is not a fitted-model document: missing {exc}") from None


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands -----------------------------------------------------------

def cmd_ingest(args) -> str:
    ts = _read_series(args.input)
    if args.format == "csv":
        return emit_csv(ts)
    if args.format == "json":
        return _dumps({"start": str(ts.start), "end": str(ts.end), "n": len(ts),
                       "frequency": ts.frequency, "values": [float(v) for v in ts.values]})
    v = ts.values
    return (f"Observations  {len(ts)}\nStart         {ts.start}\nEnd           {ts.end}\n"
            f"Mean          {v.mean():.3f}\nMin           {v.min():.3f}\nMax           {v.max():.3f}\n")


def cmd_pivot(args) -> str:
    ts = _read_series(args.input)
    pv = seasonal_pivot(ts)
    means = pv.column_means()
    if args.format == "json":
        return _dumps({"years": list(pv.years), "cells": [list(r) for r in pv.cells],
                       "column_means": means, "peak_month": pv.peak_month(),
                       "trough_month": pv.trough_month()})
    if args.format == "csv":
        lines = ["year," + ",".join(m[:3].lower() for m in MONTH_NAMES)]
        for y, row in zip(pv.years, pv.cells):
            lines.append(f"{y}," + ",".join("" if c is None else repr(float(c)) for c in row))
        return "\n".join(lines) + "\n"
    head = f"{'Year':<6}" + "".join(f"{m[:3]:>10}" for m in MONTH_NAMES)
    lines = [head]
    for y, row in zip(pv.years, pv.cells):
        lines.append(f"{y:<6}" + "".join(f"{'':>10}" if c is None else f"{c:>10.3f}" for c in row))
    lines.append(f"{'Mean':<6}" + "".join(f"{m:>10.3f}" for m in means))
    lines.append(f"Peak month:   {MONTH_NAMES[pv.peak_month() - 1]}")
    lines.append(f"Trough month: {MONTH_NAMES[pv.trough_month() - 1]}")
    return "\n".join(lines) + "\n"


def cmd_acf(args) -> str:
    ts = _read_series(args.input)
    z = difference(ts, _diff(args)).values
    c = corr.correlogram(z, args.max_lag)
    if args.format == "json":
        return _dumps(c.to_dict())
    if args.format == "csv":
        return corr.render_csv(c)
    return corr.render(c, f"Correlogram (d={args.d}, D={args.D}, s={args.s})")


def cmd_adf(args) -> str:
    ts = _read_series(args.input)
    z = difference(ts, _diff(args)).values
    res = unitroot.adf_test(z, args.max_lags)
    if args.format == "json":
        return _dumps(res.to_dict())
    if args.format == "csv":
        return ("t_stat,p_value,lags_used,nobs,crit_1,crit_5,crit_10\n"
                f"{float(res.t_stat)!r},{float(res.p_value)!r},{res.lags_used},{res.nobs},"
                f"{float(res.critical['1%'])!r},{float(res.critical['5%'])!r},"
                f"{float(res.critical['10%'])!r}\n")
    return unitroot.render(res, f"Series differenced with d={args.d}, D={args.D}, s={args.s}")


def _spec_from_flags(args, diff=None) -> sarima.SarimaSpec:
    return sarima.SarimaSpec(ar=_lags(args.ar), ma=_lags(args.ma), sar=_lags(args.sar),
                             sma=_lags(args.sma), diff=diff or _diff(args),
                             constant=args.constant)


def _has_lag_flags(args) -> bool:
    return any((args.ar, args.ma, args.sar, args.sma)) or args.constant


def cmd_fit(args) -> str:
    ts = _read_series(args.input)
    model = sarima.estimate(_spec_from_flags(args), ts)
    if args.format == "text":
        return sarima.render(model)
    if args.format == "csv":
        lines = ["variable,coefficient,std_error,t_stat"]
        for k, v in model.params().items():
            lines.append(f"{k},{float(v)!r},{float(model.std_errors.get(k, float('nan')))!r},"
                         f"{float(model.t_stats.get(k, float('nan')))!r}")
        return "\n".join(lines) + "\n"
    return model.to_json() + "\n"


def _candidate_specs(path, default_diff: Optional[DifferenceSpec] = None) -> list[sarima.SarimaSpec]:
    doc = _load_json(path)
    if not isinstance(doc, list) or not doc:
        raise UsageError(f"{path} must hold a non-empty JSON array of model specs")
    specs = []
    for item in doc:
        if not isinstance(item, dict):
            raise UsageError(f"{path}: every candidate must be a JSON object")
        if default_diff is not None:
            item = {"d": default_diff.d, "D": default_diff.D, "s": default_diff.s, **item}
        specs.append(sarima.SarimaSpec.from_dict(item))
    return specs


def cmd_select(args) -> str:
    ts = _read_series(args.input)
    specs = _candidate_specs(args.candidates)
    board = sel.rank(specs, ts, max_workers=args.workers)
    if args.format == "json":
        return _dumps(board.to_dict())
    if args.format == "csv":
        return sel.render_csv(board)
    return sel.render(board)


def cmd_diagnose(args) -> str:
    model = _load_model(args.model)
    rep = diag.diagnose(model, args.max_lag, args.lm_lags)
    if args.format == "json":
        return _dumps(diag.to_dict(rep))
    if args.format == "csv":
        return corr.render_csv(rep.residual_correlogram)
    return (corr.render(rep.residual_correlogram, "Correlogram of residuals") + "\n"
            + diag.render_lm(rep.lm)
            + f"\nModel adequate: {'yes' if rep.adequate else 'no'}\n")


def cmd_forecast(args) -> str:
    model = _load_model(args.model)
    res = fc.forecast(model, args.horizon)
    if args.format == "json":
        return _dumps({"origin": str(res.origin), "horizon": res.horizon,
                       "points": [{"period": str(p), "forecast": float(v)}
                                  for p, v in zip(res.periods(), res.points)]})
    if args.format == "text":
        return fc.render_table(res)
    return emit_rows(res.periods(), res.points, "forecast")


def _aligned(actual: TimeSeries, predicted: TimeSeries):
    a = {p: v for p, v in zip(actual.periods(), actual.values)}
    pairs = [(a[p], v) for p, v in zip(predicted.periods(), predicted.values) if p in a]
    if not pairs:
        raise UsageError("actual and predicted files share no periods")
    return np.array([x for x, _ in pairs]), np.array([y for _, y in pairs])


def cmd_evaluate(args) -> str:
    if args.model:
        model = _load_model(args.model)
        periods, pred = fc.fitted_values(model)
        actual = model.series.values[model.spec.diff.span:]
    elif args.actual and args.predicted:
        actual, pred = _aligned(_read_series(args.actual), _read_series(args.predicted))
    else:
        raise UsageError("evaluate needs --model, or both --actual and --predicted")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rep = fc.accuracy(actual, pred)
    if args.format == "json":
        return _dumps(rep.to_dict())
    if args.format == "csv":
        mape = "" if rep.mape is None else repr(rep.mape)
        return f"n,rmse,mad,mape,theil_u\n{rep.n},{rep.rmse!r},{rep.mad!r},{mape},{rep.theil_u!r}\n"
    return fc.render_accuracy(rep)


def cmd_simulate(args) -> str:
    doc = _load_json(args.config)
    if args.seed is not None:
        doc = {**doc, "seed": args.seed}
    cfg = SimulationConfig.from_dict(doc)
    ts, _ = simulate(cfg)
    return emit_csv(ts)


def _auto_candidates(c: corr.Correlogram, diff: DifferenceSpec) -> list[sarima.SarimaSpec]:
    ar, ma = sel.suggest_lags(c, c.nobs, diff.s)
    s = diff.s
    ar_ns = [k for k in ar if k % s][:2]
    ma_ns = [k for k in ma if k % s][:2]
    sar = [k for k in ar if k % s == 0][:1]
    sma = [k for k in ma if k % s == 0][:1]
    if diff.D and not sar and not sma:
        sma = [s]
    opts = lambda xs: [()] + [(x,) for x in xs]
    specs = []
    for a, m, sa, sm in itertools.product(opts(ar_ns), opts(ma_ns), opts(sar), opts(sma)):
        specs.append(sarima.SarimaSpec(ar=a, ma=m, sar=sa, sma=sm, diff=diff))
    return specs


def cmd_pipeline(args) -> str:
    ts = _read_series(args.input)
    out = {}
    advice = unitroot.decide_differencing(ts)
    diff = _diff(args) if args.diff_given else advice.spec
    out["differencing"] = {"recommendation": advice.recommendation,
                           "used": {"d": diff.d, "D": diff.D, "s": diff.s},
                           "adf": {k: v.to_dict() for k, v in advice.adf.items()},
                           "spikes": advice.spikes}
    z = difference(ts, diff).values
    ident = corr.correlogram(z, min(args.max_lag, (z.size - 1) // 2))
    if args.candidates:
        specs = _candidate_specs(args.candidates, diff)
    elif _has_lag_flags(args):
        specs = [_spec_from_flags(args, diff)]
    else:
        specs = _auto_candidates(ident, diff)
    board = sel.rank(specs, ts, max_workers=args.workers)
    out["leaderboard"] = board.to_dict()
    winner = next((r for r in board.rows if r.converged), None)
    if winner is None:
        raise ComputationError("no candidate model converged")
    model = winner.model
    if model.spec.constant:
        model = sarima.estimate_with_constant_rule(model.spec, ts)
    out["model"] = {k: v for k, v in model.to_dict().items() if k not in ("series", "residuals")}
    try:
        rep = diag.diagnose(model, args.max_lag, args.lm_lags)
        out["diagnostics"] = diag.to_dict(rep)
    except CollinearityError as exc:
        rep = None
        out["diagnostics"] = {"error": str(exc)}
    res = fc.forecast(model, args.horizon)
    out["forecast"] = [{"period": str(p), "forecast": float(v)}
                       for p, v in zip(res.periods(), res.points)]
    _, fitted = fc.fitted_values(model)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        acc = fc.accuracy(ts.values[diff.span:], fitted)
    out["accuracy_in_sample"] = acc.to_dict()
    if args.format == "json":
        return _dumps(out)

    parts = ["== Step 1: identification ==",
             f"Differencing recommendation: {advice.recommendation} "
             f"(using d={diff.d}, D={diff.D}, s={diff.s})"]
    for name, r in advice.adf.items():
        parts.append(f"  ADF {name:<9} t={r.t_stat:8.3f}  p={r.p_value:.3f}  "
                     f"spikes={advice.spikes[name]}")
    parts.append(corr.render(ident, "Correlogram of the differenced series"))
    parts += ["== Step 2: estimation ==", sel.render(board), sarima.render(model),
              "== Step 3: diagnostic checking =="]
    if rep is None:
        parts.append(out["diagnostics"]["error"])
    else:
        parts += [corr.render(rep.residual_correlogram, "Correlogram of residuals"),
                  diag.render_lm(rep.lm), f"Model adequate: {'yes' if rep.adequate else 'no'}"]
    parts += ["", "== Step 4: forecasting ==", fc.render_table(res),
              "In-sample " + fc.render_accuracy(acc)]
    return "\n".join(parts)


# -- parser ----------------------------------------------------------------

def _add_format(p, default="text"):
    p.add_argument("--format", choices=("text", "csv", "json"), default=default)


def _add_diff(p):
    p.add_argument("--d", type=int, default=0, help="regular differencing order")
    p.add_argument("--D", type=int, default=0, help="seasonal differencing order")
    p.add_argument("--s", type=int, default=12, help="seasonal period")


def _add_lags(p):
    for name in ("ar", "ma", "sar", "sma"):
        p.add_argument(f"--{name}", nargs="+", default=[], metavar="LAG",
                       help=f"{name.upper()} lags (space or comma separated)")
    p.add_argument("--constant", action="store_true", help="estimate a constant term")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report to this file instead of stdout")
    parser = _Parser(prog="bjsarima", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)
    sub.add_parser = add_parser

    p = sub.add_parser("ingest", help="validate a period,value CSV")
    p.add_argument("--input", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("pivot", help="year-by-month table with monthly means")
    p.add_argument("--input", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_pivot)

    p = sub.add_parser("acf", help="correlogram of the (differenced) series")
    p.add_argument("--input", required=True)
    p.add_argument("--max-lag", type=int, default=36)
    _add_diff(p)
    _add_format(p)
    p.set_defaults(func=cmd_acf)

    p = sub.add_parser("adf", help="augmented Dickey-Fuller unit-root test")
    p.add_argument("--input", required=True)
    p.add_argument("--max-lags", type=int, default=None)
    _add_diff(p)
    _add_format(p)
    p.set_defaults(func=cmd_adf)

    p = sub.add_parser("fit", help="estimate one model; JSON output feeds diagnose/forecast")
    p.add_argument("--input", required=True)
    _add_lags(p)
    _add_diff(p)
    _add_format(p, default="json")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("select", help="rank candidate models by BIC/AIC")
    p.add_argument("--input", required=True)
    p.add_argument("--candidates", required=True, help="JSON array of model specs")
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("diagnose", help="residual correlogram and LM test")
    p.add_argument("--model", required=True)
    p.add_argument("--max-lag", type=int, default=diag.DEFAULT_MAX_LAG)
    p.add_argument("--lm-lags", type=int, default=diag.DEFAULT_LM_LAGS)
    _add_format(p)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("forecast", help="point forecasts from a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--horizon", type=int, required=True)
    _add_format(p, default="csv")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("evaluate", help="RMSE, MAD, MAPE and Theil's U")
    p.add_argument("--actual")
    p.add_argument("--predicted")
    p.add_argument("--model", help="score in-sample fitted values of this model")
    _add_format(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", help="generate a SARIMA series from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_simulate, format="csv")

    p = sub.add_parser("pipeline", help="adf -> select -> diagnose -> forecast")
    p.add_argument("--input", required=True)
    p.add_argument("--candidates")
    p.add_argument("--horizon", type=int, default=36)
    p.add_argument("--max-lag", type=int, default=36)
    p.add_argument("--lm-lags", type=int, default=diag.DEFAULT_LM_LAGS)
    p.add_argument("--workers", type=int, default=1)
    _add_lags(p)
    _add_diff(p)
    _add_format(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "pipeline":
            args.diff_given = any(a.split("=")[0] in ("--d", "--D", "--s") for a in argv)
        report = args.func(args)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8", newline="") as fh:
                    fh.write(report)
            except OSError as exc:
                raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from None
        else:
            stdout.write(report)
        return 0
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except (ComputationError, np.linalg.LinAlgError) as exc:
        stderr.write(f"computation failed: {exc}\n")
        return 2
    except BoxJenkinsError as exc:
        stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
