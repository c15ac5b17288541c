"""Subset-lag SARIMA models: specification, polynomial expansion,
conditional-least-squares estimation and information criteria.

Model (on the differenced series ``z``)::

    ar(B) z_t = delta + ma(B) a_t
    ar(B) = (1 - sum phi_i B^i) (1 - sum Phi_j B^j)
    ma(B) = (1 + sum theta_i B^i) (1 + sum Theta_j B^j)

Each listed lag carries exactly one coefficient, so ``AR(9)`` means a
single ``phi_9`` term rather than a dense order-9 polynomial.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from .errors import (DegenerateFitError, EstimationFailed, InfeasibleSpecError,
                     LengthError, SpecificationError)
from .polynomial import LagPolynomial
from .series import Period, TimeSeries
from .transform import DifferencedSeries, DifferenceSpec, difference

ROOT_MARGIN = 1.001
PENALTY = 1e6
XTOL = 1e-8
EVALS_PER_PARAM = 2000
HESSIAN_STEP = 1e-4

_GROUPS = ("ar", "sar", "ma", "sma")
_LABELS = {"ar": "AR", "sar": "SAR", "ma": "MA", "sma": "SMA"}


def _lag_tuple(lags) -> tuple:
    out = tuple(sorted(int(k) for k in lags))
    if len(set(out)) != len(out):
        raise SpecificationError(f"duplicate lags in {list(lags)}")
    if any(k <= 0 for k in out):
        raise SpecificationError(f"lags must be positive, got {list(lags)}")
    return out


@dataclass(frozen=True)
class SarimaSpec:
    ar: tuple = ()
    ma: tuple = ()
    sar: tuple = ()
    sma: tuple = ()
    diff: DifferenceSpec = field(default_factory=DifferenceSpec)
    constant: bool = False

    def __post_init__(self):
        for g in _GROUPS:
            object.__setattr__(self, g, _lag_tuple(getattr(self, g)))
        s = self.diff.s
        for g in ("sar", "sma"):
            bad = [k for k in getattr(self, g) if k % s]
            if bad:
                raise SpecificationError(
                    f"seasonal {g.upper()} lags must be multiples of s={s}, got {bad}")

    @property
    def term_names(self) -> list[str]:
        """Coefficient names in parameter-vector order (constant last)."""
        names = [f"{_LABELS[g]}({k})" for g in _GROUPS for k in getattr(self, g)]
        if self.constant:
            names.append("C")
        return names

    @property
    def n_arma(self) -> int:
        return sum(len(getattr(self, g)) for g in _GROUPS)

    @property
    def n_params(self) -> int:
        return self.n_arma + int(self.constant)

    def label(self) -> str:
        return ", ".join(self.term_names) or "(white noise)"

    def to_dict(self) -> dict:
        return {"ar": list(self.ar), "ma": list(self.ma), "sar": list(self.sar),
                "sma": list(self.sma), "d": self.diff.d, "D": self.diff.D,
                "s": self.diff.s, "constant": self.constant}

    @classmethod
    def from_dict(cls, d: Mapping) -> "SarimaSpec":
        known = {"ar", "ma", "sar", "sma", "d", "D", "s", "constant"}
        extra = set(d) - known
        if extra:
            raise SpecificationError(f"unknown spec fields: {sorted(extra)}")
        return cls(ar=d.get("ar", ()), ma=d.get("ma", ()), sar=d.get("sar", ()),
                   sma=d.get("sma", ()),
                   diff=DifferenceSpec(int(d.get("d", 0)), int(d.get("D", 0)), int(d.get("s", 12))),
                   constant=bool(d.get("constant", False)))

    def sort_key(self) -> tuple:
        return (self.ar, self.sar, self.ma, self.sma, self.constant,
                self.diff.d, self.diff.D, self.diff.s)

    def without_constant(self) -> "SarimaSpec":
        return SarimaSpec(self.ar, self.ma, self.sar, self.sma, self.diff, False)


def _split(spec: SarimaSpec, coefficients: Mapping[str, float]) -> dict:
    missing = [n for n in spec.term_names if n != "C" and n not in coefficients]
    if missing:
        raise SpecificationError(f"no coefficient supplied for {', '.join(missing)}")
    return {g: {k: float(coefficients[f"{_LABELS[g]}({k})"]) for k in getattr(spec, g)}
            for g in _GROUPS}


def expand(spec: SarimaSpec, coefficients: Mapping[str, float]):
    """Multiply out the nonseasonal and seasonal factors.

    Returns ``(ar_poly, ma_poly)``.  AR factors use ``1 - c B^k``, MA
    factors ``1 + c B^k``.
    """
    parts = _split(spec, coefficients)
    ar = LagPolynomial.from_terms(parts["ar"], -1.0) * LagPolynomial.from_terms(parts["sar"], -1.0)
    ma = LagPolynomial.from_terms(parts["ma"], 1.0) * LagPolynomial.from_terms(parts["sma"], 1.0)
    return ar, ma


def _factors(spec: SarimaSpec, coefficients: Mapping[str, float]):
    parts = _split(spec, coefficients)
    return (LagPolynomial.from_terms(parts["ar"], -1.0), LagPolynomial.from_terms(parts["sar"], -1.0),
            LagPolynomial.from_terms(parts["ma"], 1.0), LagPolynomial.from_terms(parts["sma"], 1.0))


def _seasonal_min_modulus(poly: LagPolynomial, s: int) -> float:
    # poly is a polynomial in B^s; |B| = |w|^(1/s) for each root w
    if poly.degree == 0:
        return np.inf
    w = LagPolynomial(poly.coef[::s]).roots()
    return float(np.min(np.abs(w))) ** (1.0 / s)


def admissible(spec: SarimaSpec, coefficients: Mapping[str, float], margin: float = ROOT_MARGIN) -> bool:
    """True when every AR and MA root has modulus above ``margin``.

    The roots of the product polynomials are the union of the factor
    roots, so each factor is checked on its own.
    """
    phi, Phi, theta, Theta = _factors(spec, coefficients)
    s = spec.diff.s
    return (phi.min_root_modulus() > margin and theta.min_root_modulus() > margin
            and _seasonal_min_modulus(Phi, s) > margin and _seasonal_min_modulus(Theta, s) > margin)


def implied_mean(ar_poly: LagPolynomial, delta: float) -> float:
    if delta == 0.0:
        return 0.0
    return delta / ar_poly(1.0)


def css_residuals(z, ar_poly: LagPolynomial, ma_poly: LagPolynomial, delta: float = 0.0) -> np.ndarray:
    """Conditional residuals with zero presample deviations and shocks.

    Solves ``ma(B) a_t = ar(B) (z_t - mu)`` forward in time where
    ``mu = delta / ar(1)``; presample ``z - mu`` and presample ``a`` are 0.
    For ``delta = 0`` this is ``a_t = (ar z)_t - ((ma - 1) a)_t``.
    """
    z = np.asarray(getattr(z, "values", z), dtype=float)
    x = z - implied_mean(ar_poly, delta) if delta else z
    return lfilter(ar_poly.coef, ma_poly.coef, x)


def criteria(ssr: float, T: int, n_params: int):
    """Gaussian log-likelihood and per-observation AIC/BIC.

    ``sigma2 = ssr/T``; ``l = -(T/2)(1 + log 2pi + log sigma2)``;
    ``AIC = -2l/T + 2n/T``; ``BIC = -2l/T + n log(T)/T``.
    """
    if not ssr > 0.0:
        raise DegenerateFitError(f"sum of squared residuals must be positive, got {ssr}")
    if T <= n_params:
        raise LengthError(f"T={T} must exceed the parameter count {n_params}")
    sigma2 = ssr / T
    loglik = -0.5 * T * (1.0 + math.log(2.0 * math.pi) + math.log(sigma2))
    aic = -2.0 * loglik / T + 2.0 * n_params / T
    bic = -2.0 * loglik / T + n_params * math.log(T) / T
    return loglik, aic, bic


@dataclass(frozen=True, eq=False)
class FittedModel:
    spec: SarimaSpec
    series: TimeSeries
    coefficients: dict
    delta: float
    residuals: np.ndarray
    sigma2: float
    loglik: float
    aic: float
    bic: float
    adj_r2: float
    t_stats: dict
    std_errors: dict
    ssr: float
    converged: bool = True
    n_evals: int = 0

    @property
    def ar_poly(self) -> LagPolynomial:
        return expand(self.spec, self.coefficients)[0]

    @property
    def ma_poly(self) -> LagPolynomial:
        return expand(self.spec, self.coefficients)[1]

    @property
    def mu(self) -> float:
        return implied_mean(self.ar_poly, self.delta)

    @property
    def differenced(self) -> DifferencedSeries:
        return difference(self.series, self.spec.diff)

    @property
    def nobs(self) -> int:
        return self.residuals.size

    def params(self) -> dict:
        """Coefficients plus ``C`` when the constant is estimated."""
        out = dict(self.coefficients)
        if self.spec.constant:
            out["C"] = self.delta
        return out

    def to_dict(self) -> dict:
        def _f(v):
            return None if v is None or not math.isfinite(v) else float(v)
        return {
            "spec": self.spec.to_dict(),
            "coefficients": {k: float(v) for k, v in self.coefficients.items()},
            "delta": float(self.delta),
            "mu": _f(self.mu),
            "sigma2": float(self.sigma2),
            "ssr": float(self.ssr),
            "loglik": float(self.loglik),
            "aic": float(self.aic),
            "bic": float(self.bic),
            "adj_r2": _f(self.adj_r2),
            "t_stats": {k: _f(v) for k, v in self.t_stats.items()},
            "std_errors": {k: _f(v) for k, v in self.std_errors.items()},
            "converged": bool(self.converged),
            "n_evals": int(self.n_evals),
            "nobs": int(self.nobs),
            "series": {"start": str(self.series.start), "frequency": self.series.frequency,
                       "values": [float(v) for v in self.series.values]},
            "residuals": [float(v) for v in self.residuals],
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: Mapping) -> "FittedModel":
        spec = SarimaSpec.from_dict(d["spec"])
        ser = d["series"]
        ts = TimeSeries(Period.parse(ser["start"]), ser["values"], int(ser.get("frequency", 12)))
        nan = float("nan")

        def _g(v):
            return nan if v is None else float(v)
        resid = np.array(d["residuals"], dtype=float)
        resid.flags.writeable = False
        coefficients = {k: float(v) for k, v in d["coefficients"].items()}
        _split(spec, coefficients)
        return cls(spec=spec, series=ts, coefficients=coefficients,
                   delta=float(d.get("delta", 0.0)), residuals=resid,
                   sigma2=float(d["sigma2"]), loglik=float(d["loglik"]), aic=float(d["aic"]),
                   bic=float(d["bic"]), adj_r2=_g(d.get("adj_r2")),
                   t_stats={k: _g(v) for k, v in d.get("t_stats", {}).items()},
                   std_errors={k: _g(v) for k, v in d.get("std_errors", {}).items()},
                   ssr=float(d["ssr"]), converged=bool(d.get("converged", True)),
                   n_evals=int(d.get("n_evals", 0)))

    @classmethod
    def from_json(cls, text: str) -> "FittedModel":
        return cls.from_dict(json.loads(text))


def _unpack(spec: SarimaSpec, x: np.ndarray):
    names = spec.term_names
    coefs = {n: float(v) for n, v in zip(names, x) if n != "C"}
    delta = float(x[-1]) if spec.constant else 0.0
    return coefs, delta


def _ssr(spec, z, x) -> float:
    coefs, delta = _unpack(spec, x)
    ar, ma = expand(spec, coefs)
    if delta and ar(1.0) == 0.0:
        return np.inf
    a = css_residuals(z, ar, ma, delta)
    v = float(a @ a)
    return v if math.isfinite(v) else np.inf


def _hessian(f, x: np.ndarray) -> np.ndarray:
    n = x.size
    h = HESSIAN_STEP * np.maximum(np.abs(x), 1.0)
    H = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej)
                                 + f(x - ei - ej)) / (4.0 * h[i] * h[j])
    return H


def build_model(spec: SarimaSpec, ts: TimeSeries, coefficients: Mapping[str, float],
                delta: float = 0.0, *, converged: bool = True, n_evals: int = 0,
                with_errors: bool = True) -> FittedModel:
    """Assemble a :class:`FittedModel` at given parameter values.

    Residuals, criteria and (optionally) Hessian-based t-statistics are
    evaluated at the supplied point; nothing is optimized.
    """
    if not spec.constant and delta != 0.0:
        raise SpecificationError("delta given for a spec without constant")
    z = difference(ts, spec.diff).values
    coefs = {n: float(coefficients[n]) for n in spec.term_names if n != "C"}
    ar, ma = expand(spec, coefs)
    resid = css_residuals(z, ar, ma, delta)
    resid.flags.writeable = False
    ssr = float(resid @ resid)
    T = z.size
    n = spec.n_params
    loglik, aic, bic = criteria(ssr, T, n)
    sigma2 = ssr / T
    dev = z - z.mean()
    sst = float(dev @ dev)
    r2 = 1.0 - ssr / sst if sst > 0 else float("nan")
    adj = 1.0 - (1.0 - r2) * (T - 1) / (T - n - 1) if T - n - 1 > 0 else float("nan")

    t_stats, std_errors = {}, {}
    names = spec.term_names
    if with_errors and names:
        x = np.array([coefs[nm] if nm != "C" else delta for nm in names])
        H = _hessian(lambda p: _ssr(spec, z, p), x)
        try:
            cov = 2.0 * sigma2 * np.linalg.inv(H)
            var = np.diag(cov)
        except np.linalg.LinAlgError:
            var = np.full(len(names), np.nan)
        for nm, xi, vi in zip(names, x, var):
            se = math.sqrt(vi) if math.isfinite(vi) and vi > 0 else float("nan")
            std_errors[nm] = se
            t_stats[nm] = float(xi / se) if se == se else float("nan")
    return FittedModel(spec=spec, series=ts, coefficients=coefs, delta=float(delta),
                       residuals=resid, sigma2=sigma2, loglik=loglik, aic=aic, bic=bic,
                       adj_r2=adj, t_stats=t_stats, std_errors=std_errors, ssr=ssr,
                       converged=converged, n_evals=n_evals)


def _initial_simplex(x0: np.ndarray, spec: SarimaSpec, z: np.ndarray) -> np.ndarray:
    n = x0.size
    steps = np.full(n, 0.1)
    if spec.constant:
        sd = float(np.std(z))
        steps[-1] = 0.1 * sd if sd > 0 else 0.1
    sim = np.tile(x0, (n + 1, 1))
    for i in range(n):
        sim[i + 1, i] += steps[i]
    return sim


def estimate(spec: SarimaSpec, ts: TimeSeries, *, raise_on_failure: bool = True) -> FittedModel:
    """Conditional-least-squares fit by Nelder-Mead.

    Starts from zero coefficients (``delta`` from the mean of the
    differenced series).  Iterates whose AR or MA roots fall within
    modulus 1.001 are charged ``SSR * 1e6``.  Stops when the simplex
    diameter drops below 1e-8 or after ``2000 * n_params`` evaluations.

    Raises :class:`EstimationFailed` (carrying the best-so-far model) on an
    exhausted budget unless ``raise_on_failure`` is False, in which case the
    returned model has ``converged=False``.
    """
    z = difference(ts, spec.diff).values
    n = spec.n_params
    if z.size < 5 * max(n, 1):
        raise LengthError(
            f"differenced series has {z.size} observations; need at least {5 * max(n, 1)} "
            f"for {n} parameters")
    if n == 0:
        return build_model(spec, ts, {}, 0.0)

    def objective(x):
        coefs, _ = _unpack(spec, x)
        v = _ssr(spec, z, x)
        if not admissible(spec, coefs):
            return v * PENALTY if math.isfinite(v) else 1e300
        return v if math.isfinite(v) else 1e300

    x0 = np.zeros(n)
    if spec.constant:
        x0[-1] = float(np.mean(z))
    budget = EVALS_PER_PARAM * n
    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"initial_simplex": _initial_simplex(x0, spec, z), "xatol": XTOL,
                            "fatol": np.inf, "maxfev": budget, "maxiter": budget})
    coefs, delta = _unpack(spec, res.x)
    if not admissible(spec, coefs):
        raise InfeasibleSpecError(
            f"no admissible parameter point found for {spec.label()}")
    converged = bool(res.success)
    model = build_model(spec, ts, coefs, delta, converged=converged, n_evals=int(res.nfev))
    if not converged and raise_on_failure:
        raise EstimationFailed(
            f"Nelder-Mead did not converge for {spec.label()} within {budget} evaluations",
            best=model)
    return model


def estimate_with_constant_rule(spec: SarimaSpec, ts: TimeSeries, threshold: float = 2.0,
                                **kw) -> FittedModel:
    """Fit with a constant, then refit without it if ``|t_C| < threshold``."""
    if not spec.constant:
        return estimate(spec, ts, **kw)
    model = estimate(spec, ts, **kw)
    t = model.t_stats.get("C", float("nan"))
    if not (abs(t) >= threshold):
        return estimate(spec.without_constant(), ts, **kw)
    return model


def render(model: FittedModel) -> str:
    lines = [f"Model: {model.spec.label()}   d={model.spec.diff.d} D={model.spec.diff.D} "
             f"s={model.spec.diff.s}",
             f"Included observations: {model.nobs}",
             f"{'Variable':<10} {'Coefficient':>12} {'Std. Error':>11} {'t-Statistic':>12}"]
    for name, value in model.params().items():
        se = model.std_errors.get(name, float("nan"))
        t = model.t_stats.get(name, float("nan"))
        lines.append(f"{name:<10} {value:>12.3f} {se:>11.3f} {t:>12.3f}")
    lines += [
        f"sigma^2            {model.sigma2:.3f}",
        f"Log likelihood     {model.loglik:.3f}",
        f"Akaike criterion   {model.aic:.3f}",
        f"Schwarz criterion  {model.bic:.3f}",
        f"Adjusted R-squared {model.adj_r2:.3f}",
        f"Converged          {'yes' if model.converged else 'no'}",
    ]
    ar, ma = model.ar_poly, model.ma_poly
    lines.append(f"AR polynomial: {_poly_text(ar)}")
    lines.append(f"MA polynomial: {_poly_text(ma)}")
    return "\n".join(lines) + "\n"


def _poly_text(p: LagPolynomial) -> str:
    out = "1"
    for k, v in p.terms().items():
        if k == 0:
            continue
        out += f" {'-' if v < 0 else '+'} {abs(v):.3f}B^{k}"
    return out
