"""Seeded SARIMA process generator.

Random numbers are produced by a pinned algorithm so fixtures reproduce
exactly: the ``i``-th 64-bit word is SplitMix64's output mix applied to
``seed + (i + 1) * 0x9E3779B97F4A7C15`` (mod 2**64), uniforms are
``((word >> 11) + 0.5) / 2**53``, and consecutive uniform pairs
``(u1, u2)`` become normals via Box-Muller::

    n1 = sqrt(-2 ln u1) cos(2 pi u2),  n2 = sqrt(-2 ln u1) sin(2 pi u2)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidConfigError, SpecificationError
from .sarima import SarimaSpec, admissible, expand, implied_mean
from .series import Period, TimeSeries
from .transform import DifferencedSeries, restore

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, n: int) -> np.ndarray:
    """``n`` counter-based 64-bit words for ``seed``."""
    base = np.uint64(int(seed) % (1 << 64))
    counter = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = base + counter * _GOLDEN
        x = (x ^ (x >> np.uint64(30))) * _M1
        x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


def uniforms(seed: int, n: int) -> np.ndarray:
    words = splitmix64(seed, n)
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def standard_normals(seed: int, n: int) -> np.ndarray:
    m = (n + 1) // 2
    u = uniforms(seed, 2 * m)
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * m)
    out[0::2] = r * np.cos(2.0 * np.pi * u2)
    out[1::2] = r * np.sin(2.0 * np.pi * u2)
    return out[:n]


@dataclass(frozen=True)
class SimulationConfig:
    spec: SarimaSpec
    coefficients: Mapping[str, float] = field(default_factory=dict)
    delta: float = 0.0
    sigma: float = 1.0
    length: int = 200
    burn_in: Optional[int] = None
    seed: int = 0
    start: Period = Period(2000, 1)

    def polynomials(self):
        return expand(self.spec, self.coefficients)

    def effective_burn_in(self) -> int:
        if self.burn_in is not None:
            return int(self.burn_in)
        ar, ma = self.polynomials()
        return 10 * max(ar.degree, ma.degree)

    def validate(self) -> None:
        try:
            ar, ma = self.polynomials()
        except SpecificationError as exc:
            raise InvalidConfigError(str(exc)) from None
        if not self.sigma > 0:
            raise InvalidConfigError(f"sigma must be positive, got {self.sigma}")
        if self.length <= self.spec.diff.span:
            raise InvalidConfigError(
                f"length {self.length} must exceed the differencing span {self.spec.diff.span}")
        need = 10 * max(ar.degree, ma.degree)
        if self.effective_burn_in() < need:
            raise InvalidConfigError(f"burn_in must be at least {need}")
        if not admissible(self.spec, self.coefficients, margin=1.0):
            raise InvalidConfigError("coefficients violate the root condition (modulus > 1)")

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimulationConfig":
        try:
            spec = SarimaSpec.from_dict(d["spec"])
            start = d.get("start", "2000-01")
            return cls(spec=spec, coefficients={k: float(v) for k, v in d.get("coefficients", {}).items()},
                       delta=float(d.get("delta", 0.0)), sigma=float(d.get("sigma", 1.0)),
                       length=int(d.get("length", 200)),
                       burn_in=None if d.get("burn_in") is None else int(d["burn_in"]),
                       seed=int(d.get("seed", 0)),
                       start=start if isinstance(start, Period) else Period.parse(start))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecificationError):
                raise
            raise InvalidConfigError(f"bad simulation config: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "SimulationConfig":
        return cls.from_dict(json.loads(text))


def simulate(cfg: SimulationConfig):
    """Generate ``(TimeSeries, shocks)``.

    The ARMA recursion runs on the differenced scale for
    ``burn_in + length - span`` steps from zero presample values, the
    burn-in prefix is dropped, and the result is integrated onto ``span``
    zero warmup values.  ``shocks`` is aligned with the differenced series
    (``length - span`` values).
    """
    cfg.validate()
    ar, ma = cfg.polynomials()
    span = cfg.spec.diff.span
    burn = cfg.effective_burn_in()
    m = cfg.length - span
    e = cfg.sigma * standard_normals(cfg.seed, burn + m)
    x = lfilter(ma.coef, ar.coef, e)
    z = x[burn:] + implied_mean(ar, cfg.delta)
    shocks = e[burn:]
    y = restore(DifferencedSeries(values=z, spec=cfg.spec.diff, warmup=np.zeros(span)))
    return TimeSeries(cfg.start, y, cfg.spec.diff.s if cfg.spec.diff.s > 1 else 12), shocks
