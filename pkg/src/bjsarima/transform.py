"""Regular and seasonal differencing and its exact inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter, lfiltic

from .errors import IntegrationError, LengthError, SpecificationError
from .polynomial import differencing_polynomial

MAX_D = 2
MAX_SEASONAL_D = 2


@dataclass(frozen=True)
class DifferenceSpec:
    d: int = 0
    D: int = 0
    s: int = 12

    def __post_init__(self):
        if not (0 <= self.d <= MAX_D):
            raise SpecificationError(f"d must be in 0..{MAX_D}, got {self.d}")
        if not (0 <= self.D <= MAX_SEASONAL_D):
            raise SpecificationError(f"D must be in 0..{MAX_SEASONAL_D}, got {self.D}")
        if self.s < 1:
            raise SpecificationError(f"seasonal period must be >= 1, got {self.s}")

    @property
    def span(self) -> int:
        """Observations consumed: ``d + D*s``."""
        return self.d + self.D * self.s

    def polynomial(self):
        return differencing_polynomial(self.d, self.D, self.s)


@dataclass(frozen=True, eq=False)
class DifferencedSeries:
    """Differenced values ``z`` plus the leading original observations
    (``warmup``) needed to invert the transform."""

    values: np.ndarray
    spec: DifferenceSpec
    warmup: np.ndarray

    def __len__(self) -> int:
        return self.values.size


def _as_array(x) -> np.ndarray:
    return np.asarray(getattr(x, "values", x), dtype=float)


def difference(ts, spec: DifferenceSpec) -> DifferencedSeries:
    """Apply ``(1 - B^s)^D (1 - B)^d``.

    ``ts`` may be a :class:`~bjsarima.series.TimeSeries` or any 1-d array.
    """
    y = _as_array(ts)
    if y.size <= spec.span:
        raise LengthError(
            f"series of length {y.size} too short for d={spec.d}, D={spec.D}, s={spec.s}; "
            f"need at least {spec.span + 1} observations")
    z = y.copy()
    for _ in range(spec.D):
        z = z[spec.s:] - z[:-spec.s]
    for _ in range(spec.d):
        z = np.diff(z)
    z.flags.writeable = False
    warm = y[: spec.span].copy()
    warm.flags.writeable = False
    return DifferencedSeries(values=z, spec=spec, warmup=warm)


def _integrate_onto(history: np.ndarray, z_new: np.ndarray, spec: DifferenceSpec) -> np.ndarray:
    # y_t = z_t - sum_{k>=1} c_k y_{t-k}, seeded with the last w history values
    c = spec.polynomial().coef
    w = c.size - 1
    if w == 0:
        return z_new.copy()
    if history.size < w:
        raise IntegrationError(f"need {w} history values to integrate, have {history.size}")
    zi = lfiltic([1.0], c, history[::-1][:w])
    y, _ = lfilter([1.0], c, z_new, zi=zi)
    return y


def restore(z: DifferencedSeries) -> np.ndarray:
    """Full original-scale series: warmup followed by the integrated values."""
    warm = np.asarray(z.warmup, dtype=float)
    if warm.size != z.spec.span:
        raise IntegrationError(
            f"warmup has {warm.size} values, need {z.spec.span}")
    return np.concatenate([warm, _integrate_onto(warm, np.asarray(z.values, float), z.spec)])


def integrate(z: DifferencedSeries, extension) -> np.ndarray:
    """Original-scale continuation for values that extend ``z`` past its end.

    For ``d=0, D=1`` this is ``y[t+h] = z[t+h] + y[t+h-s]``, with ``y``
    drawn from the reconstructed history and earlier continuation values.
    """
    history = restore(z)
    ext = np.asarray(extension, dtype=float).ravel()
    return _integrate_onto(history, ext, z.spec)
