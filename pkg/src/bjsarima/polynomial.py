"""Finite lag polynomials in the backshift operator B."""

from __future__ import annotations

from typing import Mapping

import numpy as np


class LagPolynomial:
    """``sum_k c_k B^k`` with ``c_0 = 1``.

    Stored densely; ``coef[k]`` is the coefficient of ``B**k``.
    """

    __slots__ = ("coef",)

    def __init__(self, coef):
        c = np.array(coef, dtype=float).ravel()
        if c.size == 0:
            c = np.ones(1)
        # trim trailing zeros so degree is meaningful
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        c.flags.writeable = False
        self.coef = c

    @classmethod
    def from_terms(cls, terms: Mapping[int, float], sign: float = -1.0) -> "LagPolynomial":
        """``1 + sign * sum(terms[k] B^k)``.

        ``sign=-1`` gives the autoregressive form ``1 - phi B^k``,
        ``sign=+1`` the moving-average form ``1 + theta B^k``.
        """
        degree = max(terms, default=0)
        c = np.zeros(degree + 1)
        c[0] = 1.0
        for k, v in terms.items():
            if k <= 0:
                raise ValueError(f"lag must be positive, got {k}")
            c[k] += sign * v
        return cls(c)

    @classmethod
    def one(cls) -> "LagPolynomial":
        return cls([1.0])

    @property
    def degree(self) -> int:
        return self.coef.size - 1

    def __mul__(self, other: "LagPolynomial") -> "LagPolynomial":
        return LagPolynomial(np.convolve(self.coef, other.coef))

    def __pow__(self, n: int) -> "LagPolynomial":
        out = LagPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def __getitem__(self, k: int) -> float:
        return float(self.coef[k]) if 0 <= k < self.coef.size else 0.0

    def __eq__(self, other) -> bool:
        return isinstance(other, LagPolynomial) and np.array_equal(self.coef, other.coef)

    def __call__(self, b: float) -> float:
        return float(np.polynomial.polynomial.polyval(b, self.coef))

    def terms(self) -> dict:
        return {k: float(v) for k, v in enumerate(self.coef) if v != 0.0}

    def roots(self) -> np.ndarray:
        """Roots in B (companion-matrix eigenvalues)."""
        if self.degree == 0:
            return np.empty(0, dtype=complex)
        return np.roots(self.coef[::-1])

    def min_root_modulus(self) -> float:
        r = self.roots()
        return float(np.min(np.abs(r))) if r.size else np.inf

    def apply(self, x) -> np.ndarray:
        """``(P(B) x)_t`` with zero presample values."""
        x = np.asarray(x, dtype=float)
        return np.convolve(self.coef, x)[: x.size]

    def __repr__(self) -> str:
        parts = []
        for k, v in enumerate(self.coef):
            if v == 0.0:
                continue
            if k == 0:
                parts.append(f"{v:g}")
            else:
                parts.append(f"{'-' if v < 0 else '+'} {abs(v):.3f}B^{k}")
        return "LagPolynomial(" + " ".join(parts) + ")"


def differencing_polynomial(d: int, D: int, s: int) -> LagPolynomial:
    """``(1 - B^s)^D (1 - B)^d``."""
    return LagPolynomial.from_terms({s: 1.0}) ** D * LagPolynomial.from_terms({1: 1.0}) ** d
