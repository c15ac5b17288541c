import numpy as np
import pytest
from hypothesis import given, strategies as st

from bjsarima.polynomial import LagPolynomial, differencing_polynomial


def test_from_terms_sign():
    p = LagPolynomial.from_terms({1: 0.5, 3: 0.2}, -1)
    np.testing.assert_array_equal(p.coef, [1, -0.5, 0, -0.2])


def test_trailing_zeros_trimmed():
    assert LagPolynomial([1, 2, 0, 0]).degree == 1


def test_differencing_polynomial():
    np.testing.assert_array_equal(differencing_polynomial(1, 1, 4).coef, [1, -1, 0, 0, -1, 1])
    np.testing.assert_array_equal(differencing_polynomial(2, 0, 12).coef, [1, -2, 1])


def test_root_modulus():
    assert LagPolynomial([1, -0.5]).min_root_modulus() == pytest.approx(2.0)
    assert LagPolynomial.one().min_root_modulus() == np.inf


coef = st.lists(st.floats(-2, 2), min_size=1, max_size=6)


@given(coef, coef, st.floats(-1.5, 1.5))
def test_product_evaluates_to_product(a, b, x):
    p, q = LagPolynomial([1] + a), LagPolynomial([1] + b)
    assert (p * q)(x) == pytest.approx(p(x) * q(x), abs=1e-9)
