from fractions import Fraction as F

import pytest

from cattaneo.catalog import preset
from cattaneo.powersum import PowerSum
from cattaneo.spectrum import symbolic_quartic


def test_exact_cancellation():
    x = PowerSum.monomial(1, F(1, 2)) + 1
    y = x * x - PowerSum.monomial(1, 1) - PowerSum.monomial(2, F(1, 2))
    assert y == PowerSum.constant(1)


def test_leading_term_and_evaluation():
    s = PowerSum.monomial(3, 2) - PowerSum.monomial(5, F(1, 3)) + 7
    assert s.leading() == (F(2), F(3))
    assert s(8.0) == pytest.approx(3 * 64 - 5 * 2 + 7, rel=1e-15)
    assert PowerSum().leading() == (0, 0)
    assert PowerSum()(2.0) == 0.0


def test_symbolic_coefficients_match_formula():
    p = preset("example2").point
    c = symbolic_quartic(p).coeffs(16.0)
    assert c.descending() == pytest.approx((5, 5, 53, 48, 32), rel=1e-15)
