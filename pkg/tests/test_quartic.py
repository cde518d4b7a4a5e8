import cmath

import numpy as np
import pytest

from cattaneo.quartic import (DegenerateLeadingCoefficient, QuarticCoeffs, backward_residual,
                              companion_roots, match_roots, solve_cubic, solve_quartic)


def close_sets(a, b, rtol):
    for x, y in match_roots(a, b):
        assert abs(x - y) <= rtol * max(abs(y), 1.0), (x, y)


def test_fourth_roots_of_unity():
    close_sets(solve_quartic((1, 0, 0, 0, -1)), [1, -1, 1j, -1j], 1e-14)


def test_quadruple_root():
    roots = solve_quartic((1, 4, 6, 4, 1))
    # a fourfold root is only determined to eps**(1/4)
    assert all(abs(z + 1) < 1e-3 for z in roots)
    assert all(backward_residual(QuarticCoeffs(1, 4, 6, 4, 1), z) < 1e-14 for z in roots)


def test_unit_mu_coefficients_match_companion():
    close_sets(solve_quartic((1, 1, 4, 3, 2)), companion_roots((1, 1, 4, 3, 2)), 1e-8)


def test_real_input_gives_conjugate_closed_roots():
    roots = solve_quartic((2, 2, 5, 3, 2))
    for z in roots:
        assert min(abs(z.conjugate() - w) for w in roots) < 1e-12


def test_widely_spread_magnitudes():
    # roots 1e-8, 1, 1e4, 1e8
    r = [1e-8, 1.0, 1e4, 1e8]
    c = np.poly(r)
    roots = solve_quartic(c)
    for x, y in match_roots(roots, r):
        assert abs(x - y) <= 1e-10 * abs(y)


def test_complex_coefficients():
    r = [1 + 2j, -3j, 0.5, -2 + 1j]
    close_sets(solve_quartic(np.poly(r)), r, 1e-12)


def test_degenerate_leading_coefficient():
    with pytest.raises(DegenerateLeadingCoefficient):
        solve_quartic((0, 1, 2, 3, 4))


def test_cubic_constants():
    j = sorted(solve_cubic(29, 115, -81), key=lambda z: z.real)
    assert [round(z.real, 4) for z in j] == [-24.0858, -5.5231, 0.6089]
    assert all(abs(z.imag) < 1e-12 for z in j)


def test_random_sets_against_companion():
    rng = np.random.default_rng(11)
    for _ in range(200):
        c = rng.normal(size=5) + 1j * rng.normal(size=5)
        roots = solve_quartic(c)
        close_sets(roots, companion_roots(c), 1e-8)
        assert abs(sum(roots) + c[1] / c[0]) <= 1e-9 * max(1, abs(c[1] / c[0]))
        prod = roots[0] * roots[1] * roots[2] * roots[3]
        assert abs(prod - c[4] / c[0]) <= 1e-9 * max(1, abs(c[4] / c[0]))


def test_quadratic_factor_product():
    # (x^2 + 1)(x^2 + 1e-6 x + 1e12): tiny damping on a huge frequency
    c = np.polymul([1, 0, 1], [1, 1e-6, 1e12])
    roots = solve_quartic(c)
    big = [z for z in roots if abs(z) > 1e3]
    exact = cmath.sqrt(1e-12 / 4 - 1e12) - 0.5e-6
    for z in big:
        assert abs(z.real + 0.5e-6) < 1e-12
        assert abs(abs(z.imag) - abs(exact.imag)) < 1e-6
