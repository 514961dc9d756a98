"""
BL Frame - B-spline Tests

Tests for the B-spline kernels and the PiecewisePoly type.
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from blframe.bspline import (
    PiecewisePoly,
    autocorr_symbol,
    autocorrelation_coefficients,
    bspline_derivative,
    bspline_eval,
    bspline_fourier,
    bspline_piecewise,
    gauss_panels,
    spline_inner,
    spline_series,
)


class TestBsplineEval:
    """Tests for point evaluation of B_m."""

    @pytest.mark.parametrize('m, x, expected', [
        (0, 0.5, 1.0),
        (1, 1.0, 1.0),
        (3, 2.0, 2.0 / 3.0),
    ])
    def test_known_values(self, m, x, expected):
        """Test the tabulated values of B_0, B_1 and B_3."""
        assert bspline_eval(m, x) == pytest.approx(expected, abs=1e-15)

    def test_support_and_positivity(self):
        """Test that B_m is non-negative and vanishes outside [0, m + 1]."""
        for m in range(6):
            x = np.linspace(-2.0, m + 3.0, 501)
            values = bspline_eval(m, x)
            assert np.all(values >= 0.0)
            assert np.all(values[(x < 0) | (x >= m + 1)] == 0.0)

    def test_unit_integral(self):
        """Test that every B_m integrates to one."""
        for m in range(7):
            assert bspline_piecewise(m).integral() == pytest.approx(1.0, abs=1e-14)

    def test_negative_order_rejected(self):
        """Test that negative orders raise ValueError."""
        with pytest.raises(ValueError):
            bspline_eval(-1, 0.5)


class TestBsplinePiecewise:
    """Tests for the exact piecewise form."""

    def test_order_zero_single_piece(self):
        """Test that B_0 is the constant 1 on [0, 1)."""
        pp = bspline_piecewise(0)
        assert pp.pieces == 1
        np.testing.assert_array_equal(pp.coeffs, [[1.0]])

    def test_order_one_pieces(self):
        """Test the hat function pieces x on [0, 1) and 2 - x on [1, 2).

        Coefficients are written around each piece's left knot.
        """
        np.testing.assert_allclose(bspline_piecewise(1).coeffs, [[0.0, 1.0], [1.0, -1.0]],
                                   atol=1e-15)

    def test_derivative_identity(self):
        """Test B_3' = B_2 - B_2(. - 1) at 100 off-knot points."""
        x = np.linspace(0.05, 3.95, 100)
        derived = bspline_piecewise(3).derivative()(x)
        expected = bspline_eval(2, x) - bspline_eval(2, x - 1.0)
        np.testing.assert_allclose(derived, expected, atol=1e-13)

    def test_bspline_derivative_matches_piecewise(self):
        """Test the binomial form of B_5'' against differentiated pieces."""
        x = np.linspace(0.03, 5.97, 77)
        np.testing.assert_allclose(bspline_derivative(5, 2)(x),
                                   bspline_piecewise(5).derivative(2)(x), atol=1e-12)

    def test_bspline_derivative_order_too_high(self):
        """Test that derivatives beyond the order are rejected."""
        with pytest.raises(ValueError):
            bspline_derivative(2, 3)


class TestBsplineFourier:
    """Tests for the closed-form Fourier transform."""

    def test_value_at_zero(self):
        """Test the removable point: the transform at 0 is the integral 1."""
        for m in range(5):
            assert bspline_fourier(m, 0.0) == pytest.approx(1.0)

    def test_matches_quadrature(self):
        """Test B_2's transform at xi = 1.3 against direct quadrature."""
        x, w = gauss_panels(np.arange(4.0), 12)
        direct = np.sum(w * bspline_eval(2, x) * np.exp(-1j * 1.3 * x))
        assert abs(bspline_fourier(2, 1.3) - direct) < 1e-13


class TestAutocorrelation:
    """Tests for the autocorrelation coefficients and symbol."""

    def test_linear_coefficients(self):
        """Test a_0 = 2/3 and a_1 = 1/6 for the hat function."""
        np.testing.assert_allclose(autocorrelation_coefficients(1), [2 / 3, 1 / 6], atol=1e-15)

    def test_cubic_diagonal(self):
        """Test int B_3^2 = B_7(4) = 151/315."""
        assert autocorrelation_coefficients(3)[0] == pytest.approx(151 / 315, abs=1e-15)

    def test_symbol_partition_of_unity(self):
        """Test E_n(0) = 1, which follows from sum_k B_n(x - k) = 1."""
        for n in range(6):
            assert autocorr_symbol(n, 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_symbol_matches_lattice_sum(self):
        """Test E_1 at 0.7 against the truncated lattice sum of |B_1^|^2."""
        k = np.arange(-4000, 4001)
        lattice = np.sum(np.abs(bspline_fourier(1, 0.7 + 2 * np.pi * k)) ** 2)
        assert autocorr_symbol(1, 0.7) == pytest.approx(lattice, abs=1e-10)

    def test_haar_symbol_constant(self):
        """Test that E_0 is identically one."""
        np.testing.assert_allclose(autocorr_symbol(0, np.linspace(0, 6, 13)), 1.0)


class TestPiecewisePoly:
    """Tests for the PiecewisePoly type."""

    def test_one_sided_evaluation(self):
        """Test right- and left-continuous evaluation at a knot."""
        pp = bspline_piecewise(0)
        assert pp(1.0) == 0.0
        assert pp.evaluate(1.0, side='left') == 1.0
        assert pp.evaluate(0.0, side='left') == 0.0

    def test_zero_outside_window(self):
        """Test that evaluation vanishes outside the window."""
        pp = bspline_piecewise(3)
        np.testing.assert_array_equal(pp(np.array([-5.0, -0.1, 4.0, 9.0])), 0.0)

    def test_unknown_side(self):
        """Test that an unknown side raises ValueError."""
        with pytest.raises(ValueError):
            bspline_piecewise(1).evaluate(0.5, side='middle')

    def test_dilate_shift(self):
        """Test that dilate_shift(2, 1) evaluates B_1(2x - 1)."""
        x = np.linspace(-1.0, 3.0, 41)
        np.testing.assert_allclose(bspline_piecewise(1).dilate_shift(2.0, 1.0)(x),
                                   bspline_eval(1, 2 * x - 1), atol=1e-15)

    def test_sum_of_aligned_functions(self):
        """Test addition of shifted copies on a common grid."""
        base = bspline_piecewise(2)
        total = base + base.shifted(1.0)
        x = np.linspace(-1.0, 5.0, 61)
        np.testing.assert_allclose(total(x), bspline_eval(2, x) + bspline_eval(2, x - 1),
                                   atol=1e-15)

    def test_misaligned_addition_rejected(self):
        """Test that grids offset by a non-integer knot count cannot be added."""
        base = bspline_piecewise(1)
        with pytest.raises(ValueError):
            base + base.shifted(0.25)

    def test_sup_norm(self):
        """Test the exact maximum of B_3."""
        assert bspline_piecewise(3).sup_norm() == pytest.approx(2 / 3, abs=1e-14)

    def test_moments_of_hat(self):
        """Test that B_1 has mass 1 and mean 1."""
        np.testing.assert_allclose(bspline_piecewise(1).moments(1), [1.0, 1.0], atol=1e-14)

    def test_taylor_outside_window(self):
        """Test that re-expansion outside the window gives the zero vector."""
        np.testing.assert_array_equal(bspline_piecewise(2).taylor(10.0), np.zeros(3))

    def test_rejects_non_positive_spacing(self):
        """Test that the knot spacing must be positive."""
        with pytest.raises(ValueError):
            PiecewisePoly(0.0, 0.0, [[1.0]])


class TestSplineProducts:
    """Tests for spline_inner and spline_series."""

    def test_inner_products(self):
        """Test int B_1^2 = 2/3 and the disjointness of B_0 shifts."""
        b0, b1 = bspline_piecewise(0), bspline_piecewise(1)
        assert spline_inner(b1, b1) == pytest.approx(2 / 3, abs=1e-15)
        assert spline_inner(b0, b0.shifted(1.0)) == 0.0

    def test_inner_mixed_grids(self):
        """Test <B_0, B_1(2x)> = 1/2 across different knot spacings."""
        half = bspline_piecewise(1).dilate_shift(2.0, 0.0)
        assert spline_inner(bspline_piecewise(0), half) == pytest.approx(0.5, abs=1e-15)

    def test_series_partition_of_unity(self):
        """Test that sum_k B_3(x - k) equals one away from the ends."""
        pp = spline_series(np.ones(20), 3, first_index=-10)
        x = np.linspace(-6.0, 6.0, 97)
        np.testing.assert_allclose(pp(x), 1.0, atol=1e-14)

    def test_series_dilation(self):
        """Test the knot spacing and origin of a dilated series."""
        pp = spline_series([1.0, -1.0], 0, first_index=3, dilation=2.0)
        assert pp.knot_spacing == 0.5
        assert pp.origin == 1.5
        assert pp(1.75) == 1.0
        assert pp(2.25) == -1.0
