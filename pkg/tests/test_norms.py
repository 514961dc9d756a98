"""
BL Frame - Norm Tests

Tests for range classification, sequence norms, frame norms and the
classical Sobolev reference norm.
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from blframe.analysis import CoefficientTable
from blframe.errors import OutOfRangeError, UnsupportedFamilyError
from blframe.functions import DilatedBSpline, Gaussian, Indicator, PolyBump
from blframe.norms import (
    NormParams,
    RangeClass,
    Space,
    conjugate_inverse,
    frame_norm,
    norm_report,
    parse_exponent,
    require_frame_range,
    seq_norm,
    seq_norm_besov,
    seq_norm_triebel,
    sobolev_reference_norm,
    tail_remainder,
    validate_range,
)


def _random_table(rng, scales=range(0, 4), width=6):
    return CoefficientTable({j: (int(rng.integers(-3, 3)), rng.normal(size=width))
                             for j in scales})


class TestExponents:
    """Tests for exponent parsing and conjugates."""

    def test_parse_infinity(self):
        """Test that 'inf' and 'infinity' parse to math.inf."""
        assert parse_exponent('inf') == math.inf
        assert parse_exponent('Infinity') == math.inf
        assert parse_exponent('2.5') == 2.5

    def test_parse_rejects_non_positive(self):
        """Test that zero and negative exponents raise ValueError."""
        with pytest.raises(ValueError):
            parse_exponent(0)
        with pytest.raises(ValueError):
            parse_exponent('-1')

    @pytest.mark.parametrize('p, expected', [(1, 0.0), (2, 0.5), (math.inf, 1.0), (0.5, -1.0)])
    def test_conjugate_inverse(self, p, expected):
        """Test 1/p' = 1 - 1/p including p = inf and p < 1."""
        assert conjugate_inverse(p) == pytest.approx(expected)

    def test_params_normalise_inputs(self):
        """Test that NormParams coerces exponents and the space name."""
        params = NormParams(0.5, '2', 'inf', 'triebel', 1)
        assert params.p == 2.0
        assert params.q_infinite
        assert params.space is Space.TRIEBEL
        assert params.to_dict() == {'s': 0.5, 'p': 2.0, 'q': 'inf', 'space': 'triebel', 'n': 1}

    def test_sobolev_effective_parameters(self):
        """Test that the Sobolev variant reads as b^{n+1}_{p,inf}."""
        effective = NormParams(0.0, 2, 2, Space.SOBOLEV, 2).effective()
        assert (effective.s, effective.q, effective.space) == (3, math.inf, Space.BESOV)


class TestValidateRange:
    """Tests for the classification of (s, p, q)."""

    def test_besov_frame_interval(self):
        """Test the Besov frame interval (1/p - 1 - n, n + 1) for n = 1, p = 2."""
        report = validate_range(NormParams(0.0, 2, 2, Space.BESOV, 1))
        assert report.frame_interval == (-1.5, 2.0)
        assert report.classification is RangeClass.BOTH

    def test_frame_only_above_basis_range(self):
        """Test that n + 1/p <= s < n + 1 is covered by the frame alone."""
        report = validate_range(NormParams(1.5, 2, 2, Space.BESOV, 1))
        assert report.classification is RangeClass.FRAME
        assert report.frame_valid

    def test_outside_message_quotes_interval(self):
        """Test that an out-of-range s reports the admissible interval."""
        with pytest.raises(OutOfRangeError) as excinfo:
            require_frame_range(NormParams(3.0, 2, 2, Space.BESOV, 1))
        assert excinfo.value.interval == (-1.5, 2.0)
        assert '(-1.5, 2)' in str(excinfo.value)

    def test_interval_has_no_negative_zero(self):
        """Test that the Haar interval for p = q = 1 is quoted as (0, 1)."""
        with pytest.raises(OutOfRangeError) as excinfo:
            require_frame_range(NormParams(-1.0, 1, 1, Space.BESOV, 0))
        assert '(0, 1)' in str(excinfo.value)
        assert '-0' not in str(excinfo.value)
        assert math.copysign(1.0, excinfo.value.interval[0]) == 1.0

    def test_small_p_excluded(self):
        """Test that p <= 1/(2(n + 1)) has no frame interval."""
        report = validate_range(NormParams(0.0, 0.4, 1, Space.BESOV, 0))
        assert report.frame_interval is None
        assert report.classification is RangeClass.OUTSIDE

    def test_small_p_besov_interval(self):
        """Test the lower end 1/p - 1 - n for p below one."""
        report = validate_range(NormParams(0.0, 0.5, 1, Space.BESOV, 1))
        assert report.frame_interval == (0.0, 2.0)

    def test_triebel_q_infinite(self):
        """Test that q = inf is admitted only for p <= 1."""
        assert validate_range(NormParams(0.5, 2, 'inf', Space.TRIEBEL, 1)).frame_interval is None
        assert validate_range(NormParams(0.5, 1, 'inf', Space.TRIEBEL, 1)).frame_valid

    def test_triebel_needs_finite_p(self):
        """Test that Triebel-Lizorkin with p = inf is outside."""
        report = validate_range(NormParams(0.5, 'inf', 2, Space.TRIEBEL, 1))
        assert report.classification is RangeClass.OUTSIDE

    def test_triebel_uses_worse_exponent(self):
        """Test that the lower end takes the maximum over p and q."""
        report = validate_range(NormParams(0.0, 2, 0.5, Space.TRIEBEL, 1))
        assert report.frame_interval == (0.0, 2.0)

    def test_sobolev_endpoint(self):
        """Test that the endpoint characterisation needs n >= 1 and p > 1."""
        assert validate_range(NormParams(0, 2, 2, Space.SOBOLEV, 1)).frame_valid
        assert not validate_range(NormParams(0, 2, 2, Space.SOBOLEV, 0)).frame_valid
        assert not validate_range(NormParams(0, 1, 2, Space.SOBOLEV, 2)).frame_valid

    def test_report_dict(self):
        """Test the serialised form of a report."""
        data = validate_range(NormParams(0.0, 2, 2, Space.BESOV, 1)).to_dict()
        assert data['classification'] == 'both'
        assert data['frame_interval'] == [-1.5, 2.0]
        assert data['inv_p_conjugate'] == 0.5


class TestSequenceNorms:
    """Tests for the b and f sequence norms."""

    def test_besov_hand_value(self):
        """Test the b^0_{2,2} norm of a two-scale table."""
        table = CoefficientTable({-1: (0, [1.0]), 0: (0, [1.0, 1.0])})
        assert seq_norm_besov(table, NormParams(0, 2, 2)) == pytest.approx(2.0)

    def test_triebel_hand_value(self):
        """Test the f^0_{2,2} norm of the same table."""
        table = CoefficientTable({-1: (0, [1.0]), 0: (0, [1.0, 1.0])})
        params = NormParams(0, 2, 2, Space.TRIEBEL)
        assert seq_norm_triebel(table, params) == pytest.approx(math.sqrt(3.0))

    def test_besov_equals_triebel_when_p_equals_q(self):
        """Test b^s_{p,p} = f^s_{p,p} on tables without the base scale."""
        table = CoefficientTable({0: (0, [1.0, 2.0]), 1: (-1, [0.5, 3.0, 1.0]), 2: (3, [0.25])})
        besov = seq_norm(table, NormParams(0.7, 1.5, 1.5, Space.BESOV))
        triebel = seq_norm(table, NormParams(0.7, 1.5, 1.5, Space.TRIEBEL))
        assert besov == pytest.approx(triebel, rel=1e-12)

    def test_infinite_exponents(self):
        """Test the supremum forms of b^0_{inf,inf} and f^0_{2,inf}."""
        table = CoefficientTable({0: (0, [1.0, -4.0]), 1: (0, [3.0])})
        assert seq_norm_besov(table, NormParams(0, 'inf', 'inf')) == pytest.approx(4.0)
        triebel = seq_norm_triebel(table, NormParams(0, 2, 'inf', Space.TRIEBEL))
        assert triebel == pytest.approx(math.sqrt(0.5 * 9 + 0.5 * 1 + 16))

    def test_triebel_rejects_infinite_p(self):
        """Test that f^s_{inf,q} raises OutOfRangeError."""
        with pytest.raises(OutOfRangeError):
            seq_norm_triebel(CoefficientTable({0: (0, [1.0])}), NormParams(0, 'inf', 2, 'triebel'))

    def test_empty_table(self):
        """Test that an empty table has norm zero."""
        assert seq_norm_besov(CoefficientTable(), NormParams(0, 2, 2)) == 0.0
        assert seq_norm_triebel(CoefficientTable(), NormParams(0, 2, 2, 'triebel')) == 0.0

    @pytest.mark.parametrize('space', [Space.BESOV, Space.TRIEBEL])
    def test_homogeneity(self, space):
        """Test ||alpha a|| = |alpha| ||a||."""
        table = _random_table(np.random.default_rng(3))
        params = NormParams(0.3, 0.7, 1.5, space)
        assert seq_norm(table.scaled(-3.0), params) == pytest.approx(3.0 * seq_norm(table, params))

    @pytest.mark.parametrize('space', [Space.BESOV, Space.TRIEBEL])
    @pytest.mark.parametrize('p, q', [(2, 2), (0.5, 3), (3, 0.6)])
    def test_quasi_triangle(self, space, p, q):
        """Test ||a + b||^u <= ||a||^u + ||b||^u with u = min(1, p, q)."""
        rng = np.random.default_rng(11)
        params = NormParams(0.4, p, q, space)
        u = min(1.0, p, q)
        for _ in range(5):
            a, b = _random_table(rng), _random_table(rng)
            total = seq_norm(a + b, params) ** u
            assert total <= seq_norm(a, params) ** u + seq_norm(b, params) ** u + 1e-12

    @pytest.mark.parametrize('space', [Space.BESOV, Space.TRIEBEL])
    def test_monotone_in_smoothness(self, space):
        """Test that raising s cannot lower the norm when j >= 0."""
        table = _random_table(np.random.default_rng(5))
        values = [seq_norm(table, NormParams(s, 2, 2, space)) for s in (-1.0, 0.0, 0.5, 1.5)]
        assert values == sorted(values)


class TestTailRemainder:
    """Tests for the geometric estimate of the missing scales."""

    def test_geometric_sum(self):
        """Test b_J r / (1 - r^q)^(1/q) with r = 1/2 and q = 1."""
        table = CoefficientTable({0: (0, [1.0])})
        assert tail_remainder(table, NormParams(0, 1, 1)) == pytest.approx(1.0)

    def test_supremum(self):
        """Test b_J r for q = inf."""
        table = CoefficientTable({0: (0, [1.0])})
        assert tail_remainder(table, NormParams(0, 1, 'inf')) == pytest.approx(0.5)

    def test_empty(self):
        """Test that an empty table has no remainder."""
        assert tail_remainder(CoefficientTable(), NormParams(0, 2, 2)) == 0.0


class TestFrameNorm:
    """Tests for frame_norm and norm_report."""

    def test_haar_indicator(self, haar):
        """Test the b^0_{2,2} frame norm of 1_[0,1) against sqrt(3)."""
        value = frame_norm(Indicator(0.0, 1.0), haar, NormParams(0, 2, 2), J_max=12)
        assert value == pytest.approx(math.sqrt(3.0), abs=1e-3)

    def test_order_mismatch(self, haar):
        """Test that the system order must match params.n."""
        with pytest.raises(ValueError):
            frame_norm(Indicator(0.0, 1.0), haar, NormParams(0, 2, 2, n=1))

    def test_out_of_range(self, linear):
        """Test that s outside the frame interval raises OutOfRangeError."""
        with pytest.raises(OutOfRangeError):
            frame_norm(Gaussian(), linear, NormParams(3.0, 2, 2, n=1))

    def test_report_fields(self, linear):
        """Test the keys and the range section of norm_report."""
        report = norm_report(Gaussian(), linear, NormParams(0.5, 2, 2, n=1), J_max=4)
        assert report['function'] == 'gaussian:0,1'
        assert report['value'] > 0
        assert report['tail_remainder'] >= 0
        assert report['range']['classification'] == 'both'
        assert report['J_max'] == 4

    def test_sobolev_frame_norm(self, linear):
        """Test that the Sobolev frame norm is positive and scales linearly."""
        params = NormParams(0, 2, 2, Space.SOBOLEV, 1)
        f = Gaussian(0.0, 0.8)
        value = frame_norm(f, linear, params, J_max=5)
        assert value > 0
        assert frame_norm(f.scaled(2.0), linear, params, J_max=5) == pytest.approx(2 * value)


class TestSobolevReference:
    """Tests for the classical ||f||_p + ||f^(k)||_p."""

    def test_gaussian_l2(self):
        """Test the closed forms of ||f||_2 and ||f''||_2 for a Gaussian."""
        sigma = 0.7
        expected = (sigma * math.sqrt(math.pi)) ** 0.5
        expected += (3 * math.sqrt(math.pi) / (4 * sigma ** 3)) ** 0.5
        assert sobolev_reference_norm(Gaussian(0.0, sigma), 2, 2) == pytest.approx(expected,
                                                                                   rel=1e-8)

    def test_cubic_spline_supremum(self):
        """Test sup B_3 + sup |B_3''| = 2/3 + 2."""
        value = sobolev_reference_norm(DilatedBSpline(3, 1.0, 0.0), 'inf', 2)
        assert value == pytest.approx(2 / 3 + 2, abs=1e-12)

    def test_hat_l2(self):
        """Test ||B_1||_2 + ||B_1'||_2 = sqrt(2/3) + sqrt(2)."""
        value = sobolev_reference_norm(DilatedBSpline(1, 1.0, 0.0), 2, 1)
        assert value == pytest.approx(math.sqrt(2 / 3) + math.sqrt(2), rel=1e-12)

    def test_gaussian_supremum(self):
        """Test sup |f| + sup |f'| = 1 + exp(-1/2) for the unit Gaussian."""
        value = sobolev_reference_norm(Gaussian(), 'inf', 1)
        assert value == pytest.approx(1 + math.exp(-0.5), rel=1e-9)

    def test_indicator_has_no_derivative(self):
        """Test that the indicator refuses a first derivative."""
        with pytest.raises(UnsupportedFamilyError):
            sobolev_reference_norm(Indicator(0.0, 1.0), 2, 1)

    def test_polybump_derivative_beyond_smoothness(self):
        """Test that a degree-1 bump refuses k = 2, whose derivative is a pair of point masses."""
        with pytest.raises(UnsupportedFamilyError):
            sobolev_reference_norm(PolyBump(1, -1.0, 1.0), 2, 2)

    def test_polybump_weak_derivative(self):
        """Test ||(1 - x^2)^2||_2 + ||12 x^2 - 4||_2 = sqrt(256/315) + sqrt(25.6)."""
        value = sobolev_reference_norm(PolyBump(2, -1.0, 1.0), 2, 2)
        assert value == pytest.approx(math.sqrt(256 / 315) + math.sqrt(25.6), rel=1e-12)
