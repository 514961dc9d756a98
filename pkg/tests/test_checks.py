"""
BL Frame - Check Suite Tests

Tests for check_system and its component measurements.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from blframe.checks import (
    check_system,
    leading_coefficient_excess,
    piece_agreement,
    rho_relation_error,
)


class TestCheckSystem:
    """Tests for the full construction suite."""

    @pytest.mark.parametrize('n', [0, 1, 2])
    def test_passes(self, system, n):
        """Test that the constructed systems pass every check."""
        report = check_system(system(n))
        failed = [name for name, entry in report['checks'].items() if not entry['passed']]
        assert failed == []
        assert report['passed'] is True

    def test_report_structure(self, linear):
        """Test that every entry carries value, threshold and pass flag."""
        report = check_system(linear)
        assert report['system'] == linear.summary()
        assert report['checks']['orthonormality_residual']['threshold'] == 1e-7
        for entry in report['checks'].values():
            assert set(entry) == {'value', 'threshold', 'passed'}
            assert isinstance(entry['value'], float)

    def test_haar_skips_piece_checks(self, haar):
        """Test that order 0 has no piece-agreement or sequence-decay entries."""
        checks = check_system(haar)['checks']
        assert 'piece_agreement' not in checks
        assert 'sequence_decay_rate' not in checks


class TestMeasurements:
    """Tests for the individual measurements."""

    def test_piece_agreement_haar(self, haar):
        """Test that order 0 has nothing to compare."""
        assert piece_agreement(haar) == 0.0

    def test_leading_coefficients_under_envelope(self, quadratic):
        """Test that |A^n_mu| stays under the decay envelope."""
        assert leading_coefficient_excess(quadratic) <= 1.0

    def test_rho_relation_is_seeded(self, linear):
        """Test that the random sample is reproducible."""
        assert rho_relation_error(linear, seed=4) == rho_relation_error(linear, seed=4)
        assert rho_relation_error(linear) <= 1e-6
