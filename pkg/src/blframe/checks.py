"""
BL Frame - Checks

This module runs the validity suites of a constructed system and reports every
measured residual next to its threshold, in the JSON shape printed by
``blframe check``.
"""

import logging

import numpy as np

from .blsystem import (
    antiderivative_rho,
    moments,
    orthonormality_residual,
    piecewise_coefficients,
    sequence_decay,
    smoothness_mismatch,
)
from .mra import mra_residual

logger = logging.getLogger(__name__)

ORTHONORMALITY_TOL = 1e-7
MOMENT_TOL = 1e-8
SMOOTHNESS_TOL = 1e-7
COEFFICIENT_TOL = 1e-8
RHO_TOL = 1e-6
SCALING_SUM_TOL = 1e-10
PIECE_RANGE = 20


def _entry(value, threshold, passed=None):
    value = float(value)
    if passed is None:
        passed = value <= threshold
    return {'value': value, 'threshold': threshold, 'passed': bool(passed)}


def piece_agreement(sys, mu_range=PIECE_RANGE):
    """Largest disagreement of A^0..A^(n-1) between adjacent half-pieces."""
    worst = 0.0
    n = sys.order
    if n == 0:
        return worst
    for which in ('wavelet', 'scaling'):
        for mu in range(-mu_range, mu_range + 1):
            left = piecewise_coefficients(sys, which, mu, side='left')
            right = piecewise_coefficients(sys, which, mu, side='right')
            worst = max(worst, float(np.max(np.abs(left[:n] - right[:n]))))
    return worst


def leading_coefficient_excess(sys, mu_range=PIECE_RANGE):
    """Worst ratio of |A^n_mu| to 4 C0 e^{gamma/2} e^{-gamma |mu| / 2} over psi.

    Values up to 1 mean the leading coefficients stay under the envelope built
    from the fitted decay constants.
    """
    constant, rate = sys.decay.constant, sys.decay.rate
    worst = 0.0
    for mu in range(-mu_range, mu_range + 1):
        bound = 4.0 * constant * np.exp(rate / 2.0) * np.exp(-rate * abs(mu) / 2.0)
        for side in ('left', 'right'):
            leading = abs(piecewise_coefficients(sys, 'wavelet', mu, side=side)[-1])
            worst = max(worst, leading / bound)
    return worst


def rho_relation_error(sys, samples=200, seed=0):
    """Largest |rho^(n+1)(2x) - psi(x)| over random off-knot points."""
    rng = np.random.default_rng(seed)
    lo, hi = sys.wavelet_pp.window
    x = rng.uniform(lo, hi, samples)
    derived = antiderivative_rho(sys).derivative(sys.order + 1)
    return float(np.max(np.abs(derived(2.0 * x) - sys.wavelet_pp(x))))


def check_system(sys):
    """Run the construction suites of one system.

    Args:
        sys: SplineSystem.

    Returns:
        dict: Per-invariant entries with value, threshold and pass flag, plus
            the system summary and an overall ``passed`` flag.
    """
    n = sys.order
    checks = {
        'orthonormality_residual': _entry(orthonormality_residual(sys), ORTHONORMALITY_TOL),
        'vanishing_moments': _entry(np.max(np.abs(moments(sys, 'wavelet', n))), MOMENT_TOL),
        'scaling_integral': _entry(abs(moments(sys, 'scaling', 0)[0] - 1.0), MOMENT_TOL),
        'scaling_coefficient_sum': _entry(abs(np.sum(sys.scaling_coeffs) - 1.0), SCALING_SUM_TOL),
        'smoothness_wavelet': _entry(smoothness_mismatch(sys.wavelet_pp, n - 1), SMOOTHNESS_TOL),
        'smoothness_scaling': _entry(smoothness_mismatch(sys.scaling_pp, n - 1), SMOOTHNESS_TOL),
        'decay_rate': _entry(sys.decay.rate, 0.0, passed=sys.decay.rate > 0),
    }
    mra_tol = sys.truncation_tail + 1e-12
    checks['mra_residual_scaling'] = _entry(mra_residual(sys, 'scaling'), mra_tol)
    checks['mra_residual_wavelet'] = _entry(mra_residual(sys, 'wavelet'), mra_tol)
    checks['rho_relation'] = _entry(rho_relation_error(sys), RHO_TOL)
    if n >= 1:
        checks['piece_agreement'] = _entry(piece_agreement(sys), COEFFICIENT_TOL)
        checks['leading_coefficient_envelope'] = _entry(leading_coefficient_excess(sys), 1.0)
        d_fit, e_fit = sequence_decay(sys)
        checks['sequence_decay_rate'] = _entry(
            min(d_fit.rate, e_fit.rate), 0.0, passed=min(d_fit.rate, e_fit.rate) > 0
        )
    passed = all(entry['passed'] for entry in checks.values())
    logger.info('checks of order %d: %s', n, 'passed' if passed else 'FAILED')
    return {'system': sys.summary(), 'checks': checks, 'passed': passed}
