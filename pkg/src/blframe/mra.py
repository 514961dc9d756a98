"""
BL Frame - Multiresolution

This module contains the Gram matrices of the half-integer oversampled
wavelets, the least-squares expansion of B_(2n+1)^(n+1)(2x) in those wavelets,
the scale-space projections E_N and the least-squares membership residuals of
psi and Psi in their B-spline spaces.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed
from scipy.signal import correlate

from .analysis import spline_moments
from .blsystem import DyadicIndex, MemberKind, decay_fit, member
from .bspline import (
    autocorrelation_coefficients,
    bspline_derivative,
    gauss_panels,
    spline_inner,
    spline_series,
)
from .errors import ConditioningWarning, DecayFitUnavailable

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
DEFAULT_RIDGE = 1e-10
DEFAULT_REFINEMENTS = 3


def _window_range(window):
    if isinstance(window, int):
        return -window, window
    lo, hi = window
    return int(lo), int(hi)


def gram_matrix(sys, j, window, workers=1):
    """Gram matrix of the oversampled members of scale j.

    Args:
        sys: SplineSystem.
        j: Scale, j >= -1.
        window: Half-width W (indices -W..W) or an inclusive (lo, hi) pair.
        workers: Threads used for the rows.

    Returns:
        tuple: (indices, matrix) with matrix[a, b] the inner product of the
            members with indices[a] and indices[b].
    """
    lo, hi = _window_range(window)
    indices = np.arange(lo, hi + 1)
    members = [member(sys, MemberKind.OVERSAMPLED, DyadicIndex(j, int(ell))) for ell in indices]

    def row(a):
        return [spline_inner(members[a], members[b]) for b in range(a, len(members))]

    rows = Parallel(n_jobs=workers, prefer='threads')(delayed(row)(a) for a in range(len(members)))
    matrix = np.zeros((len(members), len(members)))
    for a, values in enumerate(rows):
        matrix[a, a:] = values
        matrix[a:, a] = values
    return indices, matrix


def derivative_target(n):
    """B_(2n+1)^(n+1)(2x) as a half-grid PiecewisePoly."""
    return bspline_derivative(2 * n + 1, n + 1).dilate_shift(2.0, 0.0)


@dataclass(frozen=True, eq=False)
class LeastSquaresFit:
    """Coefficients q of an oversampled expansion and its quality.

    Attributes:
        first_index: Translation index of coefficients[0].
        coefficients: The solution q.
        residual: Exact L2 norm of target minus the expansion.
        ridge: Tikhonov parameter used.
        condition: Condition number of the Gram matrix.
        sensitivity: Residuals obtained with ridge / 100 and ridge * 100.
    """
    first_index: int
    coefficients: np.ndarray
    residual: float
    ridge: float
    condition: float
    sensitivity: dict

    def decay(self):
        """Fitted exponential envelope of |q_l|, or None when unavailable."""
        index = self.first_index + np.arange(len(self.coefficients))
        try:
            return decay_fit(self.coefficients, index)
        except DecayFitUnavailable:
            return None

    def to_rows(self):
        return [{'l': int(self.first_index + i), 'q': float(value)}
                for i, value in enumerate(self.coefficients)]


def _expansion(sys, first, q):
    """sum_l q_l psi(x - l / 2) as a half-grid spline."""
    return spline_series(np.convolve(q, sys.wavelet_coeffs), sys.order,
                         first + sys.wavelet_first, dilation=2.0)


def _residual(target, expansion):
    try:
        diff = target - expansion
        return float(np.sqrt(max(spline_inner(diff, diff), 0.0)))
    except ValueError:
        squared = (spline_inner(target, target) - 2.0 * spline_inner(target, expansion)
                   + spline_inner(expansion, expansion))
        return float(np.sqrt(max(squared, 0.0)))


def _ridge_solve(gram, rhs, ridge, refinements):
    shifted = gram + ridge * np.eye(len(gram))
    factor = scipy.linalg.cho_factor(shifted)
    solution = scipy.linalg.cho_solve(factor, rhs)
    for _ in range(refinements):
        solution = solution + scipy.linalg.cho_solve(factor, rhs - gram @ solution)
    return solution


def frame_least_squares(sys, target=None, window=30, ridge=DEFAULT_RIDGE,
                        refinements=DEFAULT_REFINEMENTS, workers=1):
    """Least-squares expansion of a target in psi(x - l / 2), |l| <= window.

    The ridge-regularised normal equations (G + ridge I) q = b are solved by
    Cholesky factorisation and improved by iterated Tikhonov refinement.

    Args:
        sys: SplineSystem.
        target: PiecewisePoly; defaults to B_(2n+1)^(n+1)(2x).
        window: Half-width W or inclusive (lo, hi) index range.
        ridge: Tikhonov parameter.
        refinements: Number of refinement steps.
        workers: Threads used for the Gram matrix.

    Returns:
        LeastSquaresFit: The solution and its exact residual.
    """
    if target is None:
        target = derivative_target(sys.order)
    indices, gram = gram_matrix(sys, 0, window, workers)
    rhs = np.array([
        spline_inner(target, member(sys, MemberKind.OVERSAMPLED, DyadicIndex(0, int(ell))))
        for ell in indices
    ])
    condition = float(np.linalg.cond(gram))
    if condition > CONDITION_LIMIT:
        logger.warning('oversampled Gram matrix has condition %.3g; using ridge %.1g',
                       condition, ridge)
        warnings.warn(f'Gram matrix condition {condition:.3g} exceeds {CONDITION_LIMIT:g}; '
                      f'returning the ridge-regularised solution', ConditioningWarning)

    first = int(indices[0])
    solution = _ridge_solve(gram, rhs, ridge, refinements)
    residual = _residual(target, _expansion(sys, first, solution))
    sensitivity = {}
    for factor in (1e-2, 1e2):
        other = _ridge_solve(gram, rhs, ridge * factor, refinements)
        sensitivity[ridge * factor] = _residual(target, _expansion(sys, first, other))
    logger.info('least squares on window %s: residual %.3g, condition %.3g',
                window, residual, condition)
    return LeastSquaresFit(first, solution, residual, ridge, condition, sensitivity)


def projection_EN(f, sys, N, window=None):
    """Projection E_N f = sum_mu 2^N (f, Psi_N,mu) Psi_N,mu onto scale N.

    Args:
        f: TestFunction.
        sys: SplineSystem.
        N: Scale, N >= 0.
        window: Optional inclusive (lo, hi) range of translations mu.

    Returns:
        PiecewisePoly: E_N f on the 2^-N grid, to be evaluated on any
            reporting grid.
    """
    if N < 0:
        raise ValueError(f'scale must be >= 0, got {N}')
    beta_first, beta = spline_moments(f, sys.order, N)
    d = sys.scaling_coeffs
    pairings = correlate(beta, d, mode='full', method='direct')
    first = beta_first - sys.scaling_first - (len(d) - 1)
    if window is not None:
        lo, hi = _window_range(window)
        keep = slice(max(lo - first, 0), max(hi - first + 1, 0))
        pairings = pairings[keep]
        first = max(first, lo)
    coefficients = 2.0 ** N * pairings
    return spline_series(np.convolve(coefficients, d), sys.order,
                         first + sys.scaling_first, dilation=2.0 ** N)


def l2_distance(f, pp):
    """L2 norm of f - pp by composite Gauss-Legendre quadrature."""
    lo = min(f.support[0], pp.window[0])
    hi = max(f.support[1], pp.window[1])
    points = np.concatenate((pp.knots, f.panel_edges, f.breakpoints))
    edges = np.unique(np.concatenate(([lo, hi], points[(points > lo) & (points < hi)])))
    x, w = gauss_panels(edges, max(12, pp.degree + 4))
    return float(np.sqrt(np.sum(w * (f(x) - pp(x)) ** 2)))


def mra_residual(sys, which):
    """Residual of the least-squares fit of psi or Psi in its B-spline space.

    Psi is fitted in span{B_n(x - k)} and psi in span{B_n(2x - k)}, with k
    covering the truncation window. The residual is measured exactly on the
    difference of the two piecewise forms.
    """
    n = sys.order
    if which in ('scaling', 'Psi'):
        pp, dilation = sys.scaling_pp, 1.0
    elif which in ('wavelet', 'psi'):
        pp, dilation = sys.wavelet_pp, 2.0
    else:
        raise ValueError(f"which must be 'wavelet' or 'scaling', got {which!r}")
    first = int(round(pp.window[0] * dilation))
    count = int(round((pp.window[1] - pp.window[0]) * dilation)) - n
    a = autocorrelation_coefficients(n)
    column = np.zeros(count)
    size = min(n + 1, count)
    column[:size] = a[:size] / dilation
    gram = scipy.linalg.toeplitz(column)
    base = spline_series([1.0], n, 0, dilation)
    rhs = np.array([spline_inner(pp, base.shifted((first + i) / dilation)) for i in range(count)])
    coefficients = scipy.linalg.solve(gram, rhs, assume_a='pos')
    return _residual(pp, spline_series(coefficients, n, first, dilation))
