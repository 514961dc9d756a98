"""
BL Frame - Norms

This module contains the discrete Besov and Triebel-Lizorkin sequence norms,
the frame norms built from shifted spline coefficients, the endpoint Sobolev
variant, the classical Sobolev reference norm and the classification of
(s, p, q) against the admissible parameter ranges.

Conjugate exponents follow 1/p' = 1 - 1/p for every p > 0, so p' is infinite
at p = 1 and negative below it.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize_scalar

from .analysis import DEFAULT_J_MAX, DEFAULT_TOL, CoefficientTable, frame_coefficients
from .bspline import gauss_panels
from .errors import OutOfRangeError

logger = logging.getLogger(__name__)

__all__ = [
    'CoefficientTable', 'NormParams', 'RangeReport', 'Space', 'frame_norm',
    'norm_report', 'seq_norm', 'seq_norm_besov', 'seq_norm_triebel',
    'sobolev_reference_norm', 'tail_remainder', 'validate_range',
]


class Space(str, Enum):
    BESOV = 'besov'
    TRIEBEL = 'triebel'
    SOBOLEV = 'sobolev'


class RangeClass(str, Enum):
    FRAME = 'frame_valid'
    BASIS = 'basis_valid'
    BOTH = 'both'
    OUTSIDE = 'outside'


def parse_exponent(value):
    """Read an integrability exponent, accepting 'inf' and 'infinity'."""
    if isinstance(value, str) and value.strip().lower() in ('inf', 'infinity', '∞'):
        return math.inf
    exponent = float(value)
    if not exponent > 0:
        raise ValueError(f'exponents must be positive, got {value}')
    return exponent


@dataclass(frozen=True)
class NormParams:
    """Smoothness s, integrability p, summability q, target space and order n."""
    s: float
    p: float
    q: float
    space: Space = Space.BESOV
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'p', parse_exponent(self.p))
        object.__setattr__(self, 'q', parse_exponent(self.q))
        object.__setattr__(self, 'space', Space(self.space))
        if self.n < 0:
            raise ValueError(f'order must be non-negative, got {self.n}')

    @property
    def p_infinite(self):
        return math.isinf(self.p)

    @property
    def q_infinite(self):
        return math.isinf(self.q)

    @property
    def inv_p(self):
        return 0.0 if self.p_infinite else 1.0 / self.p

    @property
    def inv_q(self):
        return 0.0 if self.q_infinite else 1.0 / self.q

    def effective(self):
        """Parameters actually used by the sequence norm of this space."""
        if self.space is Space.SOBOLEV:
            return NormParams(self.n + 1, self.p, math.inf, Space.BESOV, self.n)
        return self

    def to_dict(self):
        return {
            's': self.s, 'p': _exponent_text(self.p), 'q': _exponent_text(self.q),
            'space': self.space.value, 'n': self.n,
        }


def _exponent_text(value):
    return 'inf' if math.isinf(value) else value


def conjugate_inverse(p):
    """Return 1/p' = 1 - 1/p."""
    return 1.0 - (0.0 if math.isinf(p) else 1.0 / p)


@dataclass(frozen=True)
class RangeReport:
    """Classification of (s, p, q) against the frame and basis ranges."""
    classification: RangeClass
    frame_interval: tuple | None
    basis_interval: tuple | None
    reason: str
    inv_p_conjugate: float
    inv_q_conjugate: float

    @property
    def frame_valid(self):
        return self.classification in (RangeClass.FRAME, RangeClass.BOTH)

    def to_dict(self):
        return {
            'classification': self.classification.value,
            'frame_interval': list(self.frame_interval) if self.frame_interval else None,
            'basis_interval': list(self.basis_interval) if self.basis_interval else None,
            'reason': self.reason,
            'inv_p_conjugate': self.inv_p_conjugate,
            'inv_q_conjugate': self.inv_q_conjugate,
        }


def _open(lo, hi):
    # adding 0.0 turns -0.0 into 0.0
    return (lo + 0.0, hi + 0.0) if lo < hi else None


def _frame_interval(params):
    n, p, q = params.n, params.p, params.q
    floor = 1.0 / (2 * (n + 1))
    low_p = -conjugate_inverse(p)
    low_q = -conjugate_inverse(q)
    if params.space is Space.SOBOLEV:
        if n < 1:
            return None, 'the endpoint Sobolev characterisation needs n >= 1'
        if not p > 1:
            return None, 'the endpoint Sobolev characterisation needs 1 < p <= inf'
        return (n + 1.0, n + 1.0), 'endpoint Sobolev range'
    if params.space is Space.BESOV:
        if not p > floor:
            return None, f'p <= 1/(2(n+1)) = {floor:g}'
        return _open(low_p - n, n + 1.0), 'Besov frame range'
    if params.p_infinite:
        return None, 'Triebel-Lizorkin norms need p < inf'
    if not p > floor:
        return None, f'p <= 1/(2(n+1)) = {floor:g}'
    if params.q_infinite:
        if p > 1:
            return None, 'q = inf is only admitted for p <= 1'
    elif not q > floor:
        return None, f'q <= 1/(2(n+1)) = {floor:g}'
    return _open(max(low_p, low_q) - n, n + 1.0), 'Triebel-Lizorkin frame range'


def _basis_interval(params):
    n, p, q = params.n, params.p, params.q
    low_p = -conjugate_inverse(p)
    low_q = -conjugate_inverse(q)
    if params.space is Space.SOBOLEV:
        return None
    if params.space is Space.BESOV:
        return _open(low_p - n, n + min(params.inv_p, 1.0))
    if params.p_infinite:
        return None
    finite_q = not params.q_infinite and q > 1
    if finite_q and (p > 1 or params.inv_p < 1 + params.inv_q):
        return _open(max(low_p, low_q) - n, n + min(params.inv_p, params.inv_q))
    return _open(max(low_p, low_q, 0.0) - n, float(n))


def validate_range(params):
    """Classify (s, p, q) against the frame and the basis parameter ranges.

    Args:
        params: NormParams.

    Returns:
        RangeReport: The classification together with both admissible
            s-intervals (None where the integrability parameters exclude the
            range altogether).
    """
    frame, reason = _frame_interval(params)
    basis = _basis_interval(params)
    s = params.s
    if params.space is Space.SOBOLEV:
        in_frame = frame is not None
    else:
        in_frame = frame is not None and frame[0] < s < frame[1]
    in_basis = basis is not None and basis[0] < s < basis[1]
    if in_frame and in_basis:
        label = RangeClass.BOTH
    elif in_frame:
        label = RangeClass.FRAME
    elif in_basis:
        label = RangeClass.BASIS
    else:
        label = RangeClass.OUTSIDE
    if frame is not None and not in_frame:
        reason = f's = {s:g} lies outside the {reason}'
    return RangeReport(label, frame, basis, reason,
                       conjugate_inverse(params.p), conjugate_inverse(params.q))


def require_frame_range(params):
    """Raise OutOfRangeError unless the frame characterisation covers params."""
    report = validate_range(params)
    if not report.frame_valid:
        raise OutOfRangeError(report.reason, report.frame_interval)
    return report


def _lp(values, p):
    values = np.abs(np.asarray(values, dtype=float))
    if not values.size:
        return 0.0
    if math.isinf(p):
        return float(values.max())
    return float(np.sum(values ** p) ** (1.0 / p))


def scale_norms(table, params):
    """Per-scale terms 2^{j(s - 1/p)} ||omega_j||_p for j = -1..J."""
    params = params.effective()
    return {j: 2.0 ** (j * (params.s - params.inv_p)) * _lp(table.row(j)[1], params.p)
            for j in table.scales}


def seq_norm_besov(table, params):
    """The b^s_{p,q} quasi-norm of a coefficient table.

    Args:
        table: CoefficientTable (or FrameCoefficients).
        params: NormParams; Sobolev parameters use s = n + 1 and q = inf.

    Returns:
        float: The sequence norm over the stored scales.
    """
    terms = list(scale_norms(table, params).values())
    return _lp(terms, params.effective().q)


def seq_norm_triebel(table, params):
    """The f^s_{p,q} quasi-norm of a coefficient table.

    The inner aggregation is constant between consecutive breakpoints of all
    dyadic step functions, so the L_p integral is an exact finite sum over
    those cells.

    Raises:
        OutOfRangeError: If p is infinite.
    """
    if params.p_infinite:
        raise OutOfRangeError('the f^s_{p,q} sequence norm needs p < inf')
    edges = []
    for j in table.scales:
        mus, _ = table.row(j)
        if len(mus):
            width = 1.0 if j <= 0 else 2.0 ** -j
            edges.append(np.arange(mus[0], mus[-1] + 2) * width)
    if not edges:
        return 0.0
    edges = np.unique(np.concatenate(edges))
    middle = 0.5 * (edges[:-1] + edges[1:])
    lengths = np.diff(edges)

    total = np.zeros_like(middle)
    for j in table.scales:
        mus, values = table.row(j)
        if not len(mus):
            continue
        width = 1.0 if j <= 0 else 2.0 ** -j
        offset = np.floor(middle / width).astype(np.int64) - mus[0]
        inside = (offset >= 0) & (offset < len(values))
        local = np.where(inside, np.abs(values[np.clip(offset, 0, len(values) - 1)]), 0.0)
        weighted = 2.0 ** (j * params.s) * local
        if params.q_infinite:
            total = np.maximum(total, weighted)
        else:
            total = total + weighted ** params.q
    if not params.q_infinite:
        total = total ** (1.0 / params.q)
    return float(np.sum(lengths * total ** params.p) ** (1.0 / params.p))


def seq_norm(table, params):
    """Dispatch to the sequence norm of params.space."""
    if params.space is Space.TRIEBEL:
        return seq_norm_triebel(table, params)
    return seq_norm_besov(table, params)


def tail_remainder(table, params):
    """Geometric estimate of the scales beyond the table's finest one.

    Scales j > J are modelled as decaying like 2^{(j - J)(s - (n + 1))} from
    the finest computed term b_J, which sums to b_J r / (1 - r^q)^{1/q} with
    r = 2^{s - (n + 1)} (b_J r for q = inf).
    """
    params = params.effective()
    terms = scale_norms(table, params)
    if not terms:
        return 0.0
    finest = terms[max(terms)]
    ratio = 2.0 ** (params.s - (params.n + 1))
    if params.q_infinite or ratio >= 1.0:
        return finest * ratio
    return finest * ratio / (1.0 - ratio ** params.q) ** (1.0 / params.q)


def frame_norm(f, sys, params, J_max=DEFAULT_J_MAX, tol=DEFAULT_TOL, workers=1):
    """Frame norm of f: the matching sequence norm of its frame coefficients.

    Args:
        f: TestFunction.
        sys: SplineSystem of order params.n.
        params: NormParams.
        J_max: Finest scale.
        tol: Tail tolerance of the coefficient windows.
        workers: Threads used for the coefficient table.

    Returns:
        float: The (quasi-) norm.

    Raises:
        OutOfRangeError: If params lie outside the frame characterisation.
    """
    return norm_report(f, sys, params, J_max, tol, workers)['value']


def norm_report(f, sys, params, J_max=DEFAULT_J_MAX, tol=DEFAULT_TOL, workers=1):
    """Frame norm of f together with its inputs, tail remainder and range."""
    if sys.order != params.n:
        raise ValueError(f'system order {sys.order} does not match n = {params.n}')
    report = require_frame_range(params)
    table = frame_coefficients(f, sys, J_max, tol, workers)
    value = seq_norm(table, params.effective())
    logger.info('frame norm of %s: %.6g', f.describe(), value)
    return {
        'function': f.describe(),
        'params': params.to_dict(),
        'J_max': J_max,
        'tol': tol,
        'value': value,
        'tail_remainder': tail_remainder(table, params),
        'coefficient_tail_bound': table.tail_bound,
        'range': report.to_dict(),
    }


def _panel_lp(func, edges, p, split=4, npts=20):
    edges = np.asarray(edges, dtype=float)
    steps = np.linspace(0.0, 1.0, split + 1)[:-1]
    fine = np.append((edges[:-1, None] + np.diff(edges)[:, None] * steps).ravel(), edges[-1])
    if math.isinf(p):
        grid = np.linspace(0.0, 1.0, 65)
        samples = (fine[:-1, None] + np.diff(fine)[:, None] * grid).ravel()
        values = np.abs(func(samples))
        best = int(np.argmax(values))
        lo = samples[max(best - 1, 0)]
        hi = samples[min(best + 1, len(samples) - 1)]
        if hi > lo:
            result = minimize_scalar(lambda t: -abs(float(func(t))), bounds=(lo, hi),
                                     method='bounded', options={'xatol': 1e-13})
            return max(float(values[best]), -float(result.fun))
        return float(values[best])
    x, w = gauss_panels(fine, npts)
    return float(np.sum(w * np.abs(func(x)) ** p) ** (1.0 / p))


def _piecewise_lp(pp, p):
    if math.isinf(p):
        return pp.sup_norm()
    edges = [pp.knots]
    for idx, row in enumerate(pp.coeffs):
        if pp.degree >= 1 and np.any(row[1:]):
            roots = np.atleast_1d(npoly.polyroots(row))
            left = pp.origin + idx * pp.knot_spacing
            edges.append([left + r.real for r in roots
                          if abs(r.imag) < 1e-12 and 0.0 < r.real < pp.knot_spacing])
    breaks = np.unique(np.concatenate(edges))
    return _panel_lp(pp, breaks, p)


def sobolev_reference_norm(f, p, k):
    """Classical Sobolev norm ||f||_p + ||f^(k)||_p.

    Piecewise-polynomial families are integrated panel by panel between knots
    and real roots; p = inf uses their exact maxima. Smooth families use
    composite Gauss-Legendre quadrature over their panel edges, and p = inf a
    dense sample followed by a bounded scalar maximisation.

    Raises:
        UnsupportedFamilyError: If f has no derivative of order k.
    """
    p = parse_exponent(p)
    f.derivative(k, np.zeros(1))
    pp = f.piecewise
    if pp is not None:
        return _piecewise_lp(pp, p) + _piecewise_lp(pp.derivative(k), p)
    lo, hi = f.support
    edges = np.unique(np.concatenate(([lo, hi], [e for e in f.panel_edges if lo <= e <= hi],
                                      [b for b in f.breakpoints if lo <= b <= hi])))
    return _panel_lp(f, edges, p) + _panel_lp(lambda x: f.derivative(k, x), edges, p)
