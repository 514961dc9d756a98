"""
BL Frame - Analysis

This module contains the pairings (f, member) of test functions with system
members and the assembly of frame-coefficient tables.

Coefficients of one scale are computed together: first the B-spline moments
beta_m = int f(x) B_n(2^L x - m) dx at the next finer level L, then a direct
discrete correlation of beta with the two-scale sequence of the member
(d for the scaling function, e for the wavelet).
"""

import csv
import logging

import numpy as np
from joblib import Parallel, delayed
from scipy.signal import correlate

from .blsystem import DyadicIndex, MemberKind, member
from .bspline import bspline_piecewise, gauss_panels, spline_inner

logger = logging.getLogger(__name__)

DEFAULT_J_MAX = 8
DEFAULT_TOL = 1e-10


class CoefficientTable:
    """Windowed coefficients indexed by scale j >= -1 and translation mu.

    Each scale keeps one contiguous window, stored as the index of its first
    entry and an array of values.
    """

    def __init__(self, rows=None):
        self._rows = {}
        for j, (first, values) in (rows or {}).items():
            self._rows[int(j)] = (int(first), np.asarray(values, dtype=float))

    @classmethod
    def from_entries(cls, entries):
        """Build a table from a mapping {(j, mu): value}."""
        grouped = {}
        for (j, mu), value in entries.items():
            grouped.setdefault(j, {})[mu] = value
        rows = {}
        for j, values in grouped.items():
            first, last = min(values), max(values)
            row = np.zeros(last - first + 1)
            for mu, value in values.items():
                row[mu - first] = value
            rows[j] = (first, row)
        return cls(rows)

    @property
    def scales(self):
        return sorted(self._rows)

    @property
    def j_max(self):
        return max(self._rows) if self._rows else -1

    def row(self, j):
        """Return (translations, values) of scale j; empty arrays if absent."""
        if j not in self._rows:
            return np.empty(0, dtype=int), np.empty(0)
        first, values = self._rows[j]
        return first + np.arange(len(values)), values

    def window(self, j):
        """Return (mu_min, mu_max) of scale j, or None when it is empty."""
        mus, _ = self.row(j)
        return (int(mus[0]), int(mus[-1])) if len(mus) else None

    def get(self, j, mu):
        if j not in self._rows:
            return 0.0
        first, values = self._rows[j]
        offset = mu - first
        return float(values[offset]) if 0 <= offset < len(values) else 0.0

    def entries(self):
        """Yield (j, mu, value) over every stored entry."""
        for j in self.scales:
            mus, values = self.row(j)
            for mu, value in zip(mus, values):
                yield j, int(mu), float(value)

    def _derived(self, rows):
        return CoefficientTable(rows)

    def map(self, func):
        return self._derived({j: (first, func(values)) for j, (first, values) in self._rows.items()})

    def absolute(self):
        return self.map(np.abs)

    def scaled(self, factor):
        return self.map(lambda values: values * factor)

    def shifted(self, m):
        """Return the table with omega_{j, mu + m} placed at mu."""
        return self._derived({j: (first - m, values) for j, (first, values) in self._rows.items()})

    def __add__(self, other):
        merged = {}
        for table in (self, other):
            for j, mu, value in table.entries():
                merged[(j, mu)] = merged.get((j, mu), 0.0) + value
        return CoefficientTable.from_entries(merged)

    def to_rows(self):
        return [{'j': j, 'mu': mu, 'value': value} for j, mu, value in self.entries()]


def shifted_table(table, m):
    """Table of shifted entries omega_{j, mu + m} placed at index mu."""
    return table.shifted(m)


class FrameCoefficients(CoefficientTable):
    """Table of frame coefficients s_{j,mu}(f) >= 0 with a tail bound.

    Attributes:
        order: Order n of the system.
        tol: Tail tolerance used to trim the windows.
        tail_bound: Bound on any coefficient left out of the table.
    """

    def __init__(self, rows, order, j_max, tol=DEFAULT_TOL, tail_bound=0.0):
        super().__init__(rows)
        self.order = order
        self.tol = tol
        self.tail_bound = tail_bound
        self._j_max = j_max

    @property
    def j_max(self):
        return self._j_max

    def write_csv(self, handle):
        """Write '# n=..,J_max=..,tol=..' then j,mu,value rows to an open file."""
        handle.write(f'# n={self.order},J_max={self.j_max},tol={self.tol:g}\n')
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['j', 'mu', 'value'])
        for j, mu, value in self.entries():
            writer.writerow([j, mu, '%.17g' % value])


def _quadrature_edges(lo, hi, *point_sets):
    inner = np.concatenate([np.asarray(points, dtype=float).ravel() for points in point_sets])
    inner = inner[(inner > lo) & (inner < hi)]
    return np.unique(np.concatenate(([lo], inner, [hi])))


def _quadrature_points(f, order):
    pp = f.piecewise
    npts = 2 * (order + 3)
    if pp is not None:
        npts = max(npts, (pp.degree + order) // 2 + 1)
    return npts


def pair(f, sys, kind, idx, refine=1):
    """Integrate f against one member of the system.

    Piecewise-polynomial f is paired exactly through ``spline_inner``. Other
    families use composite Gauss-Legendre quadrature with 2(n + 3) nodes on
    panels bounded by the member's knots and f's panel edges.

    Args:
        f: TestFunction.
        sys: SplineSystem.
        kind: Member kind as accepted by ``eval_member``.
        idx: DyadicIndex of the member.
        refine: Number of equal parts each panel is split into.

    Returns:
        float: The pairing.
    """
    target = member(sys, kind, idx)
    pp = f.piecewise
    if pp is not None:
        return spline_inner(pp, target)

    lo = max(target.window[0], f.support[0])
    hi = min(target.window[1], f.support[1])
    if hi <= lo:
        return 0.0
    edges = _quadrature_edges(lo, hi, target.knots, f.panel_edges, f.breakpoints)
    if refine > 1:
        steps = np.linspace(0.0, 1.0, refine + 1)[:-1]
        edges = np.append((edges[:-1, None] + np.diff(edges)[:, None] * steps).ravel(), hi)
    x, w = gauss_panels(edges, _quadrature_points(f, sys.order))
    return float(np.sum(w * f(x) * target(x)))


def spline_moments(f, order, level):
    """Return (first, beta) with beta[i] = int f(x) B_order(2^level x - first - i) dx.

    The integrals run over cells of the 2^-level grid, split at f's panel
    edges and breakpoints so that every panel carries a smooth integrand.
    """
    lo, hi = f.support
    scale = 2.0 ** level
    cell_lo = int(np.floor(lo * scale))
    cell_hi = int(np.ceil(hi * scale))
    grid = np.arange(cell_lo, cell_hi + 1) / scale
    edges = _quadrature_edges(lo, hi, grid, f.panel_edges, f.breakpoints)
    x, w = gauss_panels(edges, _quadrature_points(f, order))

    middle = 0.5 * (edges[:-1] + edges[1:])
    cells = np.floor(middle * scale).astype(np.int64)[:, None]
    u = x * scale - cells
    weighted = w * f(x)

    first = cell_lo - order
    beta = np.zeros(cell_hi - cell_lo + order + 1)
    pieces = bspline_piecewise(order).coeffs
    for r in range(order + 1):
        local = np.polynomial.polynomial.polyval(u, pieces[r])
        np.add.at(beta, cells[:, 0] - r - first, np.sum(weighted * local, axis=1))
    return first, beta


def scale_pairings(f, sys, j):
    """Pair f with every member of scale j in one pass.

    Args:
        f: TestFunction.
        sys: SplineSystem.
        j: Scale; -1 pairs with Psi(x - mu), j >= 0 with the oversampled
            wavelets psi(2^j x - nu / 2).

    Returns:
        tuple: (first, values) with values[i] the pairing of index first + i.
    """
    if j == -1:
        level, coeffs, coeff_first = 0, sys.scaling_coeffs, sys.scaling_first
    else:
        level, coeffs, coeff_first = j + 1, sys.wavelet_coeffs, sys.wavelet_first
    beta_first, beta = spline_moments(f, sys.order, level)
    values = correlate(beta, coeffs, mode='full', method='direct')
    first = beta_first - coeff_first - (len(coeffs) - 1)
    return first, values


def _trim(first, values, tol):
    keep = np.nonzero(values > tol)[0]
    if not len(keep):
        return first, values[:0]
    return first + int(keep[0]), values[keep[0]:keep[-1] + 1]


def _frame_row(f, sys, j, tol):
    first, values = scale_pairings(f, sys, j)
    if j == -1:
        return _trim(first, np.abs(values), tol)
    if first % 2:
        first -= 1
        values = np.concatenate(([0.0], values))
    if len(values) % 2:
        values = np.append(values, 0.0)
    magnitude = np.abs(values).reshape(-1, 2).sum(axis=1) * 2.0 ** j
    return _trim(first // 2, magnitude, tol)


def tail_bound(f, sys, tol):
    """Bound on any coefficient left out of a table trimmed at ``tol``."""
    return tol + 2.0 * f.sup_norm() * sys.truncation_tail + f.truncation_mass * sys.decay.constant


def frame_coefficients(f, sys, J_max=DEFAULT_J_MAX, tol=DEFAULT_TOL, workers=1):
    """Compute the shifted spline coefficients s_{j,mu}(f), j = -1..J_max.

    Args:
        f: TestFunction.
        sys: SplineSystem.
        J_max: Finest scale, J_max >= -1.
        tol: Entries at the window edges not exceeding tol are trimmed.
        workers: Threads used across scales.

    Returns:
        FrameCoefficients: The table with its certified tail bound.
    """
    if J_max < -1:
        raise ValueError(f'J_max must be >= -1, got {J_max}')
    scales = list(range(-1, J_max + 1))
    results = Parallel(n_jobs=workers, prefer='threads')(
        delayed(_frame_row)(f, sys, j, tol) for j in scales
    )
    logger.debug('frame coefficients of %s up to scale %d', f.describe(), J_max)
    return FrameCoefficients(
        dict(zip(scales, results)), sys.order, J_max, tol, tail_bound(f, sys, tol)
    )


def basis_coefficients(f, sys, J_max=DEFAULT_J_MAX):
    """Coefficients omega_{j,mu} = 2^j (f, psi_{j,mu}) of the orthonormal expansion.

    Returns:
        CoefficientTable: Sign-carrying table over j = -1..J_max.
    """
    rows = {}
    for j in range(-1, J_max + 1):
        first, values = scale_pairings(f, sys, j)
        if j == -1:
            rows[j] = (first, values / np.sqrt(2.0))
            continue
        start = first if first % 2 == 0 else first + 1
        rows[j] = (start // 2, 2.0 ** j * values[start - first::2])
    return CoefficientTable(rows)


def frame_coefficient_direct(f, sys, j, mu, refine=1):
    """s_{j,mu}(f) computed member by member through ``pair``."""
    if j == -1:
        return abs(pair(f, sys, MemberKind.OVERSAMPLED, DyadicIndex(-1, mu), refine))
    return 2.0 ** j * sum(
        abs(pair(f, sys, MemberKind.OVERSAMPLED, DyadicIndex(j, nu), refine))
        for nu in (2 * mu, 2 * mu + 1)
    )
