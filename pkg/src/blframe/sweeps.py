"""
BL Frame - Sweeps

This module runs the comparison sweeps: frame norms against the
Littlewood-Paley reference over parameter grids and dilations, the endpoint
Sobolev comparison, dilation-scaling slopes, shift robustness of the
Triebel-Lizorkin sequence norm and the basis-versus-frame cross-check.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from joblib import Parallel, delayed

from .analysis import basis_coefficients, frame_coefficients
from .lp_ref import DEFAULT_LEVELS, reference_norm
from .norms import (
    NormParams,
    Space,
    frame_norm,
    seq_norm,
    seq_norm_besov,
    seq_norm_triebel,
    sobolev_reference_norm,
)

logger = logging.getLogger(__name__)


def dilation_slope(values, m):
    """Least-squares slope of log2(values) against m."""
    slope, _ = np.polyfit(np.asarray(m, dtype=float), np.log2(np.asarray(values, dtype=float)), 1)
    return float(slope)


@dataclass
class SweepResult:
    """Rows of a sweep and their ratio column."""
    rows: list = field(default_factory=list)
    ratio_key: str = 'ratio'

    @property
    def ratios(self):
        return np.array([row[self.ratio_key] for row in self.rows])

    def summary(self):
        ratios = self.ratios
        if not len(ratios):
            return {'count': 0}
        return {
            'count': int(len(ratios)),
            'min': float(ratios.min()),
            'max': float(ratios.max()),
            'spread': float(ratios.max() / ratios.min()),
        }

    def write_csv(self, handle):
        if not self.rows:
            return
        writer = csv.DictWriter(handle, fieldnames=list(self.rows[0]), lineterminator='\n')
        writer.writeheader()
        for row in self.rows:
            writer.writerow({key: '%.17g' % value if isinstance(value, float) else value
                             for key, value in row.items()})


def _system_for(systems, n):
    if callable(systems):
        return systems(n)
    return systems[n]


def _equivalence_cell(f, m, params, sys, J_max, tol, levels):
    g = f.dilate(m)
    frame = frame_norm(g, sys, params, J_max, tol)
    reference = reference_norm(g, params, levels)
    return {
        'function': f.describe(), 'm': m, 'n': params.n, 'space': params.space.value,
        's': params.s, 'p': params.p, 'q': params.q,
        'frame': frame, 'reference': reference, 'ratio': frame / reference,
    }


def equivalence_sweep(functions, cells, systems, dilations=range(7), J_max=12,
                      tol=1e-10, levels=DEFAULT_LEVELS, workers=1):
    """Compare frame norms with reference norms over a parameter grid.

    Args:
        functions: TestFunctions to dilate and measure.
        cells: NormParams (Besov or Triebel-Lizorkin) to sweep.
        systems: Mapping or callable giving the SplineSystem of order n.
        dilations: Exponents m of f(2^m x).
        J_max: Finest scale of the coefficient tables.
        tol: Tail tolerance.
        levels: Littlewood-Paley levels of the reference.
        workers: Threads over sweep cells.

    Returns:
        SweepResult: One row per (params, function, m).
    """
    jobs = [(f, m, params, _system_for(systems, params.n))
            for params, f, m in product(cells, functions, dilations)]
    rows = Parallel(n_jobs=workers, prefer='threads')(
        delayed(_equivalence_cell)(f, m, params, sys, J_max, tol, levels)
        for f, m, params, sys in jobs
    )
    result = SweepResult(rows)
    logger.info('equivalence sweep over %d cells: %s', len(rows), result.summary())
    return result


def _endpoint_frame(table, n, p):
    return seq_norm_besov(table, NormParams(n + 1, p, math.inf, Space.BESOV, n))


def endpoint_comparison(functions, sys, p_values=(2.0, math.inf), dilations=range(5),
                        J_max=10, tol=1e-10, forward_p=1.0, workers=1):
    """Compare the endpoint Sobolev frame norm with ||f||_p + ||f^(n+1)||_p.

    Each row also carries the ratio at ``forward_p`` (default p = 1), where
    only the frame norm <= C * Sobolev norm direction is expected.

    Returns:
        SweepResult: One row per (function, p, m).
    """
    n = sys.order

    def cell(f, p, m):
        g = f.dilate(m)
        table = frame_coefficients(g, sys, J_max, tol)
        frame = _endpoint_frame(table, n, p)
        reference = sobolev_reference_norm(g, p, n + 1)
        forward = _endpoint_frame(table, n, forward_p) / sobolev_reference_norm(g, forward_p, n + 1)
        return {
            'function': f.describe(), 'm': m, 'n': n, 'p': p,
            'frame': frame, 'reference': reference, 'ratio': frame / reference,
            'forward_ratio': forward,
        }

    rows = Parallel(n_jobs=workers, prefer='threads')(
        delayed(cell)(f, p, m) for f, p, m in product(functions, p_values, dilations)
    )
    return SweepResult(rows)


def shift_robustness(functions, sys, params, shifts=range(1, 9), J_max=8, tol=1e-10):
    """Growth of the f^s_{p,q} norm under translation of the coefficient table.

    For every function, the norm of the table shifted by m is divided by the
    unshifted norm and by (|m| + 1)^(1/r), r = min(p, q) / 2, then normalised
    by its value at m = 1.

    Returns:
        SweepResult: Rows with the raw and normalised ratios.
    """
    r = min(params.p, params.q) / 2.0
    rows = []
    for f in functions:
        table = frame_coefficients(f, sys, J_max, tol)
        base = seq_norm_triebel(table, params)
        raw = {m: seq_norm_triebel(table.shifted(m), params) / base / (abs(m) + 1) ** (1.0 / r)
               for m in sorted(set(shifts) | {1})}
        for m in shifts:
            rows.append({'function': f.describe(), 'm': m, 'raw': raw[m],
                         'ratio': raw[m] / raw[1]})
    return SweepResult(rows)


def basis_ratio(f, sys, params, J_max=8, tol=1e-10):
    """Ratio of the orthonormal-expansion norm to the frame norm."""
    basis = seq_norm(basis_coefficients(f, sys, J_max), params)
    frame = seq_norm(frame_coefficients(f, sys, J_max, tol), params)
    return basis / frame
