"""
BL Frame - Littlewood-Paley Reference

This module computes Besov and Triebel-Lizorkin norms independently of any
spline system, from a smooth dyadic partition of unity on the Fourier side.

With eta = 1 on |xi| <= c1 and eta = 0 on |xi| >= c2 = 2 c1, and
theta_k(xi) = eta(2^-k xi), the level symbols are

    phi_0 = sqrt(theta_0),    phi_k = sqrt(theta_k - theta_(k-1))

so that sum_k phi_k^2 = theta_K telescopes to 1 on |xi| <= 2^K c1. Level k
lives in the annulus 2^(k-1) c1 <= |xi| <= 2^k c2.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import GridResolutionError
from .norms import Space, parse_exponent, sobolev_reference_norm

logger = logging.getLogger(__name__)

C1 = np.pi / 2
C2 = np.pi
DEFAULT_LEVELS = 12
DEFAULT_PADDING = 20.0
DEFAULT_MIN_SAMPLES = 2 ** 16


def _transition(t):
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        left = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        right = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return left / (left + right)


def eta(xi):
    """Smooth cutoff: 1 for |xi| <= c1, 0 for |xi| >= c2."""
    t = (np.abs(np.asarray(xi, dtype=float)) - C1) / C1
    return np.cos(0.5 * np.pi * _transition(t)) ** 2


@dataclass(frozen=True)
class DyadicPartition:
    """Square partition of unity over levels 0..levels."""
    levels: int = DEFAULT_LEVELS
    c1: float = C1
    c2: float = C2

    def theta(self, k, xi):
        if k < 0:
            return np.zeros_like(np.asarray(xi, dtype=float))
        return eta(np.asarray(xi, dtype=float) / 2.0 ** k)

    def increment(self, k, xi):
        """theta_k - theta_(k-1), clipped at zero."""
        return np.clip(self.theta(k, xi) - self.theta(k - 1, xi), 0.0, None)

    def symbol(self, k, xi):
        return np.sqrt(self.increment(k, xi))

    def dual_symbol(self, k, xi):
        """Quotient (theta_k - theta_(k-1)) / phi_k, zero where phi_k vanishes."""
        phi = self.symbol(k, xi)
        step = self.increment(k, xi)
        return np.divide(step, phi, out=np.zeros_like(step), where=phi > 0)

    @property
    def band(self):
        """Largest |xi| on which the partition sums to one."""
        return 2.0 ** self.levels * self.c1

    @property
    def required_spacing(self):
        """Grid spacing whose Nyquist frequency reaches the top level."""
        return np.pi / (2.0 ** self.levels * self.c2)

    def metadata(self):
        return {'levels': self.levels, 'c1': self.c1, 'c2': self.c2}


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid request: a sample count (None = automatic) and padding."""
    samples: int | None = None
    padding: float = DEFAULT_PADDING
    min_samples: int = DEFAULT_MIN_SAMPLES


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function on the uniform grid x0 + dx * arange(len(values))."""
    x0: float
    dx: float
    values: np.ndarray

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(len(self.values))


def sample(f, levels=DEFAULT_LEVELS, grid=None):
    """Sample f on a grid fine enough for the given number of levels.

    Args:
        f: TestFunction or SampledFunction.
        levels: Number K of Littlewood-Paley levels.
        grid: GridSpec; defaults to automatic sizing.

    Returns:
        SampledFunction: Samples covering f's support plus the padding.

    Raises:
        GridResolutionError: If the grid spacing exceeds 2^-K.
    """
    partition = DyadicPartition(levels)
    required = partition.required_spacing
    if isinstance(f, SampledFunction):
        if f.dx > required * (1 + 1e-12):
            raise GridResolutionError(required, f.dx)
        return f
    grid = grid or GridSpec()
    lo, hi = f.support
    window = hi - lo + 2.0 * grid.padding
    if grid.samples is None:
        needed = max(grid.min_samples, window / required)
        samples = 1 << int(math.ceil(math.log2(needed)))
    else:
        samples = int(grid.samples)
    dx = window / samples
    if dx > required * (1 + 1e-12):
        raise GridResolutionError(required, dx)
    x0 = lo - grid.padding
    logger.debug('sampling %s on %d points, dx=%.3g', f.describe(), samples, dx)
    return SampledFunction(x0, dx, f(x0 + dx * np.arange(samples)))


def _spectrum(sampled):
    values = np.asarray(sampled.values, dtype=float)
    xi = 2.0 * np.pi * np.fft.fftfreq(len(values), sampled.dx)
    return xi, np.fft.fft(values)


def _level_pieces(f, levels, grid, dual=False):
    sampled = sample(f, levels, grid)
    xi, spectrum = _spectrum(sampled)
    partition = DyadicPartition(levels)
    for k in range(levels + 1):
        symbol = partition.dual_symbol(k, xi) if dual else partition.symbol(k, xi)
        yield k, sampled, np.fft.ifft(symbol * spectrum).real


def lp_pieces(f, levels=DEFAULT_LEVELS, grid=None):
    """Littlewood-Paley pieces L_k f, k = 0..levels, on the sampling grid.

    Returns:
        tuple: (x, pieces) with pieces of shape (levels + 1, len(x)).
    """
    sampled = None
    pieces = []
    for _, sampled, piece in _level_pieces(f, levels, grid):
        pieces.append(piece)
    return sampled.x, np.array(pieces)


def _grid_lp(values, p, dx):
    values = np.abs(values)
    if math.isinf(p):
        return float(values.max()) if values.size else 0.0
    return float((np.sum(values ** p) * dx) ** (1.0 / p))


def level_norms(f, p, levels=DEFAULT_LEVELS, grid=None):
    """Return [(k, ||L_k f||_p)] for k = 0..levels."""
    p = parse_exponent(p)
    return [(k, _grid_lp(piece, p, sampled.dx))
            for k, sampled, piece in _level_pieces(f, levels, grid)]


def reference_norm(f, params, levels=DEFAULT_LEVELS, grid=None, dual=False):
    """Littlewood-Paley Besov or Triebel-Lizorkin norm of f.

    Levels are streamed: the Besov form keeps one L_p norm per level, the
    Triebel-Lizorkin form one running l_q accumulator per grid point.

    Args:
        f: TestFunction or SampledFunction.
        params: NormParams with space Besov or Triebel-Lizorkin.
        levels: Number K of levels.
        grid: GridSpec.
        dual: Use the dual pieces Lambda_k f instead of L_k f.

    Returns:
        float: The reference norm.
    """
    if params.space is Space.SOBOLEV:
        raise ValueError('use sobolev_reference_norm for the endpoint Sobolev space')
    if params.space is Space.TRIEBEL and params.p_infinite:
        raise ValueError('Triebel-Lizorkin norms need p < inf')
    terms = []
    accumulator = None
    dx = None
    for k, sampled, piece in _level_pieces(f, levels, grid, dual):
        dx = sampled.dx
        weighted = 2.0 ** (k * params.s) * np.abs(piece)
        if params.space is Space.BESOV:
            terms.append(_grid_lp(weighted, params.p, dx))
        elif params.q_infinite:
            accumulator = weighted if accumulator is None else np.maximum(accumulator, weighted)
        else:
            power = weighted ** params.q
            accumulator = power if accumulator is None else accumulator + power
    if params.space is Space.BESOV:
        terms = np.asarray(terms)
        if params.q_infinite:
            return float(terms.max())
        return float(np.sum(terms ** params.q) ** (1.0 / params.q))
    if not params.q_infinite:
        accumulator = accumulator ** (1.0 / params.q)
    return _grid_lp(accumulator, params.p, dx)


def lp_reconstruct(f, levels=DEFAULT_LEVELS, grid=None):
    """Relative L2 residual of f - sum_k L_k(Lambda_k f).

    Returns:
        float: The residual, relative to ||f||_2 unless f vanishes on the
            grid, in which case it is absolute.
    """
    sampled = sample(f, levels, grid)
    xi, spectrum = _spectrum(sampled)
    partition = DyadicPartition(levels)
    rebuilt = np.zeros_like(spectrum)
    for k in range(levels + 1):
        rebuilt += partition.symbol(k, xi) * partition.dual_symbol(k, xi) * spectrum
    residual = _grid_lp(sampled.values - np.fft.ifft(rebuilt).real, 2.0, sampled.dx)
    size = _grid_lp(sampled.values, 2.0, sampled.dx)
    return residual / size if size > 0 else residual


def reference_report(f, params, levels=DEFAULT_LEVELS, grid=None):
    """Reference norm with the partition constants and grid used."""
    sampled = sample(f, levels, grid)
    return {
        'function': f.describe(),
        'params': params.to_dict(),
        'value': reference_norm(sampled, params, levels),
        'partition': DyadicPartition(levels).metadata(),
        'samples': len(sampled.values),
        'spacing': sampled.dx,
    }


def reference_value(f, params, levels=DEFAULT_LEVELS, grid=None):
    """Independent norm of f matching params.space.

    Besov and Triebel-Lizorkin parameters use the Littlewood-Paley reference;
    the endpoint Sobolev space uses ||f||_p + ||f^(n+1)||_p.
    """
    if params.space is Space.SOBOLEV:
        return sobolev_reference_norm(f, params.p, params.n + 1)
    return reference_norm(f, params, levels, grid)
