"""
BL Frame - B-splines

This module contains the exact cardinal B-spline kernels and the uniform-knot
piecewise polynomial type that carries every spline, wavelet and antiderivative
in the package.

A ``PiecewisePoly`` stores one row of polynomial coefficients per knot
interval, in ascending powers of ``x - left_knot``. Everything outside its
window is identically zero. Products of two such functions are integrated with
Gauss-Legendre rules of sufficient order, which is exact for polynomials.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import comb, roots_legendre

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def legendre_rule(npts):
    """Return Gauss-Legendre nodes and weights on [-1, 1].

    Args:
        npts: Number of nodes; the rule is exact for degree 2*npts - 1.

    Returns:
        tuple: (nodes, weights) as read-only arrays.
    """
    nodes, weights = roots_legendre(npts)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_panels(edges, npts):
    """Map a Gauss-Legendre rule onto consecutive panels.

    Args:
        edges: Increasing panel boundaries, shape (P + 1,).
        npts: Nodes per panel.

    Returns:
        tuple: (x, w), both of shape (P, npts).
    """
    nodes, weights = legendre_rule(int(npts))
    edges = np.asarray(edges, dtype=float)
    left = edges[:-1, None]
    half = 0.5 * (edges[1:, None] - left)
    return left + half * (nodes + 1.0), half * weights


def _taylor_shift(coeffs, delta):
    """Re-expand sum c_k t^k around t = delta."""
    size = len(coeffs)
    out = np.zeros(size)
    for m in range(size):
        k = np.arange(m, size)
        out[m] = np.sum(coeffs[m:] * comb(k, m) * delta ** (k - m))
    return out


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """A windowed piecewise polynomial on a uniform knot grid.

    Attributes:
        knot_spacing: Distance between consecutive knots.
        origin: Leftmost knot.
        coeffs: Array of shape (pieces, degree + 1); row i holds the ascending
            coefficients of the polynomial on
            [origin + i * knot_spacing, origin + (i + 1) * knot_spacing)
            in the local variable x - (origin + i * knot_spacing).
    """
    knot_spacing: float
    origin: float
    coeffs: np.ndarray

    def __post_init__(self):
        if not self.knot_spacing > 0:
            raise ValueError('knot_spacing must be positive')
        coeffs = np.array(self.coeffs, dtype=float, ndmin=2)
        if coeffs.shape[0] == 0:
            coeffs = np.zeros((1, max(coeffs.shape[1], 1)))
        coeffs.setflags(write=False)
        object.__setattr__(self, 'knot_spacing', float(self.knot_spacing))
        object.__setattr__(self, 'origin', float(self.origin))
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    @property
    def pieces(self):
        return self.coeffs.shape[0]

    @property
    def window(self):
        """Interval (lo, hi) outside of which the function vanishes."""
        return self.origin, self.origin + self.pieces * self.knot_spacing

    @property
    def knots(self):
        return self.origin + self.knot_spacing * np.arange(self.pieces + 1)

    def evaluate(self, x, side='right'):
        """Evaluate the function.

        Args:
            x: Scalar or array of abscissae.
            side: 'right' takes the piece to the right of a knot (the function
                is right-continuous), 'left' the piece to its left.

        Returns:
            float or numpy.ndarray: Values, zero outside the window.
        """
        x = np.asarray(x, dtype=float)
        u = (x - self.origin) / self.knot_spacing
        if side == 'right':
            idx = np.floor(u).astype(np.int64)
        elif side == 'left':
            idx = np.ceil(u).astype(np.int64) - 1
        else:
            raise ValueError(f'unknown side: {side}')
        inside = (idx >= 0) & (idx < self.pieces)
        safe = np.clip(idx, 0, self.pieces - 1)
        t = x - (self.origin + safe * self.knot_spacing)
        rows = self.coeffs[safe]
        values = rows[..., -1]
        for k in range(self.degree - 1, -1, -1):
            values = values * t + rows[..., k]
        values = np.where(inside, values, 0.0)
        return float(values) if values.ndim == 0 else values

    __call__ = evaluate

    def derivative(self, order=1):
        """Return the piecewise derivative of the given order."""
        if order == 0:
            return self
        if order > self.degree:
            return PiecewisePoly(self.knot_spacing, self.origin, np.zeros((self.pieces, 1)))
        return PiecewisePoly(
            self.knot_spacing, self.origin, npoly.polyder(self.coeffs, m=order, axis=1)
        )

    def dilate_shift(self, scale, shift):
        """Return x -> f(scale * x - shift) for scale > 0."""
        powers = float(scale) ** np.arange(self.degree + 1)
        return PiecewisePoly(
            self.knot_spacing / scale, (self.origin + shift) / scale, self.coeffs * powers
        )

    def shifted(self, delta):
        """Return x -> f(x - delta)."""
        return PiecewisePoly(self.knot_spacing, self.origin + delta, self.coeffs)

    def scaled(self, factor):
        """Return x -> factor * f(x)."""
        return PiecewisePoly(self.knot_spacing, self.origin, self.coeffs * factor)

    def taylor(self, center, side='right'):
        """Coefficients of one piece re-expanded around ``center``.

        Args:
            center: Expansion point.
            side: Which piece to take when ``center`` is a knot.

        Returns:
            numpy.ndarray: Ascending coefficients in powers of x - center;
                the zero vector when the piece lies outside the window.
        """
        u = (center - self.origin) / self.knot_spacing
        idx = int(np.floor(u)) if side == 'right' else int(np.ceil(u)) - 1
        if idx < 0 or idx >= self.pieces:
            return np.zeros(self.degree + 1)
        delta = center - (self.origin + idx * self.knot_spacing)
        return _taylor_shift(self.coeffs[idx], delta)

    def moments(self, max_power):
        """Exact moments int x^k f(x) dx for k = 0..max_power."""
        npts = (self.degree + max_power) // 2 + 1
        x, w = gauss_panels(self.knots, npts)
        weighted = w * self.evaluate(x)
        return np.array([np.sum(weighted * x ** k) for k in range(max_power + 1)])

    def integral(self):
        return float(self.moments(0)[0])

    def _aligned(self, other):
        if not np.isclose(self.knot_spacing, other.knot_spacing, rtol=0, atol=1e-14):
            raise ValueError('knot grids differ in spacing')
        offset = (other.origin - self.origin) / self.knot_spacing
        if abs(offset - round(offset)) > 1e-9:
            raise ValueError('knot grids are not aligned')
        return int(round(offset))

    def __add__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        offset = self._aligned(other)
        first = min(0, offset)
        last = max(self.pieces, offset + other.pieces)
        degree = max(self.degree, other.degree)
        out = np.zeros((last - first, degree + 1))
        out[-first:-first + self.pieces, :self.degree + 1] += self.coeffs
        start = offset - first
        out[start:start + other.pieces, :other.degree + 1] += other.coeffs
        return PiecewisePoly(self.knot_spacing, self.origin + first * self.knot_spacing, out)

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor):
        if isinstance(factor, PiecewisePoly):
            return NotImplemented
        return self.scaled(float(factor))

    __rmul__ = __mul__

    def sup_norm(self):
        """Exact maximum of |f| over its window."""
        best = 0.0
        for idx, row in enumerate(self.coeffs):
            candidates = [0.0, self.knot_spacing]
            if self.degree >= 2:
                roots = npoly.polyroots(npoly.polyder(row)) if np.any(row[1:]) else []
                candidates += [r.real for r in np.atleast_1d(roots)
                               if abs(r.imag) < 1e-12 and 0.0 <= r.real <= self.knot_spacing]
            values = npoly.polyval(np.array(candidates), row)
            best = max(best, float(np.max(np.abs(values))))
        return best


def spline_inner(p, q):
    """Exact L2 inner product of two piecewise polynomials.

    The integral is split at the union of both knot sets so that every panel
    carries a polynomial product, which a Gauss-Legendre rule of
    (deg p + deg q) // 2 + 1 nodes integrates exactly.

    Args:
        p: First PiecewisePoly.
        q: Second PiecewisePoly.

    Returns:
        float: The inner product.
    """
    lo = max(p.window[0], q.window[0])
    hi = min(p.window[1], q.window[1])
    if hi <= lo:
        return 0.0
    inner = np.union1d(p.knots, q.knots)
    inner = inner[(inner > lo) & (inner < hi)]
    edges = np.concatenate(([lo], inner, [hi]))
    x, w = gauss_panels(edges, (p.degree + q.degree) // 2 + 1)
    return float(np.sum(w * p.evaluate(x) * q.evaluate(x)))


@lru_cache(maxsize=None)
def bspline_piecewise(m):
    """Exact piecewise form of the cardinal B-spline B_m.

    Built from the convolution recursion B_m = B_{m-1} * 1_[0,1): on
    [i, i + 1) the new piece is A_i(u) - A_{i-1}(u) + A_{i-1}(1), where A_i
    is the antiderivative of piece i vanishing at u = 0.

    Args:
        m: Order (degree) of the B-spline, m >= 0.

    Returns:
        PiecewisePoly: B_m on integer knots 0..m+1.

    Raises:
        ValueError: If m is negative.
    """
    if m < 0:
        raise ValueError(f'B-spline order must be non-negative, got {m}')
    coeffs = np.ones((1, 1))
    for order in range(1, m + 1):
        anti = npoly.polyint(coeffs, axis=1)
        totals = anti.sum(axis=1)
        step = np.zeros((order + 1, order + 1))
        step[:order] += anti
        step[1:] -= anti
        step[1:, 0] += totals
        coeffs = step
    return PiecewisePoly(1.0, 0.0, coeffs)


def bspline_eval(m, x):
    """Evaluate B_m at x (scalar or array)."""
    return bspline_piecewise(m).evaluate(x)


def bspline_fourier(m, xi):
    """Fourier transform of B_m, convention int f(x) exp(-i x xi) dx.

    Uses the closed form ((1 - exp(-i xi)) / (i xi))^(m+1), written as
    (exp(-i xi / 2) sinc(xi / 2 pi))^(m+1) so that xi = 0 needs no special
    case.
    """
    if m < 0:
        raise ValueError(f'B-spline order must be non-negative, got {m}')
    xi = np.asarray(xi, dtype=float)
    factor = np.exp(-0.5j * xi) * np.sinc(xi / (2.0 * np.pi))
    result = factor ** (m + 1)
    return complex(result) if result.ndim == 0 else result


def spline_series(coefficients, order, first_index=0, dilation=1.0):
    """Piecewise form of sum_k c_k B_order(dilation * x - k).

    Args:
        coefficients: The sequence c, c[i] multiplying index first_index + i.
        order: B-spline order.
        first_index: Integer index of coefficients[0].
        dilation: Positive dilation factor of the argument.

    Returns:
        PiecewisePoly: Knot spacing 1 / dilation, origin first_index / dilation.
    """
    c = np.atleast_1d(np.asarray(coefficients, dtype=float))
    base = bspline_piecewise(order).coeffs
    pieces = np.stack([np.convolve(c, base[:, p]) for p in range(order + 1)], axis=1)
    pieces = pieces * float(dilation) ** np.arange(order + 1)
    return PiecewisePoly(1.0 / dilation, first_index / dilation, pieces)


def difference_stencil(count):
    """Coefficients of the count-fold backward difference, (1, -1)^{*count}."""
    k = np.arange(count + 1)
    return (-1.0) ** k * comb(count, k)


def bspline_derivative(m, k):
    """Exact B_m^(k) via the derivative identity B_m' = B_{m-1} - B_{m-1}(. - 1).

    Args:
        m: B-spline order.
        k: Derivative order, 0 <= k <= m.

    Returns:
        PiecewisePoly: The alternating binomial combination of shifts of B_{m-k}.
    """
    if not 0 <= k <= m:
        raise ValueError(f'derivative order must lie in [0, {m}], got {k}')
    return spline_series(difference_stencil(k), m - k)


@lru_cache(maxsize=None)
def _autocorrelation(n):
    base = bspline_piecewise(n)
    values = np.array([spline_inner(base, base.shifted(-j)) for j in range(n + 1)])
    values.setflags(write=False)
    return values


def autocorrelation_coefficients(n):
    """Return a_j = int B_n(x) B_n(x + j) dx for j = 0..n (a_{-j} = a_j)."""
    if n < 0:
        raise ValueError(f'B-spline order must be non-negative, got {n}')
    return _autocorrelation(n)


def autocorr_symbol(n, xi):
    """Evaluate E_n(xi) = sum_k |B_n^(xi + 2 pi k)|^2.

    The lattice sum equals the trigonometric polynomial
    a_0 + 2 sum_{j>=1} a_j cos(j xi) with exact spline inner products a_j.
    """
    a = autocorrelation_coefficients(n)
    xi = np.asarray(xi, dtype=float)
    j = np.arange(1, n + 1)
    result = a[0] + 2.0 * np.sum(a[1:] * np.cos(np.multiply.outer(xi, j)), axis=-1)
    return float(result) if np.ndim(result) == 0 else result
