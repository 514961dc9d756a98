"""
BL Frame - Test Functions

This module contains the catalogue of concrete functions whose frame
coefficients, norms and Littlewood-Paley pieces the package computes.

Every family carries an amplitude, its breakpoints (points where a derivative
jumps), an effective support, and ``dilate(m)`` returning x -> f(2^m x) inside
the same family. Piecewise-polynomial families expose their exact
``piecewise`` form so pairings can be computed without quadrature error.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial import hermite_e
from numpy.polynomial import polynomial as npoly
from scipy.special import comb, erfc

from .bspline import PiecewisePoly, bspline_fourier, bspline_piecewise
from .errors import UnsupportedFamilyError

GAUSSIAN_CUTOFF = 12.0


class TestFunction:
    """Base class of the catalogue.

    Subclasses implement ``__call__``, ``derivative``, ``support`` and
    ``dilate``; piecewise-polynomial families also provide ``piecewise``.
    """
    __test__ = False

    family = None
    amplitude = 1.0

    @property
    def piecewise(self):
        """Exact PiecewisePoly form, or None for non-polynomial families."""
        return None

    @property
    def breakpoints(self):
        return np.empty(0)

    @property
    def panel_edges(self):
        """Points at which quadrature panels are split."""
        return np.asarray(self.support, dtype=float)

    @property
    def compact(self):
        return True

    @property
    def smoothness(self):
        """Number of classical derivatives; math.inf for smooth families."""
        return math.inf

    @property
    def truncation_mass(self):
        """Bound on int |f| outside ``support``."""
        return 0.0

    @property
    def has_fourier(self):
        return False

    def fourier(self, xi):
        raise UnsupportedFamilyError(f'{self.family} has no closed-form Fourier transform')

    def sup_norm(self):
        pp = self.piecewise
        if pp is not None:
            return pp.sup_norm()
        return abs(self.amplitude)

    def scaled(self, factor):
        """Return factor * f within the same family."""
        return replace(self, amplitude=self.amplitude * factor)

    def __call__(self, x):
        pp = self.piecewise
        return pp(x)

    def derivative(self, order, x):
        """Evaluate the derivative of the given order at x.

        Raises:
            UnsupportedFamilyError: If the family has no derivative of that
                order as a function.
        """
        if order > self.smoothness + 1:
            raise UnsupportedFamilyError(
                f'{self.family} has no derivative of order {order} as a function'
            )
        return self.piecewise.derivative(order)(x)

    def describe(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Gaussian(TestFunction):
    """amplitude * exp(-(x - center)^2 / (2 width^2))."""
    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0
    family = 'gaussian'

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError('gaussian width must be positive')

    def __call__(self, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-0.5 * u * u)

    def derivative(self, order, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.width
        hermite = hermite_e.hermeval(u, [0.0] * order + [1.0])
        return self.amplitude * (-1.0 / self.width) ** order * hermite * np.exp(-0.5 * u * u)

    @property
    def support(self):
        reach = GAUSSIAN_CUTOFF * self.width
        return self.center - reach, self.center + reach

    @property
    def panel_edges(self):
        return self.center + self.width * np.arange(-GAUSSIAN_CUTOFF, GAUSSIAN_CUTOFF + 0.25, 0.5)

    @property
    def compact(self):
        return False

    @property
    def truncation_mass(self):
        return abs(self.amplitude) * self.width * math.sqrt(2 * math.pi) * erfc(
            GAUSSIAN_CUTOFF / math.sqrt(2)
        )

    @property
    def has_fourier(self):
        return True

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (self.amplitude * self.width * math.sqrt(2 * math.pi)
                * np.exp(-0.5 * (self.width * xi) ** 2 - 1j * self.center * xi))

    def dilate(self, m):
        factor = 2.0 ** m
        return replace(self, center=self.center / factor, width=self.width / factor)

    def describe(self):
        return f'gaussian:{self.center:g},{self.width:g}'


@dataclass(frozen=True)
class DilatedBSpline(TestFunction):
    """amplitude * B_order(scale * x - shift)."""
    order: int = 3
    scale: float = 1.0
    shift: float = 0.0
    amplitude: float = 1.0
    family = 'bspline'

    def __post_init__(self):
        if self.order < 0 or not self.scale > 0:
            raise ValueError('bspline needs order >= 0 and a positive scale')

    @property
    def piecewise(self):
        return bspline_piecewise(self.order).dilate_shift(self.scale, self.shift).scaled(self.amplitude)

    @property
    def breakpoints(self):
        return self.piecewise.knots

    @property
    def panel_edges(self):
        return self.breakpoints

    @property
    def support(self):
        return self.piecewise.window

    @property
    def smoothness(self):
        return self.order - 1

    @property
    def has_fourier(self):
        return True

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (self.amplitude / self.scale * np.exp(-1j * self.shift * xi / self.scale)
                * bspline_fourier(self.order, xi / self.scale))

    def dilate(self, m):
        return replace(self, scale=self.scale * 2.0 ** m)

    def describe(self):
        return f'bspline:{self.order},{self.scale:g},{self.shift:g}'


def _bump_coefficients(degree, lo, hi):
    length = hi - lo
    base = np.array([0.0, 4.0 / length, -4.0 / length ** 2])
    return npoly.polypow(base, degree)


@dataclass(frozen=True)
class PolyBump(TestFunction):
    """amplitude * (4 (x - a)(b - x) / (b - a)^2)^degree on [a, b]."""
    degree: int = 4
    lo: float = -1.0
    hi: float = 1.0
    amplitude: float = 1.0
    family = 'polybump'

    def __post_init__(self):
        if self.degree < 0 or not self.hi > self.lo:
            raise ValueError('polybump needs degree >= 0 and lo < hi')

    @property
    def piecewise(self):
        coeffs = self.amplitude * _bump_coefficients(self.degree, self.lo, self.hi)
        return PiecewisePoly(self.hi - self.lo, self.lo, coeffs[None, :])

    @property
    def breakpoints(self):
        return np.array([self.lo, self.hi])

    @property
    def panel_edges(self):
        return np.linspace(self.lo, self.hi, 9)

    @property
    def support(self):
        return self.lo, self.hi

    @property
    def smoothness(self):
        return self.degree - 1

    def dilate(self, m):
        factor = 2.0 ** m
        return replace(self, lo=self.lo / factor, hi=self.hi / factor)

    def describe(self):
        return f'polybump:{self.degree},{self.lo:g},{self.hi:g}'


@dataclass(frozen=True)
class ModulatedBump(TestFunction):
    """amplitude * cos(frequency * x) times a polynomial bump on [a, b]."""
    frequency: float = 8.0
    lo: float = -1.0
    hi: float = 1.0
    degree: int = 4
    amplitude: float = 1.0
    family = 'modbump'

    def __post_init__(self):
        if self.degree < 0 or not self.hi > self.lo:
            raise ValueError('modbump needs degree >= 0 and lo < hi')

    @property
    def _bump(self):
        return PolyBump(self.degree, self.lo, self.hi).piecewise

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.cos(self.frequency * x) * self._bump(x)

    def derivative(self, order, x):
        if order > self.degree:
            raise UnsupportedFamilyError(
                f'modbump of degree {self.degree} has no derivative of order {order}'
            )
        x = np.asarray(x, dtype=float)
        bump = self._bump
        total = np.zeros_like(x)
        for i in range(order + 1):
            carrier = self.frequency ** i * np.cos(self.frequency * x + i * np.pi / 2)
            total = total + comb(order, i) * carrier * bump.derivative(order - i)(x)
        return self.amplitude * total

    @property
    def breakpoints(self):
        return np.array([self.lo, self.hi])

    @property
    def panel_edges(self):
        cycles = abs(self.frequency) * (self.hi - self.lo) / np.pi
        return np.linspace(self.lo, self.hi, max(9, int(np.ceil(4 * cycles)) + 1))

    @property
    def support(self):
        return self.lo, self.hi

    @property
    def smoothness(self):
        return self.degree - 1

    def dilate(self, m):
        factor = 2.0 ** m
        return replace(self, frequency=self.frequency * factor,
                       lo=self.lo / factor, hi=self.hi / factor)

    def describe(self):
        return f'modbump:{self.frequency:g},{self.lo:g},{self.hi:g},{self.degree}'


@dataclass(frozen=True)
class Indicator(TestFunction):
    """amplitude * 1_[a, b)."""
    lo: float = 0.0
    hi: float = 1.0
    amplitude: float = 1.0
    family = 'indicator'

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError('indicator needs lo < hi')

    @property
    def piecewise(self):
        return PiecewisePoly(self.hi - self.lo, self.lo, [[self.amplitude]])

    @property
    def breakpoints(self):
        return np.array([self.lo, self.hi])

    @property
    def support(self):
        return self.lo, self.hi

    @property
    def smoothness(self):
        return -1

    @property
    def has_fourier(self):
        return True

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        length = self.hi - self.lo
        return (self.amplitude * length * np.exp(-0.5j * (self.lo + self.hi) * xi)
                * np.sinc(length * xi / (2 * np.pi)))

    def derivative(self, order, x):
        if order > 0:
            raise UnsupportedFamilyError('indicator has no derivative as a function')
        return self(x)

    def dilate(self, m):
        factor = 2.0 ** m
        return replace(self, lo=self.lo / factor, hi=self.hi / factor)

    def describe(self):
        return f'indicator:{self.lo:g},{self.hi:g}'


@dataclass(frozen=True, eq=False)
class SplineFunction(TestFunction):
    """amplitude * p(x) for an arbitrary PiecewisePoly p."""
    pp: PiecewisePoly = None
    amplitude: float = 1.0
    family = 'spline'

    @property
    def piecewise(self):
        return self.pp.scaled(self.amplitude)

    @property
    def breakpoints(self):
        return self.pp.knots

    @property
    def panel_edges(self):
        return self.pp.knots

    @property
    def support(self):
        return self.pp.window

    @property
    def smoothness(self):
        return self.pp.degree - 1

    def dilate(self, m):
        return replace(self, pp=self.pp.dilate_shift(2.0 ** m, 0.0))

    def describe(self):
        return f'spline:{self.pp.pieces}x{self.pp.degree}@{self.pp.origin:g}'


def _numbers(text, count_min, count_max, family):
    try:
        values = [float(part) for part in text.split(',')] if text else []
    except ValueError as exc:
        raise ValueError(f'bad arguments for {family}: {text!r}') from exc
    if not count_min <= len(values) <= count_max:
        raise ValueError(f'{family} takes {count_min} to {count_max} arguments, got {len(values)}')
    return values


def parse_function(text):
    """Build a test function from a short description.

    Accepted forms (an optional ``alpha*`` prefix sets the amplitude):
        gaussian:center,width
        bspline:order,scale,shift
        polybump:degree,a,b
        modbump:frequency,a,b[,degree]
        indicator:a,b

    Args:
        text: The description, e.g. 'indicator:0,1'.

    Returns:
        TestFunction: The parsed function.

    Raises:
        ValueError: If the family is unknown or the arguments are malformed.
    """
    amplitude = 1.0
    body = text.strip()
    if '*' in body:
        prefix, body = body.split('*', 1)
        amplitude = float(prefix)
    family, _, args = body.partition(':')
    family = family.strip().lower()

    if family == 'gaussian':
        center, width = _numbers(args, 2, 2, family)
        return Gaussian(center, width, amplitude)
    if family == 'bspline':
        order, scale, shift = _numbers(args, 3, 3, family)
        return DilatedBSpline(int(order), scale, shift, amplitude)
    if family == 'polybump':
        degree, lo, hi = _numbers(args, 3, 3, family)
        return PolyBump(int(degree), lo, hi, amplitude)
    if family == 'modbump':
        values = _numbers(args, 3, 4, family)
        degree = int(values[3]) if len(values) == 4 else 4
        return ModulatedBump(values[0], values[1], values[2], degree, amplitude)
    if family == 'indicator':
        lo, hi = _numbers(args, 2, 2, family)
        return Indicator(lo, hi, amplitude)
    raise ValueError(f'unknown function family: {family!r}')


def standard_suite():
    """Smooth and non-smooth functions used by sweeps and equivalence checks."""
    return [
        Gaussian(0.0, 1.0),
        Gaussian(0.3, 0.5),
        DilatedBSpline(3, 1.0, 0.0),
        PolyBump(4, -1.0, 1.0),
        ModulatedBump(6.0, -1.0, 1.0, 4),
        DilatedBSpline(5, 2.0, 1.0),
    ]
