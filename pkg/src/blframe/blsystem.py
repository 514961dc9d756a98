"""
BL Frame - Spline Systems

This module constructs the classical Battle-Lemarie scaling function Psi and
wavelet psi of order n in exact, truncated piecewise-polynomial form.

The periodic symbols are sampled on N points and their Fourier coefficients
are read off with an inverse FFT:

    d  <- E_n(eta)^(-1/2)                          Psi = sum d_k B_n(x - k)
    r  <- sqrt(E_n(eta + pi) / (E_n(2 eta) E_n(eta)))
    c_k = (-1)^n 2^(-n) r_(k+n)                    rho = sum c_k B_(2n+1)(y - k)
    e  = (n+1)-fold backward difference of c       psi = sum e_k B_n(2x - k)

Building e as a difference of c gives the truncated wavelet n + 1 vanishing
moments exactly, and makes rho^(n+1)(2x) = psi(x) an identity between the
stored piecewise forms.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bspline import (
    autocorr_symbol,
    difference_stencil,
    spline_inner,
    spline_series,
)
from .errors import DecayFitUnavailable, NumericalBreakdownError

logger = logging.getLogger(__name__)

MIN_TRUNCATION = 8
MIN_SYMBOL_SAMPLES = 1024
TAIL_TARGET = 1e-10
SYMBOL_FLOOR = 1e-10


class MemberKind(str, Enum):
    """Members of a spline system that can be evaluated or paired."""
    SCALING = 'scaling'
    WAVELET = 'wavelet'
    DYADIC = 'dyadic'
    OVERSAMPLED = 'oversampled'
    BASE = 'base'


@dataclass(frozen=True)
class DyadicIndex:
    """Scale and translation of a system member.

    Attributes:
        j: Scale, -1 for the base scale.
        mu: Translation index.
    """
    j: int
    mu: int

    def __post_init__(self):
        if self.j < -1:
            raise ValueError(f'scale must be >= -1, got {self.j}')

    @property
    def interval(self):
        """Dyadic interval I_{j,mu} as a half-open (lo, hi) pair."""
        width = 1.0 if self.j <= 0 else 2.0 ** -self.j
        return self.mu * width, (self.mu + 1) * width


@dataclass(frozen=True)
class DecayFit:
    """Exponential envelope C * exp(-rate * |x|)."""
    constant: float
    rate: float
    compact: bool = False

    def envelope(self, x):
        return self.constant * np.exp(-self.rate * np.abs(x))


@dataclass(frozen=True, eq=False)
class SplineSystem:
    """A Battle-Lemarie pair of order n with its coefficient sequences.

    The sequences are stored with the integer index of their first entry:
    ``scaling_coeffs[i]`` is d_(scaling_first + i), and likewise for e and c.
    """
    order: int
    truncation: int
    symbol_samples: int
    scaling_coeffs: np.ndarray
    scaling_first: int
    rho_coeffs: np.ndarray
    rho_first: int
    truncation_tail: float
    decay: DecayFit = None
    wavelet_coeffs: np.ndarray = field(init=False, repr=False)
    wavelet_first: int = field(init=False, repr=False)
    scaling_pp: object = field(init=False, repr=False)
    wavelet_pp: object = field(init=False, repr=False)
    rho_pp: object = field(init=False, repr=False)

    def __post_init__(self):
        n = self.order
        d = np.array(self.scaling_coeffs, dtype=float)
        c = np.array(self.rho_coeffs, dtype=float)
        e = np.convolve(c, difference_stencil(n + 1))
        for array in (d, c, e):
            array.setflags(write=False)
        assign = object.__setattr__
        assign(self, 'scaling_coeffs', d)
        assign(self, 'rho_coeffs', c)
        assign(self, 'wavelet_coeffs', e)
        assign(self, 'wavelet_first', self.rho_first)
        assign(self, 'scaling_pp', spline_series(d, n, self.scaling_first))
        assign(self, 'wavelet_pp', spline_series(e, n, self.rho_first, dilation=2.0))
        assign(self, 'rho_pp', spline_series(c, 2 * n + 1, self.rho_first))
        if self.decay is None:
            assign(self, 'decay', _system_decay(self))

    def to_dict(self):
        """Serialize the system to a JSON-ready dictionary."""
        return {
            'order': self.order,
            'truncation': self.truncation,
            'symbol_samples': self.symbol_samples,
            'scaling_coeffs': self.scaling_coeffs.tolist(),
            'scaling_first': self.scaling_first,
            'rho_coeffs': self.rho_coeffs.tolist(),
            'rho_first': self.rho_first,
            'truncation_tail': self.truncation_tail,
            'decay': {
                'constant': self.decay.constant,
                'rate': self.decay.rate,
                'compact': self.decay.compact,
            },
        }

    @classmethod
    def from_dict(cls, data):
        """Rebuild a system from ``to_dict`` output."""
        decay = data.get('decay')
        return cls(
            order=int(data['order']),
            truncation=int(data['truncation']),
            symbol_samples=int(data['symbol_samples']),
            scaling_coeffs=np.asarray(data['scaling_coeffs'], dtype=float),
            scaling_first=int(data['scaling_first']),
            rho_coeffs=np.asarray(data['rho_coeffs'], dtype=float),
            rho_first=int(data['rho_first']),
            truncation_tail=float(data['truncation_tail']),
            decay=DecayFit(float(decay['constant']), float(decay['rate']),
                           bool(decay['compact'])) if decay else None,
        )

    def summary(self):
        """Short description used by the CLI and the JSON service."""
        return {
            'order': self.order,
            'truncation': self.truncation,
            'symbol_samples': self.symbol_samples,
            'truncation_tail': self.truncation_tail,
            'decay_constant': self.decay.constant,
            'decay_rate': self.decay.rate,
            'compact': self.decay.compact,
            'scaling_window': list(self.scaling_pp.window),
            'wavelet_window': list(self.wavelet_pp.window),
        }


def _tail_mass(d_full, r_full):
    """Tail mass beyond each half-width K, for K = 0..N/2 - 1."""
    size = len(d_full)
    half = size // 2
    k = np.arange(half)
    magnitude = np.abs(d_full) + 2.0 * np.abs(r_full)
    folded = magnitude[k] + np.where(k > 0, magnitude[(-k) % size], 0.0)
    beyond = np.cumsum(folded[::-1])[::-1]
    return np.append(beyond[1:], 0.0)


def build_system(n, K=None, N=8192):
    """Construct the classical Battle-Lemarie system of order n.

    Args:
        n: Spline order, n >= 0.
        K: Coefficient half-width, K >= 8, or None to take the smallest K whose
            discarded coefficient mass stays below 1e-10.
        N: Number of symbol samples, a power of two >= 1024.

    Returns:
        SplineSystem: The truncated system.

    Raises:
        ValueError: On invalid arguments.
        NumericalBreakdownError: If the autocorrelation symbol drops below
            1e-10 on the sampling grid.
    """
    if n < 0:
        raise ValueError(f'order must be non-negative, got {n}')
    if N < MIN_SYMBOL_SAMPLES or N & (N - 1):
        raise ValueError(f'symbol samples must be a power of two >= {MIN_SYMBOL_SAMPLES}, got {N}')
    if K is not None and K < MIN_TRUNCATION:
        raise ValueError(f'truncation must be >= {MIN_TRUNCATION}, got {K}')

    if n == 0:
        logger.debug('building Haar system')
        return SplineSystem(
            order=0, truncation=K or MIN_TRUNCATION, symbol_samples=N,
            scaling_coeffs=np.ones(1), scaling_first=0,
            rho_coeffs=np.ones(1), rho_first=0, truncation_tail=0.0,
        )

    grid = np.arange(N)
    symbol = autocorr_symbol(n, 2.0 * np.pi * grid / N)
    if symbol.min() < SYMBOL_FLOOR:
        raise NumericalBreakdownError(
            f'autocorrelation symbol of order {n} drops to {symbol.min():.3g}'
        )
    doubled = symbol[(2 * grid) % N]
    opposite = symbol[(grid + N // 2) % N]
    d_full = np.fft.ifft(symbol ** -0.5).real
    r_full = np.fft.ifft(np.sqrt(opposite / (doubled * symbol))).real

    tails = _tail_mass(d_full, r_full)
    if K is None:
        below = np.nonzero(tails[MIN_TRUNCATION:] <= TAIL_TARGET)[0]
        if not len(below):
            raise NumericalBreakdownError(
                f'coefficient tail of order {n} never drops below {TAIL_TARGET:g} with N={N}'
            )
        K = MIN_TRUNCATION + int(below[0])
    if K >= N // 2:
        raise ValueError(f'truncation {K} must be below N/2 = {N // 2}')

    ks = np.arange(-K, K + 1)
    d = d_full[ks % N]
    c = (-1) ** n * 2.0 ** -n * r_full[ks % N]
    logger.info('built order-%d system: K=%d, N=%d, tail=%.3g', n, K, N, tails[K])
    return SplineSystem(
        order=n, truncation=K, symbol_samples=N,
        scaling_coeffs=d, scaling_first=-K,
        rho_coeffs=c, rho_first=-K - n,
        truncation_tail=float(tails[K]),
    )


def member(sys, kind, idx):
    """Return a system member as an exact PiecewisePoly.

    Args:
        sys: SplineSystem.
        kind: MemberKind or its string value.
        idx: DyadicIndex; base and scaling kinds ignore ``j``.

    Returns:
        PiecewisePoly: The member under the package's scalings.
    """
    kind = MemberKind(kind)
    if kind is MemberKind.SCALING:
        return sys.scaling_pp
    if kind is MemberKind.WAVELET:
        return sys.wavelet_pp
    if kind is MemberKind.BASE:
        return sys.scaling_pp.shifted(idx.mu)
    if idx.j == -1:
        base = sys.scaling_pp.shifted(idx.mu)
        return base.scaled(np.sqrt(2.0)) if kind is MemberKind.DYADIC else base
    shift = idx.mu if kind is MemberKind.DYADIC else idx.mu / 2.0
    return sys.wavelet_pp.dilate_shift(2.0 ** idx.j, shift)


def eval_member(sys, kind, idx, x):
    """Evaluate a system member at x.

    The argument is transformed before the stored piecewise form is
    evaluated, so psi_{j,2mu} and the oversampled member with index 2mu
    agree exactly.

    Args:
        sys: SplineSystem.
        kind: 'scaling', 'wavelet', 'dyadic', 'oversampled' or 'base'.
        idx: DyadicIndex (ignored by 'scaling' and 'wavelet').
        x: Scalar or array.

    Returns:
        float or numpy.ndarray: Member values.
    """
    kind = MemberKind(kind)
    x = np.asarray(x, dtype=float)
    if kind is MemberKind.SCALING:
        values = sys.scaling_pp(x)
    elif kind is MemberKind.WAVELET:
        values = sys.wavelet_pp(x)
    elif kind is MemberKind.BASE:
        values = sys.scaling_pp(x - idx.mu)
    elif idx.j == -1:
        values = sys.scaling_pp(x - idx.mu)
        if kind is MemberKind.DYADIC:
            values = np.sqrt(2.0) * values
    else:
        shift = idx.mu if kind is MemberKind.DYADIC else idx.mu / 2.0
        values = sys.wavelet_pp(2.0 ** idx.j * x - shift)
    return values


def _pick(sys, which):
    if which in ('wavelet', 'psi'):
        return sys.wavelet_pp
    if which in ('scaling', 'Psi'):
        return sys.scaling_pp
    raise ValueError(f"which must be 'wavelet' or 'scaling', got {which!r}")


def piecewise_coefficients(sys, which, mu, side='left'):
    """Coefficients A^0..A^n of one half-integer piece around mu / 2.

    Args:
        sys: SplineSystem.
        which: 'wavelet' (psi) or 'scaling' (Psi).
        mu: Piece index; the left piece is [(mu - 1) / 2, mu / 2].
        side: 'left' for that piece, 'right' for [mu / 2, (mu + 1) / 2].

    Returns:
        numpy.ndarray: Ascending coefficients in powers of x - mu / 2, the zero
            vector outside the truncation window.
    """
    pp = _pick(sys, which)
    coeffs = pp.taylor(mu / 2.0, side=side)
    out = np.zeros(sys.order + 1)
    out[:len(coeffs)] = coeffs[:sys.order + 1]
    return out


def moments(sys, which, max_power):
    """Exact moments int x^k f(x) dx, k = 0..max_power, of psi or Psi."""
    if max_power > 2 * sys.order + 4:
        raise ValueError(f'max_power must be <= {2 * sys.order + 4}, got {max_power}')
    return _pick(sys, which).moments(max_power)


def antiderivative_rho(sys):
    """Return rho with rho^(n+1)(2x) = psi(x), as sum c_k B_(2n+1)(y - k)."""
    return sys.rho_pp


def decay_fit(samples, abscissae, k0=2.0, floor=1e-12):
    """Fit an exponential envelope C exp(-gamma |x|) to samples.

    The rate comes from a log-linear regression over |x| >= k0, using samples
    above ``floor`` times the largest magnitude. The constant is then raised
    until the envelope dominates every usable sample.

    Args:
        samples: Sample values.
        abscissae: Matching integer or half-integer positions.
        k0: Smallest |x| entering the regression.
        floor: Relative magnitude below which samples count as zero.

    Returns:
        DecayFit: Envelope constants. Samples that vanish exactly beyond their
            last nonzero entry and leave too few points for a regression give
            a compact fit with rate 1.

    Raises:
        DecayFitUnavailable: If fewer than 8 usable samples remain and the
            data is not compactly supported.
    """
    values = np.abs(np.asarray(samples, dtype=float))
    radius = np.abs(np.asarray(abscissae, dtype=float))
    peak = values.max() if values.size else 0.0
    if peak == 0.0:
        return DecayFit(0.0, 1.0, compact=True)

    usable = (values > floor * peak) & (radius >= k0)
    if np.count_nonzero(usable) < 8:
        last = radius[values > 0].max()
        if last < radius.max():
            constant = float(np.max(values * np.exp(radius)))
            return DecayFit(constant, 1.0, compact=True)
        raise DecayFitUnavailable(
            f'only {np.count_nonzero(usable)} usable samples beyond |x| >= {k0:g}'
        )

    slope, _ = np.polyfit(radius[usable], np.log(values[usable]), 1)
    rate = -float(slope)
    significant = values > floor * peak
    constant = float(np.max(values[significant] * np.exp(rate * radius[significant])))
    return DecayFit(constant, rate)


def _system_decay(sys):
    """Joint envelope of psi, Psi and their derivatives below order n."""
    lo = min(sys.scaling_pp.window[0], sys.wavelet_pp.window[0])
    hi = max(sys.scaling_pp.window[1], sys.wavelet_pp.window[1])
    x = np.arange(np.floor(2 * lo) - 2, np.ceil(2 * hi) + 3) / 2.0
    total = np.zeros_like(x)
    for k in range(max(sys.order, 1)):
        total += np.abs(sys.wavelet_pp.derivative(k)(x)) + np.abs(sys.scaling_pp.derivative(k)(x))
    return decay_fit(total, x)


def sequence_decay(sys):
    """Fitted envelopes of the coefficient sequences d and e."""
    d_index = sys.scaling_first + np.arange(len(sys.scaling_coeffs))
    e_index = sys.wavelet_first + np.arange(len(sys.wavelet_coeffs))
    return decay_fit(sys.scaling_coeffs, d_index), decay_fit(sys.wavelet_coeffs, e_index)


def orthonormality_residual(sys, scales=range(-1, 4), shift_window=8):
    """Largest deviation of (psi_{j,mu}, psi_{k,nu}) from 2^-j delta delta.

    Translations run over |mu|, |nu| <= shift_window / 2 so that every pair
    with |mu - nu| <= shift_window is covered on each scale.
    """
    half = shift_window // 2
    members = [
        (j, mu, member(sys, MemberKind.DYADIC, DyadicIndex(j, mu)))
        for j in scales for mu in range(-half, half + 1)
    ]
    worst = 0.0
    for a, (j, mu, left) in enumerate(members):
        for k, nu, right in members[a:]:
            expected = 2.0 ** -j if (j, mu) == (k, nu) else 0.0
            worst = max(worst, abs(spline_inner(left, right) - expected))
    return worst


def smoothness_mismatch(pp, order):
    """Largest one-sided jump of derivatives 0..order at interior knots."""
    knots = pp.knots[1:-1]
    worst = 0.0
    for k in range(order + 1):
        derived = pp.derivative(k)
        jumps = np.abs(derived(knots, side='right') - derived(knots, side='left'))
        worst = max(worst, float(jumps.max()) if jumps.size else 0.0)
    return worst
