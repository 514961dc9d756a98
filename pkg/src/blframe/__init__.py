"""
BL Frame - Spline Wavelet Frames Package

This package constructs Battle-Lemarie spline wavelet systems, computes
oversampled frame coefficients of test functions and evaluates Besov,
Triebel-Lizorkin and endpoint Sobolev norms from them, next to an independent
Littlewood-Paley reference.
"""

from .analysis import FrameCoefficients, basis_coefficients, frame_coefficients
from .blsystem import SplineSystem, build_system
from .errors import BLFrameError, OutOfRangeError
from .norms import NormParams, Space, frame_norm, seq_norm, validate_range

__version__ = '0.3.0'

__all__ = [
    'BLFrameError', 'FrameCoefficients', 'NormParams', 'OutOfRangeError', 'Space',
    'SplineSystem', 'basis_coefficients', 'build_system', 'frame_coefficients',
    'frame_norm', 'seq_norm', 'validate_range',
]
