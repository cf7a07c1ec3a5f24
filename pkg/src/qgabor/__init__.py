"""Quaternionic Fourier, windowed Fourier, Gabor and Zak analysis on sampled planar fields."""
from .field import (ConfigError, Grid2, GridMismatch, QField, QF2Error, WindowSpec, inner_q, inner_sc,
                    modulate, read_field, sample_window, translate, write_field)
from .gabor import FrameBounds, GaborCoefficients, GaborSystem, analysis, empirical_frame_bounds, frame_apply, synthesis
from .qft import qft_forward, qft_inverse, uncertainty
from .quat import Quaternion, qconj, qmul
from .wqft import WqftCoefficients
from .zak import ZakField, zak_grid, zak_inverse
from .density import frame_decision, gaussian_zak_critical_value, optimal_frame_bounds

__version__ = "0.1.0"
