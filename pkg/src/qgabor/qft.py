"""Discrete two-sided quaternionic Fourier transform.

The forward transform discretizes

    F(w) = integral exp(-2 pi i x1 w1) f(x) exp(-2 pi j x2 w2) dx

on the periodic grid, with the i-kernel on the left and the j-kernel on the
right.  Spectra use fast-transform ordering (DC first, then positive, then
negative frequencies).  A spectrum's grid has spacings ``1/L1, 1/L2`` and its
``x1_min, x2_min`` slots hold the *spatial* origin the phases refer to; the
inverse needs it to land back on the original samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import Grid2, QField
from .quat import (
    exp_unit,
    merge_left_i,
    merge_right_j,
    qabs2,
    qmul,
    split_left_i,
    split_right_j,
)

ORACLE_MAX_SAMPLES = 64 * 64
HEISENBERG_BOUND = 1.0 / (4.0 * math.pi)


def spectrum_grid(grid: Grid2) -> Grid2:
    L1, L2 = grid.lengths
    return Grid2(grid.n1, grid.n2, grid.x1_min, grid.x2_min, 1.0 / L1, 1.0 / L2)


def signal_grid(spec: Grid2) -> Grid2:
    return Grid2(
        spec.n1, spec.n2, spec.x1_min, spec.x2_min, 1.0 / (spec.n1 * spec.dx1), 1.0 / (spec.n2 * spec.dx2)
    )


def frequencies(spec: Grid2) -> tuple[np.ndarray, np.ndarray]:
    """Signed sample frequencies of a spectrum grid, in storage order."""
    return (
        np.fft.fftfreq(spec.n1) * spec.n1 * spec.dx1,
        np.fft.fftfreq(spec.n2) * spec.n2 * spec.dx2,
    )


def centered(F: QField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reorder a spectrum so frequencies increase along both axes (for reports)."""
    w1, w2 = frequencies(F.grid)
    return np.fft.fftshift(w1), np.fft.fftshift(w2), np.fft.fftshift(F.data, axes=(0, 1))


def _apply_left_i(q, axis, inverse):
    v1, v2 = split_left_i(q)
    tr = np.fft.ifft if inverse else np.fft.fft
    norm = "forward" if inverse else "backward"
    return merge_left_i(tr(v1, axis=axis, norm=norm), tr(v2, axis=axis, norm=norm))


def _apply_right_j(q, axis, inverse):
    u1, u2 = split_right_j(q)
    tr = np.fft.ifft if inverse else np.fft.fft
    norm = "forward" if inverse else "backward"
    return merge_right_j(tr(u1, axis=axis, norm=norm), tr(u2, axis=axis, norm=norm))


def _origin_phases(spec: Grid2, sign: float):
    w1, w2 = frequencies(spec)
    left = exp_unit(sign * 2 * np.pi * spec.x1_min * w1, "i")[:, None, :]
    right = exp_unit(sign * 2 * np.pi * spec.x2_min * w2, "j")[None, :, :]
    return left, right


def qft_forward(f: QField) -> QField:
    grid = f.grid
    spec = spectrum_grid(grid)
    # the left i-pass and right j-pass act on opposite sides, so they commute
    q = _apply_left_i(f.data, 0, inverse=False)
    q = _apply_right_j(q, 1, inverse=False)
    left, right = _origin_phases(spec, -1.0)
    q = qmul(qmul(left, q), right) * grid.cell
    return QField(spec, q)


def qft_inverse(F: QField) -> QField:
    spec = F.grid
    left, right = _origin_phases(spec, +1.0)
    q = qmul(qmul(left, F.data), right)
    q = _apply_left_i(q, 0, inverse=True)
    q = _apply_right_j(q, 1, inverse=True)
    return QField(signal_grid(spec), q * spec.cell)


def qft_oracle(f: QField, allow_large: bool = False) -> QField:
    """Direct O(N^4) evaluation with quaternion products only."""
    grid = f.grid
    if grid.n1 * grid.n2 > ORACLE_MAX_SAMPLES and not allow_large:
        raise ValueError(
            f"oracle refuses {grid.n1}x{grid.n2} fields (limit {ORACLE_MAX_SAMPLES} samples); "
            "pass allow_large=True to override"
        )
    spec = spectrum_grid(grid)
    x1, x2 = grid.axes()
    w1, w2 = frequencies(spec)
    out = np.zeros(grid.shape + (4,))
    for u in range(grid.n1):
        left = exp_unit(-2 * np.pi * x1 * w1[u], "i")[:, None, :]
        lf = qmul(left, f.data)
        for v in range(grid.n2):
            right = exp_unit(-2 * np.pi * x2 * w2[v], "j")[None, :, :]
            out[u, v] = np.sum(qmul(lf, right), axis=(0, 1))
    return QField(spec, out * grid.cell)


@dataclass(frozen=True)
class UncertaintyReport:
    delta_x: tuple[float, float]
    delta_omega: tuple[float, float]
    products: tuple[float, float]
    bound: float = HEISENBERG_BOUND


def boundary_level(f: QField) -> float:
    """Largest modulus on the outer ring of samples, relative to the peak."""
    a = np.sqrt(qabs2(f.data))
    peak = float(a.max())
    if peak == 0.0:
        return 0.0
    ring = max(a[0].max(), a[-1].max(), a[:, 0].max(), a[:, -1].max())
    return float(ring) / peak


def uncertainty(f: QField, decay_tol: float = 1e-10) -> UncertaintyReport:
    n2 = f.norm2()
    if n2 == 0.0:
        raise ValueError("uncertainty of the zero field is undefined")
    if boundary_level(f) > decay_tol:
        raise ValueError(f"signal does not decay below {decay_tol} at the domain boundary")
    F = qft_forward(f)
    # the spectrum's outer ring sits at the Nyquist frequencies
    a = np.sqrt(qabs2(F.data))
    nyq = max(a[F.grid.n1 // 2].max(), a[:, F.grid.n2 // 2].max()) / a.max()
    if nyq > decay_tol:
        raise ValueError(f"spectrum does not decay below {decay_tol} at the band edge")

    x1, x2 = f.grid.coords()
    p = qabs2(f.data) * f.grid.cell
    dx = (math.sqrt(np.sum(p * x1**2) / n2), math.sqrt(np.sum(p * x2**2) / n2))

    w1, w2 = frequencies(F.grid)
    W1, W2 = np.meshgrid(w1, w2, indexing="ij")
    P = qabs2(F.data) * F.grid.cell
    N2 = float(np.sum(P))
    dw = (math.sqrt(np.sum(P * W1**2) / N2), math.sqrt(np.sum(P * W2**2) / N2))
    return UncertaintyReport(dx, dw, (dx[0] * dw[0], dx[1] * dw[1]))
