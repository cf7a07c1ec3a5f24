"""Windowed quaternionic Fourier transform on sampled (b, omega) lattices.

    Q_g f(b, w) = integral exp(-2 pi i x1 w1) f(x) g(x - b) exp(-2 pi j x2 w2) dx

By default ``b`` runs over the signal grid and ``w`` over the reciprocal grid
(DC-first order), where each b-slice is one fast QFT of ``f * T_b g``.
Arbitrary ``w`` lattices go through dense kernel matrices instead.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .field import ConfigError, Grid2, QField, conj_modulate, inner_sc, inner_window, translate
from .qft import frequencies, qft_forward, spectrum_grid
from .quat import exp_unit, left_i_transform, qabs, qmul, right_j_transform

MEMORY_GUARD = 2**30


@dataclass(frozen=True, eq=False)
class WqftCoefficients:
    b1: np.ndarray
    b2: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    values: np.ndarray = field(repr=False)
    db: tuple = (1.0, 1.0)
    dw: tuple = (1.0, 1.0)

    @property
    def cell(self) -> float:
        return self.db[0] * self.db[1] * self.dw[0] * self.dw[1]


def _spacing(v: np.ndarray, default: float) -> float:
    if v.size < 2:
        return default
    d = np.diff(np.sort(v))
    step = float(np.min(d))
    if not np.allclose(d, step, rtol=1e-9, atol=0):
        # fast-transform ordering is uniform modulo the period; sorted it must be too
        raise ConfigError("sample lattices must be uniform")
    return step


def b_axes(grid: Grid2, step: int = 1):
    x1, x2 = grid.axes()
    return x1[::step], x2[::step]


def _check_window(g: QField):
    if not g.is_real():
        raise ConfigError("the window must be real-valued")
    if g.norm2() == 0.0:
        raise ConfigError("the window must be nonzero")


def _estimate(nb: int, nw: int) -> int:
    return nb * nw * 4 * 8


def wqft_slices(f: QField, g: QField, b_grid=None, w_grid=None):
    """Yield ``(i1, i2, slice)`` with ``slice[w1, w2, 4]`` for each b-sample."""
    _check_window(g)
    if f.grid != g.grid:
        raise ConfigError("signal and window grids differ")
    b1, b2 = b_grid if b_grid is not None else b_axes(f.grid)
    if w_grid is None:
        k1 = k2 = None
    else:
        x1, x2 = f.grid.axes()
        k1 = np.exp(-2j * np.pi * np.outer(w_grid[0], x1))
        k2 = np.exp(-2j * np.pi * np.outer(w_grid[1], x2))
    for i1, bb1 in enumerate(b1):
        for i2, bb2 in enumerate(b2):
            prod = f.data * translate(g, (bb1, bb2)).data[..., :1]
            if k1 is None:
                out = qft_forward(QField(f.grid, prod)).data
            else:
                out = right_j_transform(left_i_transform(k1, prod, 0), k2, 1) * f.grid.cell
            yield i1, i2, out


def wqft(f: QField, g: QField, b_grid=None, w_grid=None) -> WqftCoefficients:
    b1, b2 = (np.asarray(v, dtype=float) for v in (b_grid if b_grid is not None else b_axes(f.grid)))
    if w_grid is None:
        w1, w2 = frequencies(spectrum_grid(f.grid))
    else:
        w1, w2 = (np.asarray(v, dtype=float) for v in w_grid)
    need = _estimate(b1.size * b2.size, w1.size * w2.size)
    if need > MEMORY_GUARD:
        raise MemoryError(f"coefficients need {need / 2**30:.1f} GiB; stream with wqft_slices()")
    values = np.zeros((b1.size, b2.size, w1.size, w2.size, 4))
    for i1, i2, sl in wqft_slices(f, g, (b1, b2), w_grid):
        values[i1, i2] = sl
    L1, L2 = f.grid.lengths
    db = (_spacing(b1, f.grid.dx1), _spacing(b2, f.grid.dx2))
    dw = (_spacing(w1, 1.0 / L1), _spacing(w2, 1.0 / L2))
    return WqftCoefficients(b1, b2, w1, w2, values, db, dw)


def wqft_point(f: QField, g: QField, b, omega) -> np.ndarray:
    """Inner-product form (f, M_omega T_b g) with carrier semantics."""
    return inner_window(f, translate(g, b), omega)


def wqft_direct(f: QField, g: QField, b, omega) -> np.ndarray:
    """Direct kernel sum of the defining integral, one sample at a time."""
    x1, x2 = f.grid.coords()
    tb = g.data[..., 0]
    tb = np.roll(tb, (int(round(b[0] / f.grid.dx1)), int(round(b[1] / f.grid.dx2))), axis=(0, 1))
    acc = np.zeros(4)
    left = exp_unit(-2 * np.pi * x1 * omega[0], "i")
    right = exp_unit(-2 * np.pi * x2 * omega[1], "j")
    for a in range(f.grid.n1):
        acc += np.sum(qmul(qmul(left[a], f.data[a] * tb[a][:, None]), right[a]), axis=0)
    return acc * f.grid.cell


def wqft_reconstruct(coeffs: WqftCoefficients, g: QField) -> QField:
    """(1/|g|^2) sum_b sum_w exp(2 pi i x1 w1) Q(b, w) g(x - b) exp(2 pi j x2 w2) dw db."""
    _check_window(g)
    grid = g.grid
    x1, x2 = grid.axes()
    k1 = np.exp(2j * np.pi * np.outer(x1, coeffs.w1))
    k2 = np.exp(2j * np.pi * np.outer(x2, coeffs.w2))
    acc = np.zeros(grid.shape + (4,))
    for i1, bb1 in enumerate(coeffs.b1):
        for i2, bb2 in enumerate(coeffs.b2):
            q = coeffs.values[i1, i2]
            if not np.any(q):
                continue
            h = right_j_transform(left_i_transform(k1, q, 0), k2, 1)
            acc += h * translate(g, (bb1, bb2)).data[..., :1]
    acc *= coeffs.cell / g.norm2()
    return QField(grid, acc)


def orthogonality_check(f: QField, h: QField, g: QField, b_grid=None, w_grid=None) -> dict:
    """<Q_g f, Q_g h> over the sampled lattice against |g|^2 <f, h>."""
    qf = wqft(f, g, b_grid, w_grid)
    qh = qf if h is f else wqft(h, g, b_grid, w_grid)
    lhs = float(np.sum(qf.values * qh.values) * qf.cell)
    rhs = g.norm2() * inner_sc(f, h)
    scale = max(abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "rel_err": abs(lhs - rhs) / scale if scale else 0.0}


def covariance_check(f: QField, g: QField, x0, w0, b_points, w_points) -> dict:
    """Max defects of the translation and modulation covariance identities.

    Translation: Q_g(T_x0 f)(b, w) = exp(-2 pi i x01 w1) Q_g f(b - x0, w) exp(-2 pi j x02 w2).
    Modulation:  Q_g(conj(M_{-w0}) f)(b, w) = Q_g f(b, w - w0).
    """
    tf = translate(f, x0)
    mf = conj_modulate(f, w0)
    dt = dm = 0.0
    for b in b_points:
        for w in w_points:
            lhs = wqft_point(tf, g, b, w)
            inner = wqft_point(f, g, (b[0] - x0[0], b[1] - x0[1]), w)
            rhs = qmul(qmul(exp_unit(-2 * np.pi * x0[0] * w[0], "i"), inner),
                       exp_unit(-2 * np.pi * x0[1] * w[1], "j"))
            dt = max(dt, float(qabs(lhs - rhs)))
            lhs = wqft_point(mf, g, b, w)
            rhs = wqft_point(f, g, b, (w[0] - w0[0], w[1] - w0[1]))
            dm = max(dm, float(qabs(lhs - rhs)))
    return {"max_defect_translation": dt, "max_defect_modulation": dm}


def write_slice_csv(path, coeffs: WqftCoefficients, i1: int, i2: int) -> None:
    """One b-slice: columns w1, w2, w, x, y, z."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["ω1", "ω2", "w", "x", "y", "z"])
        for a, w1 in enumerate(coeffs.w1):
            for b, w2 in enumerate(coeffs.w2):
                wr.writerow([repr(float(w1)), repr(float(w2))] + [repr(float(v)) for v in coeffs.values[i1, i2, a, b]])
