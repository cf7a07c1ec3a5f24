"""Quaternionic Zak transform

    Z f(x, w) = sum_m exp(2 pi j alpha m2 w2) f(x - alpha m) exp(2 pi i alpha m1 w1)

evaluated on product grids over Q_alpha x Q_{1/alpha}.  The j-exponential
multiplies from the left and the i-exponential from the right.

Inputs may be analytic windows (:class:`WindowSpec`, evaluable anywhere) or
sampled :class:`QField` objects (zero outside their domain; ``x`` must land on
grid points, no interpolation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .field import ConfigError, Grid2, QField, WindowSpec, inner_sc, sample_window
from .quat import (
    exp_unit,
    merge_left_j,
    merge_right_i,
    qabs,
    qabs2,
    qconj,
    qmul,
    split_left_j,
    split_right_i,
)

DEFAULT_TRUNC = 10
MEMORY_GUARD = 2**30


def _sampled_evaluator(f: QField):
    g = f.grid

    def ev(x1, x2):
        a = (np.asarray(x1) - g.x1_min) / g.dx1
        b = (np.asarray(x2) - g.x2_min) / g.dx2
        ai, bi = np.rint(a), np.rint(b)
        if np.max(np.abs(a - ai), initial=0) > 1e-6 or np.max(np.abs(b - bi), initial=0) > 1e-6:
            raise ConfigError("sampled fields can only be evaluated at grid points")
        ai, bi = ai.astype(int), bi.astype(int)
        inside = (ai >= 0) & (ai < g.n1) & (bi >= 0) & (bi < g.n2)
        out = np.zeros(np.broadcast(ai, bi).shape + (4,))
        ai, bi = np.broadcast_arrays(ai, bi)
        out[inside] = f.data[ai[inside], bi[inside]]
        return out

    return ev


def evaluator(f):
    """Return ``ev(x1, x2) -> (..., 4)`` for a window spec, sampled field or callable."""
    if isinstance(f, WindowSpec):
        return f.evaluate
    if isinstance(f, QField):
        return _sampled_evaluator(f)
    if callable(f):
        return f
    raise TypeError(f"cannot evaluate {type(f).__name__}")


def covering_trunc(f, alpha: float) -> int:
    """Smallest symmetric truncation reaching every tile of a sampled field's domain."""
    if not isinstance(f, QField):
        return DEFAULT_TRUNC
    g = f.grid
    reach = max(abs(g.x1_min), abs(g.x2_min), abs(g.x1_min + g.lengths[0]), abs(g.x2_min + g.lengths[1]))
    return int(math.ceil(reach / alpha)) + 1


def zak_values(f, alpha, x1, x2, w1, w2, m1=None, m2=None) -> np.ndarray:
    """Z f on the product grid ``x1 x x2 x w1 x w2``; shape ``(r1, r2, s1, s2, 4)``.

    ``m1``, ``m2`` are the summation indices along each axis; the default is
    the symmetric range of :data:`DEFAULT_TRUNC`.
    """
    if not alpha > 0:
        raise ConfigError("alpha must be positive")
    ev = evaluator(f)
    x1, x2, w1, w2 = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (x1, x2, w1, w2))
    if m1 is None:
        m1 = np.arange(-DEFAULT_TRUNC, DEFAULT_TRUNC + 1)
    if m2 is None:
        m2 = m1
    m1 = np.asarray(m1)
    m2 = np.asarray(m2)
    est = 8 * 4 * (x1.size * x2.size * m1.size * m2.size + x1.size * x2.size * m2.size * w1.size
                   + x1.size * x2.size * w1.size * w2.size)
    if est > MEMORY_GUARD:
        raise MemoryError(f"Zak evaluation would need about {est / 2**30:.1f} GiB; use smaller grids")
    X1 = x1[:, None, None, None] - alpha * m1[None, None, :, None]
    X2 = x2[None, :, None, None] - alpha * m2[None, None, None, :]
    F = ev(X1, X2)  # (r1, r2, M1, M2, 4)
    # right i-exponentials, summed over m1
    v1, v2 = split_right_i(F)
    e1 = np.exp(2j * np.pi * alpha * np.outer(m1, w1))  # (M1, s1)
    v1 = np.einsum("abkl,ks->abls", v1, e1)
    v2 = np.einsum("abkl,ks->abls", v2, e1)
    G = merge_right_i(v1, v2)  # (r1, r2, M2, s1, 4)
    # left j-exponentials, summed over m2
    u1, u2 = split_left_j(G)
    e2 = np.exp(2j * np.pi * alpha * np.outer(m2, w2))  # (M2, s2)
    u1 = np.einsum("ablc,lt->abct", u1, e2)
    u2 = np.einsum("ablc,lt->abct", u2, e2)
    return merge_left_j(u1, u2)


def gaussian_tail_bound(alpha: float, x, M: int) -> float:
    """Bound on the Zak terms of exp(-pi|x|^2) left out by the range |m_k| <= M."""
    def sums(t):
        m = np.arange(-M - 60, M + 61)
        terms = np.exp(-np.pi * (t - alpha * m) ** 2)
        inner = np.abs(m) <= M
        return float(terms[inner].sum()), float(terms[~inner].sum())

    i1, o1 = sums(float(x[0]))
    i2, o2 = sums(float(x[1]))
    # (i1 + o1)(i2 + o2) - i1 i2, expanded to avoid cancellation
    return o1 * (i2 + o2) + i1 * o2


def zak_point(f, alpha: float, x, omega, M: int = DEFAULT_TRUNC, m1=None, m2=None) -> np.ndarray:
    if m1 is None:
        m1 = np.arange(-M, M + 1)
    if m2 is None:
        m2 = m1
    return zak_values(f, alpha, [x[0]], [x[1]], [omega[0]], [omega[1]], m1, m2)[0, 0, 0, 0]


@dataclass(frozen=True, eq=False)
class ZakField:
    alpha: float
    x1: np.ndarray
    x2: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    values: np.ndarray = field(repr=False)
    trunc: int
    tail: float = float("nan")

    @property
    def dx(self) -> tuple[float, float]:
        return (self.alpha / self.x1.size, self.alpha / self.x2.size)

    @property
    def dw(self) -> tuple[float, float]:
        return (1.0 / (self.alpha * self.w1.size), 1.0 / (self.alpha * self.w2.size))

    @property
    def cell(self) -> float:
        (a, b), (c, d) = self.dx, self.dw
        return a * b * c * d

    def abs2(self) -> np.ndarray:
        return qabs2(self.values)


def cube_axes(alpha: float, r: int, s: int):
    """Uniform left-endpoint samples of [0, alpha) and [0, 1/alpha)."""
    return np.arange(r) * (alpha / r), np.arange(s) / (s * alpha)


def tile_axes(grid: Grid2, alpha: float):
    """Grid coordinates lying in the fundamental tile [0, alpha)^2."""
    grid.steps(alpha, 0)
    grid.steps(alpha, 1)
    x1, x2 = grid.axes()
    eps = 1e-9 * alpha
    t1 = x1[(x1 >= -eps) & (x1 < alpha - eps)]
    t2 = x2[(x2 >= -eps) & (x2 < alpha - eps)]
    if t1.size == 0 or t2.size == 0:
        raise ConfigError("grid does not contain the fundamental tile [0, alpha)^2")
    return t1, t2


def zak_grid(f, alpha: float, r: int = 32, s: int = 32, M: int | None = None) -> ZakField:
    """Zak transform on Q_alpha x Q_{1/alpha}.

    For sampled fields the x-samples are the grid points of the fundamental
    tile (``r`` is ignored) and the default truncation covers the whole domain.
    """
    if r < 2 or s < 2:
        raise ConfigError("Zak grids need at least 2 samples per axis")
    if isinstance(f, QField):
        x1, x2 = tile_axes(f.grid, alpha)
    else:
        x1, _ = cube_axes(alpha, r, s)
        x2 = x1
    _, w = cube_axes(alpha, r, s)
    if M is None:
        M = covering_trunc(f, alpha)
    m = np.arange(-M, M + 1)
    values = zak_values(f, alpha, x1, x2, w, w, m, m)
    tail = float("nan")
    if isinstance(f, WindowSpec) and f.kind == "gaussian":
        tail = max(gaussian_tail_bound(alpha, (a, b), M) for a in (x1[0], x1[-1]) for b in (x2[0], x2[-1]))
    elif isinstance(f, WindowSpec) or isinstance(f, QField):
        tail = 0.0 if _finite_support_covered(f, alpha, M) else float("nan")
    return ZakField(alpha, x1, x2, w, w.copy(), values, M, tail)


def _finite_support_covered(f, alpha, M) -> bool:
    if isinstance(f, QField):
        return M >= covering_trunc(f, alpha) - 1
    if f.kind == "box":
        return M >= 1
    if f.kind == "hat":
        return M >= math.ceil(f.alpha / alpha) + 1
    return False


def quasiperiodicity_check(f, alpha: float, x, omega, M: int = DEFAULT_TRUNC) -> dict:
    m = np.arange(-M, M + 1)
    z = zak_point(f, alpha, x, omega, m1=m, m2=m)
    z_w = zak_point(f, alpha, x, (omega[0] + 1 / alpha, omega[1] + 1 / alpha), m1=m, m2=m)
    # shifting x by alpha re-indexes the sum; shift the window so the same terms appear
    z_x = zak_point(f, alpha, (x[0] + alpha, x[1] + alpha), omega, m1=m + 1, m2=m + 1)
    left = exp_unit(2 * np.pi * alpha * omega[1], "j")
    right = exp_unit(2 * np.pi * alpha * omega[0], "i")
    expected = qmul(qmul(left, z), right)
    return {
        "defect_omega": float(qabs(z_w - z)),
        "defect_x": float(qabs(z_x - expected)),
    }


def zak_inverse(Z: ZakField) -> QField:
    """alpha^2 times the omega Riemann sum, giving f on the x-samples of Q_alpha."""
    vals = Z.alpha**2 * np.sum(Z.values, axis=(2, 3)) * Z.dw[0] * Z.dw[1]
    d1 = Z.x1[1] - Z.x1[0] if Z.x1.size > 1 else Z.alpha
    d2 = Z.x2[1] - Z.x2[0] if Z.x2.size > 1 else Z.alpha
    grid = Grid2(Z.x1.size, Z.x2.size, float(Z.x1[0]), float(Z.x2[0]), float(d1), float(d2))
    return QField(grid, vals)


def zak_synthesize(values: np.ndarray, alpha: float, grid: Grid2) -> QField:
    """Inverse of the discrete Zak transform of a field on ``grid``.

    ``values`` has shape ``(p1, p2, K1, K2, 4)``: x over the tile samples and
    omega over ``k / (K alpha)`` with ``K`` the number of tiles per axis.
    Uses f(x - alpha m) = alpha^2 sum_w exp(-2 pi j alpha m2 w2) Z(x, w) exp(-2 pi i alpha m1 w1) dw.
    """
    t1, t2 = tile_axes(grid, alpha)
    K1 = grid.steps(grid.lengths[0], 0) // t1.size
    K2 = grid.steps(grid.lengths[1], 1) // t2.size
    if values.shape != (t1.size, t2.size, K1, K2, 4):
        raise ConfigError(f"expected Zak samples of shape {(t1.size, t2.size, K1, K2, 4)}")
    w1 = np.arange(K1) / (K1 * alpha)
    w2 = np.arange(K2) / (K2 * alpha)
    mlo1 = int(round(grid.x1_min / alpha))
    mlo2 = int(round(grid.x2_min / alpha))
    tiles1 = mlo1 + np.arange(K1)
    tiles2 = mlo2 + np.arange(K2)
    # f(x + alpha t) for tile t corresponds to m = -t
    e1 = np.exp(2j * np.pi * alpha * np.outer(w1, tiles1))  # exp(-2 pi i alpha m w) with m = -t
    e2 = np.exp(2j * np.pi * alpha * np.outer(w2, tiles2))
    v1, v2 = split_right_i(values)
    v1 = np.einsum("abks,kt->abts", v1, e1)
    v2 = np.einsum("abks,kt->abts", v2, e1)
    G = merge_right_i(v1, v2)  # (p1, p2, T1, K2, 4)
    u1, u2 = split_left_j(G)
    u1 = np.einsum("abtk,ku->abtu", u1, e2)
    u2 = np.einsum("abtk,ku->abtu", u2, e2)
    H = merge_left_j(u1, u2) * (alpha**2 / (K1 * alpha * K2 * alpha))
    # reassemble tiles: sample index = tile offset * p + in-tile index
    out = np.zeros(grid.shape + (4,))
    p1, p2 = t1.size, t2.size
    o1 = grid.steps(t1[0] - grid.x1_min, 0) - (0 - mlo1) * p1
    o2 = grid.steps(t2[0] - grid.x2_min, 1) - (0 - mlo2) * p2
    for a in range(K1):
        for b in range(K2):
            s1 = (o1 + a * p1) % grid.n1
            s2 = (o2 + b * p2) % grid.n2
            out[s1:s1 + p1, s2:s2 + p2] = H[:, :, a, b]
    return QField(grid, out)


def discrete_zak(f: QField, alpha: float) -> ZakField:
    """Exact discrete Zak transform: tile samples x omega = k/(K alpha), all tiles summed."""
    t1, t2 = tile_axes(f.grid, alpha)
    K1 = f.grid.n1 // t1.size
    K2 = f.grid.n2 // t2.size
    w1 = np.arange(K1) / (K1 * alpha)
    w2 = np.arange(K2) / (K2 * alpha)
    M = covering_trunc(f, alpha)
    m = np.arange(-M, M + 1)
    values = zak_values(f, alpha, t1, t2, w1, w2, m, m)
    return ZakField(alpha, t1, t2, w1, w2, values, M, 0.0)


def zak_mt_window(g, alpha: float, k, n, x, omega, M: int = DEFAULT_TRUNC) -> np.ndarray:
    """Closed form of Z(M_{k/alpha} T_{alpha n} g)(x, omega) for a real window g."""
    z = zak_point(g, alpha, x, omega, M)
    left = qmul(
        exp_unit(-2 * np.pi * alpha * n[1] * omega[1], "j"),
        exp_unit(2 * np.pi * k[1] * x[1] / alpha, "j"),
    )
    right = qmul(
        exp_unit(2 * np.pi * k[0] * x[0] / alpha, "i"),
        exp_unit(-2 * np.pi * alpha * n[0] * omega[0], "i"),
    )
    return qmul(qmul(left, z), right)


def modulated_translate(g, alpha: float, k, n):
    """Evaluator of M_{k/alpha} T_{alpha n} g, modulation taken pointwise."""
    ev = evaluator(g)

    def h(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        v = ev(x1 - alpha * n[0], x2 - alpha * n[1])
        left = exp_unit(2 * np.pi * k[1] * x2 / alpha, "j")
        right = exp_unit(2 * np.pi * k[0] * x1 / alpha, "i")
        return qmul(qmul(left, v), right)

    return h


def _as_field(f, grid: Grid2 | None) -> QField:
    if isinstance(f, QField):
        return f
    if grid is None:
        raise ConfigError("analytic inputs need a sampling grid for the signal-side inner product")
    return sample_window(f, grid)


def zak_parseval_check(phi, psi, alpha: float, r: int = 32, s: int = 32, M: int | None = None,
                       grid: Grid2 | None = None) -> dict:
    """<Z phi, Z psi> on the cube against alpha^-2 <phi, psi>."""
    zp = zak_grid(phi, alpha, r, s, M)
    zq = zp if psi is phi else zak_grid(psi, alpha, r, s, M)
    lhs = float(np.sum(zp.values * zq.values) * zp.cell)
    rhs = inner_sc(_as_field(phi, grid), _as_field(psi, grid)) / alpha**2
    return _report(lhs, rhs, r=zp.x1.size, s=s, M=zp.trunc)


def sum_identity_check(f, g, alpha: float, K: int, s: int = 16, r: int = 32, M: int | None = None,
                       grid: Grid2 | None = None, mode: str = "quaternionic") -> dict:
    """Sum over |k|,|n| <= K of |<f, M_{k/alpha} T_{alpha n} g>|^2 against alpha^4 |Z f conj(Z g)|^2."""
    from .gabor import GaborSystem, analysis

    fs = _as_field(f, grid)
    gs = _as_field(g, grid if grid is not None else fs.grid)
    sys = GaborSystem(gs, alpha, 1.0 / alpha, ((-K, K), (-K, K)), ((-K, K), (-K, K)))
    lhs = analysis(fs, sys, mode, estimate_tail=False).energy()
    zf = zak_grid(f, alpha, r, s, M)
    zg = zak_grid(g, alpha, r, s, M)
    prod = qmul(zf.values, qconj(zg.values))
    rhs = float(alpha**4 * np.sum(qabs2(prod)) * zf.cell)
    return _report(lhs, rhs, K=K, r=zf.x1.size, s=s, M=zf.trunc, mode=mode)


def _report(lhs, rhs, **meta) -> dict:
    scale = max(abs(rhs), abs(lhs))
    rel = abs(lhs - rhs) / scale if scale > 0 else 0.0
    return {"lhs": lhs, "rhs": rhs, "rel_err": rel, **meta}


def zak_slice(Z: ZakField, a1: int, a2: int):
    """Rows (w1, w2, |Z|^2) with x fixed at sample indices ``(a1, a2)``."""
    W1, W2 = np.meshgrid(Z.w1, Z.w2, indexing="ij")
    return np.column_stack([W1.ravel(), W2.ravel(), qabs2(Z.values[a1, a2]).ravel()])
