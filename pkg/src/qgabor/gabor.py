"""Quaternionic Gabor systems on the lattice alpha Z^2 x beta Z^2.

Coefficients are samples of the windowed transform,

    c[m, n] = sum exp(-2 pi i beta n1 x1) f(x) g(x - alpha m) exp(-2 pi j beta n2 x2) dA,

which is the quaternion inner product (f, M_{beta n} T_{alpha m} g) once the
modulation's right carrier is conjugated onto the left of ``f``.  ``scalar``
mode keeps only the real part, i.e. the real scalar product.

Synthesis follows D_q with the coefficient kept between the two kernels,
exp(2 pi i beta n1 x1) c g(x - alpha m) exp(2 pi j beta n2 x2); for real
coefficients the placement is immaterial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .field import ConfigError, Grid2, QField, translate
from .qft import frequencies, qft_forward
from .quat import left_i_transform, qabs2, right_j_transform

MODES = ("quaternionic", "scalar")
TAIL_WARN = 1e-6


def _as_range(r) -> tuple[int, int]:
    lo, hi = int(r[0]), int(r[1])
    if hi < lo:
        raise ConfigError(f"empty truncation range {r}")
    return lo, hi


def default_m_range(grid: Grid2, alpha: float, axis: int) -> tuple[int, int]:
    """Every distinct periodic translate alpha*m of a window across the domain."""
    lo = (grid.x1_min, grid.x2_min)[axis]
    length = grid.lengths[axis]
    m_lo = math.ceil(lo / alpha - 1e-9)
    m_hi = math.ceil((lo + length) / alpha - 1e-9) - 1
    return m_lo, m_hi


def default_n_range(grid: Grid2, beta: float, axis: int) -> tuple[int, int]:
    """One full alias period of frequencies beta*n when it is whole, else up to Nyquist."""
    d = (grid.dx1, grid.dx2)[axis]
    period = 1.0 / (beta * d)
    p = round(period)
    if abs(period - p) <= 1e-9 * period:
        return -(p // 2), p - p // 2 - 1
    k = int(math.floor(1.0 / (2 * beta * d) + 1e-9))
    return -k, k


@dataclass(frozen=True, eq=False)
class GaborSystem:
    window: QField
    alpha: float
    beta: float
    m_range: tuple = None
    n_range: tuple = None

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigError("lattice parameters must be positive")
        if not self.window.is_real():
            raise ConfigError("Gabor windows must be real-valued")
        if self.window.norm2() == 0.0:
            raise ConfigError("Gabor window must be nonzero")
        grid = self.window.grid
        grid.steps(self.alpha, 0)
        grid.steps(self.alpha, 1)
        m = self.m_range or (default_m_range(grid, self.alpha, 0), default_m_range(grid, self.alpha, 1))
        n = self.n_range or (default_n_range(grid, self.beta, 0), default_n_range(grid, self.beta, 1))
        object.__setattr__(self, "m_range", (_as_range(m[0]), _as_range(m[1])))
        object.__setattr__(self, "n_range", (_as_range(n[0]), _as_range(n[1])))

    @property
    def grid(self) -> Grid2:
        return self.window.grid

    def m_values(self):
        return tuple(np.arange(lo, hi + 1) for lo, hi in self.m_range)

    def n_values(self):
        return tuple(np.arange(lo, hi + 1) for lo, hi in self.n_range)

    def atom(self, m, n) -> QField:
        """The synthesis atom exp(2 pi i beta n1 x1) g(x - alpha m) exp(2 pi j beta n2 x2)."""
        from .field import conj_modulate

        shifted = translate(self.window, (self.alpha * m[0], self.alpha * m[1]))
        return conj_modulate(shifted, (self.beta * n[0], self.beta * n[1]))

    def _kernels(self, sign: float):
        x1, x2 = self.grid.axes()
        n1, n2 = self.n_values()
        k1 = np.exp(sign * 2j * np.pi * self.beta * np.outer(n1, x1))
        k2 = np.exp(sign * 2j * np.pi * self.beta * np.outer(n2, x2))
        return k1, k2


@dataclass(frozen=True, eq=False)
class GaborCoefficients:
    """values[m1, m2, n1, n2] (quaternion in the last axis, or real in scalar mode)."""

    values: np.ndarray
    mode: str
    m_range: tuple
    n_range: tuple
    metadata: dict = field(default_factory=dict)

    def energy(self) -> float:
        if self.mode == "scalar":
            return float(np.sum(self.values**2))
        return float(np.sum(qabs2(self.values)))

    def as_quaternion(self) -> np.ndarray:
        if self.mode == "scalar":
            out = np.zeros(self.values.shape + (4,))
            out[..., 0] = self.values
            return out
        return self.values


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    method: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 <= self.A <= self.B) and not math.isclose(self.A, self.B, rel_tol=1e-12, abs_tol=1e-15):
            raise ValueError(f"frame bounds must satisfy 0 <= A <= B, got A={self.A}, B={self.B}")


def _translates(sys: GaborSystem):
    g = sys.window
    m1s, m2s = sys.m_values()
    for i1, m1 in enumerate(m1s):
        for i2, m2 in enumerate(m2s):
            yield i1, i2, translate(g, (sys.alpha * m1, sys.alpha * m2)).data[..., 0]


def _spectral_tail(prod: np.ndarray, grid: Grid2, sys: GaborSystem) -> float:
    """Energy of a windowed product outside the sampled frequency band, scaled like sum |c|^2."""
    spec = qft_forward(QField(grid, prod))
    w1, w2 = frequencies(spec.grid)
    (lo1, hi1), (lo2, hi2) = sys.n_range
    b = sys.beta
    in1 = (w1 >= b * (lo1 - 0.5)) & (w1 < b * (hi1 + 0.5))
    in2 = (w2 >= b * (lo2 - 0.5)) & (w2 < b * (hi2 + 0.5))
    e = qabs2(spec.data) * spec.grid.cell
    outside = float(np.sum(e) - np.sum(e[np.ix_(in1, in2)]))
    return max(outside, 0.0) / (b * b)


def analysis(f: QField, sys: GaborSystem, mode: str = "quaternionic", estimate_tail: bool = True) -> GaborCoefficients:
    if mode not in MODES:
        raise ConfigError(f"unknown analysis mode {mode!r}")
    if f.grid != sys.grid:
        raise ConfigError("signal and window grids differ")
    k1, k2 = sys._kernels(-1.0)
    m1s, m2s = sys.m_values()
    out = np.zeros((len(m1s), len(m2s), k1.shape[0], k2.shape[0], 4))
    tail = 0.0
    for i1, i2, gm in _translates(sys):
        prod = f.data * gm[..., None]
        c = left_i_transform(k1, prod, axis=0)
        out[i1, i2] = right_j_transform(c, k2, axis=1) * f.grid.cell
        if estimate_tail and np.any(prod):
            tail += _spectral_tail(prod, f.grid, sys)
    meta = {"m_range": sys.m_range, "n_range": sys.n_range, "alpha": sys.alpha, "beta": sys.beta}
    if estimate_tail:
        n2 = f.norm2()
        rel = tail / n2 if n2 > 0 else 0.0
        meta["tail_fraction"] = rel
        if rel > TAIL_WARN:
            meta["warning"] = f"truncation tail estimate {rel:.3g} exceeds {TAIL_WARN:g} of |f|^2"
    values = out[..., 0].copy() if mode == "scalar" else out
    return GaborCoefficients(values, mode, sys.m_range, sys.n_range, meta)


def synthesis(c: GaborCoefficients, sys: GaborSystem) -> QField:
    if (c.m_range, c.n_range) != (sys.m_range, sys.n_range):
        raise ConfigError("coefficient truncation does not match the system")
    k1, k2 = sys._kernels(+1.0)
    # kernels indexed [x, n] for synthesis
    k1, k2 = k1.T, k2.T
    cq = c.as_quaternion()
    acc = np.zeros(sys.grid.shape + (4,))
    for i1, i2, gm in _translates(sys):
        cm = cq[i1, i2]
        if not np.any(cm):
            continue
        h = left_i_transform(k1, cm, axis=0)
        h = right_j_transform(h, k2, axis=1)
        acc += h * gm[..., None]
    return QField(sys.grid, acc)


def frame_apply(f: QField, sys: GaborSystem, mode: str = "quaternionic") -> QField:
    return synthesis(analysis(f, sys, mode, estimate_tail=False), sys)


def rayleigh(f: QField, sys: GaborSystem, mode: str = "quaternionic") -> float:
    return analysis(f, sys, mode, estimate_tail=False).energy() / f.norm2()


def random_probe(grid: Grid2, rng: np.random.Generator, cutoff: float = 0.25) -> QField:
    """Componentwise standard normal samples, low-passed by one QFT round trip.

    ``cutoff`` is a fraction of the Nyquist frequency.
    """
    from .qft import qft_inverse

    raw = QField(grid, rng.standard_normal(grid.shape + (4,)))
    F = qft_forward(raw)
    w1, w2 = frequencies(F.grid)
    ny1, ny2 = 0.5 / grid.dx1, 0.5 / grid.dx2
    keep = (np.abs(w1)[:, None] <= cutoff * ny1) & (np.abs(w2)[None, :] <= cutoff * ny2)
    smooth = qft_inverse(F.with_data(F.data * keep[..., None]))
    # reattach the exact input grid; the round trip can move dx by an ulp
    return QField(grid, smooth.data)


def default_probes(sys: GaborSystem) -> list[QField]:
    from .field import conj_modulate

    g = sys.window
    shifted = translate(g, (sys.alpha, sys.alpha))
    modded = conj_modulate(g, (0.5 * sys.beta, 0.5 * sys.beta)).lmul(np.array([0.0, 0.0, 0.0, 1.0]))
    return [g, shifted, modded]


def empirical_frame_bounds(
    sys: GaborSystem,
    trials: int = 8,
    seed: int = 0,
    probes=None,
    mode: str = "quaternionic",
) -> FrameBounds:
    """Min/max Rayleigh quotient over deterministic probes and seeded random signals."""
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    ratios = [rayleigh(p, sys, mode) for p in default_probes(sys)]
    ratios += [rayleigh(p, sys, mode) for p in (probes or [])]
    for _ in range(trials):
        ratios.append(rayleigh(random_probe(sys.grid, rng), sys, mode))
    return FrameBounds(
        float(min(ratios)),
        float(max(ratios)),
        "empirical",
        {"trials": trials, "seed": seed, "mode": mode, "ratios": ratios,
         "m_range": sys.m_range, "n_range": sys.n_range},
    )
