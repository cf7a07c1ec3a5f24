"""Sampled quaternion-valued signals on uniform 2-D grids.

Fields live on a periodic grid: index arithmetic wraps modulo ``(n1, n2)``
and integrals are plain Riemann sums with weight ``dx1 * dx2``.
"""
from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .quat import exp_unit, qabs, qabs2, qconj, qmul

_TILE_RTOL = 1e-9


class GridMismatch(ValueError):
    pass


class ConfigError(ValueError):
    pass


class QF2Error(ValueError):
    pass


@dataclass(frozen=True)
class Grid2:
    n1: int
    n2: int
    x1_min: float
    x2_min: float
    dx1: float
    dx2: float

    def __post_init__(self):
        if self.n1 <= 0 or self.n2 <= 0:
            raise ConfigError("grid sample counts must be positive")
        if not (self.dx1 > 0 and self.dx2 > 0):
            raise ConfigError("grid spacings must be positive")

    @classmethod
    def square(cls, n: int, lo: float, hi: float) -> "Grid2":
        """``n`` x ``n`` samples covering the half-open square ``[lo, hi)^2``."""
        d = (hi - lo) / n
        return cls(n, n, float(lo), float(lo), d, d)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def lengths(self) -> tuple[float, float]:
        return (self.n1 * self.dx1, self.n2 * self.dx2)

    @property
    def cell(self) -> float:
        return self.dx1 * self.dx2

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            self.x1_min + np.arange(self.n1) * self.dx1,
            self.x2_min + np.arange(self.n2) * self.dx2,
        )

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        a1, a2 = self.axes()
        return np.meshgrid(a1, a2, indexing="ij")

    def steps(self, length: float, axis: int) -> int:
        """Number of samples spanning ``length`` along ``axis``; raises if not integral."""
        d = (self.dx1, self.dx2)[axis]
        k = length / d
        if abs(k - round(k)) > _TILE_RTOL * max(1.0, abs(k)):
            raise ConfigError(f"length {length} is not a multiple of spacing {d}")
        return int(round(k))


@dataclass(frozen=True, eq=False)
class QField:
    """Quaternion samples ``data[a, b] = f(x1_min + a dx1, x2_min + b dx2)``."""

    grid: Grid2
    data: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.shape != (self.grid.n1, self.grid.n2, 4):
            raise ConfigError(
                f"data shape {data.shape} does not match grid {(self.grid.n1, self.grid.n2, 4)}"
            )
        if not np.all(np.isfinite(data)):
            raise ConfigError("field samples must be finite")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def from_real(cls, grid: Grid2, values) -> "QField":
        data = np.zeros(grid.shape + (4,))
        data[..., 0] = values
        return cls(grid, data)

    @classmethod
    def zeros(cls, grid: Grid2) -> "QField":
        return cls(grid, np.zeros(grid.shape + (4,)))

    def with_data(self, data) -> "QField":
        return QField(self.grid, data)

    def __add__(self, other: "QField") -> "QField":
        _check_same(self, other)
        return self.with_data(self.data + other.data)

    def __sub__(self, other: "QField") -> "QField":
        _check_same(self, other)
        return self.with_data(self.data - other.data)

    def scale(self, s: float) -> "QField":
        return self.with_data(self.data * s)

    def lmul(self, lam) -> "QField":
        """Pointwise ``lam * f`` for a quaternion or a field-shaped quaternion array."""
        return self.with_data(qmul(np.asarray(lam, dtype=float), self.data))

    def rmul(self, lam) -> "QField":
        return self.with_data(qmul(self.data, np.asarray(lam, dtype=float)))

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.data[..., 1:]) <= tol))

    def norm2(self) -> float:
        return float(np.sum(qabs2(self.data)) * self.grid.cell)

    def norm(self) -> float:
        return math.sqrt(self.norm2())


def _check_same(f: QField, g: QField):
    if f.grid != g.grid:
        raise GridMismatch(f"grid mismatch: {f.grid} vs {g.grid}")


# -- windows -----------------------------------------------------------------

WINDOW_KINDS = ("gaussian", "box", "hat")


@dataclass(frozen=True)
class WindowSpec:
    """A real analytic window.

    ``gaussian``: exp(-pi |x|^2).
    ``box``: height ``1/alpha`` on the half-open square ``[0, alpha)^2`` (unit L2 norm).
    ``hat``: tensor triangle ``(1 - |x1|/alpha)_+ (1 - |x2|/alpha)_+``.
    """

    kind: str = "gaussian"
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ConfigError(f"unknown window kind {self.kind!r}; expected one of {WINDOW_KINDS}")
        if not self.alpha > 0:
            raise ConfigError("window parameter alpha must be positive")

    def factors(self, x1, x2):
        """The two 1-D factors; every cataloged window is separable."""
        return self.factor(x1), self.factor(x2)

    def factor(self, t):
        t = np.asarray(t, dtype=float)
        a = self.alpha
        if self.kind == "gaussian":
            return np.exp(-np.pi * t * t)
        if self.kind == "box":
            return np.where((t >= 0.0) & (t < a), 1.0 / math.sqrt(a), 0.0)
        return np.clip(1.0 - np.abs(t) / a, 0.0, None)

    def __call__(self, x1, x2) -> np.ndarray:
        f1, f2 = self.factors(x1, x2)
        return f1 * f2

    def evaluate(self, x1, x2) -> np.ndarray:
        """Quaternion-valued evaluation (trailing axis of 4)."""
        v = self(x1, x2)
        out = np.zeros(np.shape(v) + (4,))
        out[..., 0] = v
        return out


def sample_window(spec: WindowSpec, grid: Grid2) -> QField:
    x1, x2 = grid.coords()
    return QField.from_real(grid, spec(x1, x2))


# -- inner products ----------------------------------------------------------

def inner_sc(f: QField, g: QField) -> float:
    """Real scalar product Sc of the integral of f conj(g)."""
    _check_same(f, g)
    return float(np.sum(f.data * g.data) * f.grid.cell)


def inner_q(f: QField, g: QField) -> np.ndarray:
    """Quaternion-valued inner product, the integral of f conj(g)."""
    _check_same(f, g)
    return np.sum(qmul(f.data, qconj(g.data)), axis=(0, 1)) * f.grid.cell


def inner_window(f: QField, g: QField, omega) -> np.ndarray:
    """Quaternion inner product of ``f`` with the modulated real window ``M_omega g``.

    The i-exponential of a modulation sits in a right carrier; conjugating it
    turns it into a left carrier, so it lands to the left of ``f``:

        (f, M_omega g) = sum exp(-2 pi i x1 w1) f(x) g(x) exp(-2 pi j x2 w2) dA
    """
    _check_same(f, g)
    x1, x2 = f.grid.coords()
    left = exp_unit(-2 * np.pi * omega[0] * x1, "i")
    right = exp_unit(-2 * np.pi * omega[1] * x2, "j")
    prod = qmul(qmul(left, f.data * g.data[..., :1]), right)
    return np.sum(prod, axis=(0, 1)) * f.grid.cell


# -- time-frequency operators --------------------------------------------------

def _shift_steps(grid: Grid2, b) -> tuple[int, int]:
    steps = []
    for axis, (bk, d) in enumerate(zip(b, (grid.dx1, grid.dx2))):
        k = bk / d
        kr = round(k)
        if abs(k - kr) > _TILE_RTOL * max(1.0, abs(k)):
            warnings.warn(
                f"translation {bk} on axis {axis} is not a multiple of {d}; "
                f"snapped to {kr * d}",
                stacklevel=3,
            )
        steps.append(int(kr))
    return steps[0], steps[1]


def translate(f: QField, b) -> QField:
    """(T_b f)(x) = f(x - b) with periodic wrap."""
    s1, s2 = _shift_steps(f.grid, b)
    return f.with_data(np.roll(f.data, (s1, s2), axis=(0, 1)))


def modulate(f: QField, omega) -> QField:
    """(M_omega f)(x) = exp(2 pi j w2 x2) f(x) exp(2 pi i w1 x1), pointwise."""
    x1, x2 = f.grid.coords()
    left = exp_unit(2 * np.pi * omega[1] * x2, "j")
    right = exp_unit(2 * np.pi * omega[0] * x1, "i")
    return f.with_data(qmul(qmul(left, f.data), right))


def conj_modulate(f: QField, omega) -> QField:
    """The operator conj(M_{-omega}): f -> exp(2 pi i w1 x1) f(x) exp(2 pi j w2 x2).

    Conjugation flips the right carrier of M into a left carrier, so the
    i-exponential ends up on the left of the signal value.
    """
    x1, x2 = f.grid.coords()
    left = exp_unit(2 * np.pi * omega[0] * x1, "i")
    right = exp_unit(2 * np.pi * omega[1] * x2, "j")
    return f.with_data(qmul(qmul(left, f.data), right))


def commutation_check(g: QField, b, omega) -> dict:
    """Compare T_b M_w g with the twisted product of M_w T_b g.

    The identity that holds pointwise is
    T_b M_w g = exp(-2 pi j b2 w2) (M_w T_b g) exp(-2 pi i b1 w1).
    """
    tm = translate(modulate(g, omega), b).data
    mt = modulate(translate(g, b), omega).data
    left = exp_unit(-2 * np.pi * b[1] * omega[1], "j")
    right = exp_unit(-2 * np.pi * b[0] * omega[0], "i")
    twisted = qmul(qmul(left, mt), right)
    return {
        "max_abs_defect": float(np.max(qabs(tm - twisted))),
        "plain_commutator_defect": float(np.max(qabs(tm - mt))),
    }


def wiener_amalgam_norm(g: QField, alpha: float) -> float:
    """Sum over half-open tiles ``alpha n + [0, alpha)^2`` of the sampled sup of |g|."""
    if not g.is_real():
        raise ConfigError("Wiener-Amalgam norm is defined for real windows")
    grid = g.grid
    grid.steps(alpha, 0)
    grid.steps(alpha, 1)
    x1, x2 = grid.axes()
    # the tiny offset keeps exact multiples of alpha in the upper tile
    t1 = np.floor(x1 / alpha + 1e-9).astype(int)
    t2 = np.floor(x2 / alpha + 1e-9).astype(int)
    a = np.abs(g.data[..., 0])
    total = 0.0
    for u in np.unique(t1):
        rows = a[t1 == u]
        for v in np.unique(t2):
            total += float(np.max(rows[:, t2 == v]))
    return total


# -- QF2 binary format -------------------------------------------------------

QF2_MAGIC = b"QF2\x00"
QF2_VERSION = 1
_HEADER = struct.Struct("<4sIQQdddd")


def write_field(path, f: QField) -> None:
    g = f.grid
    header = _HEADER.pack(QF2_MAGIC, QF2_VERSION, g.n1, g.n2, g.x1_min, g.x2_min, g.dx1, g.dx2)
    body = np.ascontiguousarray(f.data, dtype="<f8").tobytes()
    Path(path).write_bytes(header + body)


def read_field(path) -> QField:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise QF2Error(f"{path}: truncated header")
    magic, version, n1, n2, x1, x2, d1, d2 = _HEADER.unpack_from(raw)
    if magic != QF2_MAGIC:
        raise QF2Error(f"{path}: bad magic {magic!r}")
    if version != QF2_VERSION:
        raise QF2Error(f"{path}: unsupported QF2 version {version} (expected {QF2_VERSION})")
    expected = n1 * n2 * 4 * 8
    body = raw[_HEADER.size:]
    if len(body) != expected:
        raise QF2Error(f"{path}: expected {expected} data bytes, found {len(body)}")
    data = np.frombuffer(body, dtype="<f8").reshape(n1, n2, 4)
    if not np.all(np.isfinite(data)):
        raise QF2Error(f"{path}: non-finite sample values")
    try:
        grid = Grid2(int(n1), int(n2), x1, x2, d1, d2)
    except ConfigError as exc:
        raise QF2Error(f"{path}: {exc}") from exc
    return QField(grid, data.astype(float))
