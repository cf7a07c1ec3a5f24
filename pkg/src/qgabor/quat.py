"""Quaternion algebra on numpy arrays.

A quaternion ``q = w + x i + y j + z k`` is stored as the trailing axis of
length 4 in the order ``(w, x, y, z)``. Every function broadcasts over the
leading axes, so a sampled field of shape ``(n1, n2, 4)`` and a single
quaternion of shape ``(4,)`` go through the same code.

The ``split_*``/``merge_*`` helpers decompose a quaternion into a pair of
ordinary complex numbers so that multiplication by ``exp(i t)`` or ``exp(j t)``
on one fixed side becomes plain complex multiplication.  The numpy imaginary
unit stands for ``i`` or ``j`` depending on the helper.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])


def asquat(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape[-1:] != (4,):
        raise ValueError(f"quaternion arrays need a trailing axis of length 4, got {q.shape}")
    return q


def qmul(p, q) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    p = asquat(p)
    q = asquat(q)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = asquat(q)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(q) -> np.ndarray:
    return np.sqrt(np.sum(asquat(q) ** 2, axis=-1))


def qabs2(q) -> np.ndarray:
    return np.sum(asquat(q) ** 2, axis=-1)


def conj_and_abs(q):
    return qconj(q), qabs(q)


def scalar_part(q) -> np.ndarray:
    return asquat(q)[..., 0]


def carrier_apply(side: str, p, q) -> np.ndarray:
    """Apply a carrier operator built from ``p`` to ``q``.

    ``right``: C_r(p) q = q p.  ``left``: q C_l(p) = p q.
    """
    if side == "right":
        return qmul(q, p)
    if side == "left":
        return qmul(p, q)
    raise ValueError(f"carrier side must be 'left' or 'right', got {side!r}")


def from_real(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    out = np.zeros(a.shape + (4,))
    out[..., 0] = a
    return out


def exp_unit(theta, unit: str) -> np.ndarray:
    """``exp(u * theta)`` for ``u`` one of ``'i'``, ``'j'``, ``'k'``."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    out[..., "ijk".index(unit) + 1] = np.sin(theta)
    return out


# Complex splittings.  Each pair (split, merge) is exact and lossless.

def split_left_i(q):
    """q = v1 + v2 j with v1, v2 in span{1, i}; left i-multiplication acts on both."""
    q = asquat(q)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def merge_left_i(v1, v2) -> np.ndarray:
    return np.stack([v1.real, v1.imag, v2.real, v2.imag], axis=-1)


def split_right_i(q):
    """q = v1 + j v2 with v1, v2 in span{1, i}; right i-multiplication acts on both."""
    q = asquat(q)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] - 1j * q[..., 3]


def merge_right_i(v1, v2) -> np.ndarray:
    return np.stack([v1.real, v1.imag, v2.real, -v2.imag], axis=-1)


def split_left_j(q):
    """q = u1 + u2 i with u1, u2 in span{1, j}; left j-multiplication acts on both."""
    q = asquat(q)
    return q[..., 0] + 1j * q[..., 2], q[..., 1] - 1j * q[..., 3]


def merge_left_j(u1, u2) -> np.ndarray:
    return np.stack([u1.real, u2.real, u1.imag, -u2.imag], axis=-1)


def split_right_j(q):
    """q = u1 + i u2 with u1, u2 in span{1, j}; right j-multiplication acts on both."""
    q = asquat(q)
    return q[..., 0] + 1j * q[..., 2], q[..., 1] + 1j * q[..., 3]


def merge_right_j(u1, u2) -> np.ndarray:
    return np.stack([u1.real, u2.real, u1.imag, u2.imag], axis=-1)


def left_i_transform(kernel, q, axis: int) -> np.ndarray:
    """Sum ``kernel[u, a] * q[..a..]`` along ``axis`` with the kernel on the left.

    ``kernel`` is a complex matrix read as elements of span{1, i}.
    """
    v1, v2 = split_left_i(q)
    v1 = np.moveaxis(np.tensordot(kernel, v1, axes=([1], [axis])), 0, axis)
    v2 = np.moveaxis(np.tensordot(kernel, v2, axes=([1], [axis])), 0, axis)
    return merge_left_i(v1, v2)


def right_j_transform(q, kernel, axis: int) -> np.ndarray:
    """Sum ``q[..b..] * kernel[v, b]`` along ``axis`` with the kernel on the right.

    ``kernel`` is a complex matrix read as elements of span{1, j}.
    """
    u1, u2 = split_right_j(q)
    u1 = np.moveaxis(np.tensordot(kernel, u1, axes=([1], [axis])), 0, axis)
    u2 = np.moveaxis(np.tensordot(kernel, u2, axes=([1], [axis])), 0, axis)
    return merge_right_j(u1, u2)


@dataclass(frozen=True)
class Quaternion:
    """A single quaternion value with operator sugar over :func:`qmul`."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = asquat(a)
        if a.shape != (4,):
            raise ValueError("expected a single quaternion")
        return cls(*(float(c) for c in a))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.w, self.x, self.y, self.z], dtype=dtype)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(np.asarray(self) * other)
        return Quaternion.from_array(qmul(np.asarray(self), np.asarray(other)))

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return Quaternion.from_array(qmul(np.asarray(other), np.asarray(self)))

    def __add__(self, other):
        return Quaternion.from_array(np.asarray(self) + np.asarray(other))

    def __sub__(self, other):
        return Quaternion.from_array(np.asarray(self) - np.asarray(other))

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def __abs__(self) -> float:
        return float(qabs(np.asarray(self)))

    @property
    def scalar(self) -> float:
        return self.w
