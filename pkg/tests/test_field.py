import math
import struct
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgabor.field import (ConfigError, Grid2, GridMismatch, QField, QF2Error, WindowSpec, commutation_check,
                          conj_modulate, inner_q, inner_sc, inner_window, modulate, read_field,
                          sample_window, translate, wiener_amalgam_norm, write_field)
from qgabor.quat import I, J, qabs, qmul

from conftest import random_field


def test_grid_square_and_steps():
    g = Grid2.square(128, -8, 8)
    assert g.shape == (128, 128)
    assert g.dx1 == 0.125
    assert g.steps(0.5, 0) == 4
    with pytest.raises(ConfigError):
        g.steps(0.3, 0)


def test_field_is_immutable_and_validated(rng):
    g = Grid2.square(8, 0, 1)
    f = random_field(g, rng)
    with pytest.raises(ValueError):
        f.data[0, 0, 0] = 1.0
    bad = np.zeros(g.shape + (4,))
    bad[1, 1, 2] = np.nan
    with pytest.raises(ValueError):
        QField(g, bad)
    with pytest.raises(ValueError):
        QField(g, np.zeros((8, 7, 4)))


def test_grid_mismatch(rng):
    f = random_field(Grid2.square(8, 0, 1), rng)
    h = random_field(Grid2.square(8, 0, 2), rng)
    with pytest.raises(GridMismatch):
        f + h


def test_window_catalogue_norms():
    g = Grid2.square(256, -4, 4)
    # exact integral of exp(-2 pi x^2) in 2-D is 1/2
    assert sample_window(WindowSpec("gaussian"), g).norm2() == pytest.approx(0.5, rel=1e-12)
    for a in (0.5, 1.0, 2.0):
        assert sample_window(WindowSpec("box", a), g).norm2() == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ConfigError):
        WindowSpec("triangle")


def test_inner_products(rng):
    g = Grid2.square(16, -2, 2)
    f, h = random_field(g, rng), random_field(g, rng)
    assert inner_sc(f, f) == pytest.approx(f.norm2())
    ip = inner_q(f, h)
    assert ip[0] == pytest.approx(inner_sc(f, h))
    # <f, h>_q conjugates to <h, f>_q
    np.testing.assert_allclose(inner_q(h, f) * [1, -1, -1, -1], ip, atol=1e-12)
    # with a real window the carrier form at omega = 0 is the plain product integral
    win = sample_window(WindowSpec("gaussian"), g)
    np.testing.assert_allclose(inner_window(f, win, (0.0, 0.0)), inner_q(f, win), atol=1e-12)


def test_translate_is_periodic_shift(rng):
    g = Grid2.square(16, -2, 2)
    f = random_field(g, rng)
    t = translate(f, (0.5, -0.25))
    np.testing.assert_array_equal(t.data, np.roll(f.data, (2, -1), axis=(0, 1)))
    assert translate(translate(f, (0.5, -0.25)), (-0.5, 0.25)).data.tobytes() == f.data.tobytes()


def test_translate_snaps_with_warning(rng):
    f = random_field(Grid2.square(16, -2, 2), rng)
    with pytest.warns(UserWarning):
        translate(f, (0.3, 0.0))


def test_modulate_sides(rng):
    g = Grid2.square(8, -1, 1)
    f = random_field(g, rng)
    w = (0.7, -1.3)
    x1, x2 = g.coords()
    ej = np.stack([np.cos(2 * np.pi * w[1] * x2), 0 * x2, np.sin(2 * np.pi * w[1] * x2), 0 * x2], -1)
    ei = np.stack([np.cos(2 * np.pi * w[0] * x1), np.sin(2 * np.pi * w[0] * x1), 0 * x1, 0 * x1], -1)
    np.testing.assert_allclose(modulate(f, w).data, qmul(qmul(ej, f.data), ei), atol=1e-14)
    # conj_modulate applies the conjugate kernels on the opposite sides
    back = conj_modulate(f, w)
    np.testing.assert_allclose(back.data, qmul(qmul(ei, f.data), ej), atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(-8, 8), st.integers(-8, 8), st.floats(-3, 3), st.floats(-3, 3))
def test_twisted_commutation(s1, s2, w1, w2):
    # wide enough that the periodic wrap of the shift only moves negligible tails
    g = Grid2.square(64, -8, 8)
    f = sample_window(WindowSpec("gaussian"), g)
    b = (s1 * g.dx1, s2 * g.dx2)
    res = commutation_check(f, b, (w1, w2))
    assert res["max_abs_defect"] <= 1e-10


def test_plain_commutator_fails_generically():
    g = Grid2.square(32, -4, 4)
    f = sample_window(WindowSpec("gaussian"), g)
    assert commutation_check(f, (0.25, 0.5), (0.7, 0.3))["plain_commutator_defect"] > 1e-2


def _wa_sampled(alpha: float, dx: float, lo: float, hi: float) -> float:
    # separable window: product of 1-D sums of per-tile sample maxima
    total = 0.0
    for n in range(round(lo / alpha), round(hi / alpha)):
        pts = alpha * n + dx * np.arange(round(alpha / dx))
        total += float(np.max(np.exp(-np.pi * pts**2)))
    return total * total


def _wa_continuum(alpha: float) -> float:
    # sup of exp(-pi x^2) over [a n, a(n+1)) is at the endpoint nearest zero (a supremum at 0 from the left)
    s = sum(math.exp(-math.pi * (alpha * min(abs(n), abs(n + 1))) ** 2) for n in range(-40, 40))
    return s * s


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_wiener_amalgam_gaussian(alpha):
    g = Grid2.square(512, -8, 8)
    val = wiener_amalgam_norm(sample_window(WindowSpec("gaussian"), g), alpha)
    assert val == pytest.approx(_wa_sampled(alpha, g.dx1, -8, 8), rel=1e-12)


def test_wiener_amalgam_gaussian_converges_from_below():
    target = _wa_continuum(1.0)
    errs = []
    for n in (64, 256, 1024):
        val = wiener_amalgam_norm(sample_window(WindowSpec("gaussian"), Grid2.square(n, -8, 8)), 1.0)
        assert val < target
        errs.append(target - val)
    assert errs[0] > errs[1] > errs[2]
    # first-order convergence in dx: 16x finer grid, roughly 16x smaller gap
    assert errs[2] < errs[0] / 8


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_wiener_amalgam_box(alpha):
    g = Grid2.square(128, -8, 8)
    assert wiener_amalgam_norm(sample_window(WindowSpec("box", alpha), g), alpha) == pytest.approx(1 / alpha)


def test_qf2_round_trip_bit_exact(tmp_path, rng):
    f = random_field(Grid2(6, 10, -1.5, 0.25, 0.5, 0.125), rng)
    p = tmp_path / "f.qf2"
    write_field(p, f)
    h = read_field(p)
    assert h.grid == f.grid
    assert h.data.tobytes() == f.data.tobytes()
    q = tmp_path / "g.qf2"
    write_field(q, h)
    assert p.read_bytes() == q.read_bytes()


def test_qf2_rejects_corruption(tmp_path, rng):
    f = random_field(Grid2.square(4, 0, 1), rng)
    p = tmp_path / "f.qf2"
    write_field(p, f)
    raw = bytearray(p.read_bytes())

    bad = tmp_path / "bad.qf2"
    bad.write_bytes(b"XYZ\x00" + raw[4:])
    with pytest.raises(QF2Error, match="magic"):
        read_field(bad)

    v2 = raw.copy()
    v2[4:8] = struct.pack("<I", 2)
    bad.write_bytes(bytes(v2))
    with pytest.raises(QF2Error, match="version"):
        read_field(bad)

    bad.write_bytes(bytes(raw[:-8]))
    with pytest.raises(QF2Error):
        read_field(bad)

    nan = raw.copy()
    nan[-8:] = struct.pack("<d", float("nan"))
    bad.write_bytes(bytes(nan))
    with pytest.raises(QF2Error):
        read_field(bad)
