import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from qgabor.field import Grid2, QField, WindowSpec, sample_window
from qgabor.qft import (HEISENBERG_BOUND, frequencies, qft_forward, qft_inverse, qft_oracle,
                        spectrum_grid, uncertainty)

from conftest import random_field


def test_round_trip(rng):
    g = Grid2.square(64, -3, 5)
    for _ in range(5):
        f = random_field(g, rng)
        back = qft_inverse(qft_forward(f))
        assert back.grid == g
        assert np.max(np.abs(back.data - f.data)) <= 1e-12


@settings(max_examples=10, deadline=None)
@given(st.integers(4, 20), st.integers(4, 20), st.floats(-3, 3), st.floats(0.05, 0.5), st.integers(0, 2**31))
def test_round_trip_any_grid(n1, n2, lo, dx, seed):
    g = Grid2(n1, n2, lo, -lo, dx, dx * 0.75)
    f = random_field(g, np.random.default_rng(seed))
    assert np.max(np.abs(qft_inverse(qft_forward(f)).data - f.data)) <= 1e-12


def test_fast_matches_oracle(rng):
    f = random_field(Grid2(16, 12, -2.0, 0.5, 0.25, 0.3), rng)
    assert np.max(np.abs(qft_forward(f).data - qft_oracle(f).data)) <= 1e-10


def test_oracle_guard():
    f = QField.zeros(Grid2.square(128, 0, 1))
    with pytest.raises(ValueError):
        qft_oracle(f)


def test_parseval(rng):
    f = random_field(Grid2.square(32, -2, 2), rng)
    assert qft_forward(f).norm2() == pytest.approx(f.norm2(), rel=1e-12)


def test_spectrum_grid_and_frequencies():
    g = Grid2.square(8, -2, 2)
    s = spectrum_grid(g)
    assert s.dx1 == pytest.approx(0.25)
    w1, _ = frequencies(s)
    np.testing.assert_allclose(w1, np.fft.fftfreq(8, 0.5))


def test_gaussian_is_self_dual():
    g = Grid2.square(256, -6, 6)
    F = qft_forward(sample_window(WindowSpec("gaussian"), g))
    w1, w2 = frequencies(F.grid)
    W1, W2 = np.meshgrid(w1, w2, indexing="ij")
    want = np.exp(-np.pi * (W1**2 + W2**2))
    assert np.max(np.abs(F.data[..., 0] - want)) <= 1e-12
    assert np.max(np.abs(F.data[..., 1:])) <= 1e-12


def _ft1(func, w, lo=-8, hi=8):
    re = integrate.quad(lambda t: func(t) * math.cos(2 * math.pi * w * t), lo, hi, limit=200)[0]
    im = integrate.quad(lambda t: -func(t) * math.sin(2 * math.pi * w * t), lo, hi, limit=200)[0]
    return complex(re, im)


def test_shifted_separable_against_quadrature():
    a, b = 0.3, -0.5
    g1 = lambda t: math.exp(-math.pi * (t - a) ** 2)
    g2 = lambda t: math.exp(-2 * math.pi * (t - b) ** 2)
    grid = Grid2.square(128, -6, 6)
    x1, x2 = grid.coords()
    f = QField.from_real(grid, np.exp(-np.pi * (x1 - a) ** 2) * np.exp(-2 * np.pi * (x2 - b) ** 2))
    F = qft_forward(f)
    w1, w2 = frequencies(F.grid)
    for p, q in ((0, 0), (3, 5), (7, 120), (100, 2)):
        u = _ft1(g1, w1[p])  # i-plane factor on the left
        v = _ft1(g2, w2[q])  # j-plane factor on the right
        # (u.re + u.im i)(v.re + v.im j)
        want = [u.real * v.real, u.imag * v.real, u.real * v.imag, u.imag * v.imag]
        np.testing.assert_allclose(F.data[p, q], want, atol=1e-10)


def test_heisenberg_equality_for_gaussian():
    rep = uncertainty(sample_window(WindowSpec("gaussian"), Grid2.square(256, -6, 6)))
    for prod in rep.products:
        assert abs(prod - 1 / (4 * math.pi)) <= 1e-6
    assert rep.bound == pytest.approx(HEISENBERG_BOUND)


def test_first_hermite_product_against_quadrature():
    # x exp(-pi x^2) is its own transform up to a unit, so its product is the spatial variance
    num = integrate.quad(lambda t: t**4 * math.exp(-2 * math.pi * t * t), -np.inf, np.inf)[0]
    den = integrate.quad(lambda t: t**2 * math.exp(-2 * math.pi * t * t), -np.inf, np.inf)[0]
    want = num / den
    g = Grid2.square(256, -6, 6)
    x1, x2 = g.coords()
    rep = uncertainty(QField.from_real(g, x1 * np.exp(-np.pi * (x1**2 + x2**2))))
    assert rep.products[0] == pytest.approx(want, rel=1e-8)
    assert rep.products[1] == pytest.approx(1 / (4 * math.pi), rel=1e-8)


def test_uncertainty_refuses_undecayed_signal():
    g = Grid2.square(64, -2, 2)
    with pytest.raises(ValueError, match="decay"):
        uncertainty(sample_window(WindowSpec("gaussian"), g))
    with pytest.raises(ValueError):
        uncertainty(QField.zeros(g))
