import numpy as np
import pytest

from qgabor import gabor
from qgabor.field import ConfigError, Grid2, QField, WindowSpec, inner_sc, inner_window, sample_window, translate
from qgabor.gabor import GaborCoefficients, GaborSystem, FrameBounds

from conftest import random_field

GRID = Grid2.square(64, -4, 4)


def _index(sys, m, n):
    return (m[0] - sys.m_range[0][0], m[1] - sys.m_range[1][0], n[0] - sys.n_range[0][0], n[1] - sys.n_range[1][0])


@pytest.fixture
def gauss_sys():
    return GaborSystem(sample_window(WindowSpec("gaussian"), GRID), 1.0, 1.0)


def test_default_ranges(gauss_sys):
    # all 8 periodic translates; n spans one alias period 1/(beta dx) = 8
    assert gauss_sys.m_range == ((-4, 3), (-4, 3))
    assert gauss_sys.n_range == ((-4, 3), (-4, 3))


def test_coefficients_are_carrier_inner_products(gauss_sys, rng):
    f = gabor.random_probe(GRID, rng)
    cq = gabor.analysis(f, gauss_sys)
    cs = gabor.analysis(f, gauss_sys, "scalar")
    for m, n in (((0, 0), (0, 0)), ((1, -2), (2, -1)), ((-4, 3), (3, -4))):
        idx = _index(gauss_sys, m, n)
        want = inner_window(f, translate(gauss_sys.window, m), n)
        np.testing.assert_allclose(cq.values[idx], want, atol=1e-12)
        # the scalar coefficient is the real scalar product with the synthesis atom
        assert cs.values[idx] == pytest.approx(inner_sc(f, gauss_sys.atom(m, n)), abs=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_box_is_orthonormal_basis(alpha, rng):
    sys = GaborSystem(sample_window(WindowSpec("box", alpha), GRID), alpha, 1 / alpha)
    f = random_field(GRID, rng)
    c = gabor.analysis(f, sys, estimate_tail=False)
    assert c.energy() == pytest.approx(f.norm2(), rel=1e-12)
    assert np.max(np.abs(gabor.synthesis(c, sys).data - f.data)) <= 1e-12
    assert np.max(np.abs(gabor.frame_apply(f, sys).data - f.data)) <= 1e-6


def test_scalar_mode_loses_energy(rng):
    sys = GaborSystem(sample_window(WindowSpec("box", 1.0), GRID), 1.0, 1.0)
    f = random_field(GRID, rng)
    ratio = gabor.rayleigh(f, sys, "scalar")
    assert 0.1 < ratio < 0.5


def test_real_signal_modes_agree_on_energy_scale(rng):
    # for a real probe the scalar parts carry exactly the w-components
    sys = GaborSystem(sample_window(WindowSpec("box", 1.0), GRID), 1.0, 1.0)
    f = QField.from_real(GRID, gabor.random_probe(GRID, rng).data[..., 0])
    cq = gabor.analysis(f, sys, estimate_tail=False)
    cs = gabor.analysis(f, sys, "scalar", estimate_tail=False)
    np.testing.assert_array_equal(cs.values, cq.values[..., 0])


def test_coefficients_roundtrip_types():
    vals = np.arange(16.0).reshape(2, 2, 2, 2)
    c = GaborCoefficients(vals, "scalar", ((0, 1), (0, 1)), ((0, 1), (0, 1)))
    assert c.as_quaternion()[..., 0].tolist() == vals.tolist()
    assert c.energy() == pytest.approx(float(np.sum(vals**2)))


def test_frame_bounds_validation():
    with pytest.raises(ValueError):
        FrameBounds(2.0, 1.0, "x")
    FrameBounds(1.0, 1.0 - 1e-15, "x")


def test_system_validation():
    g = sample_window(WindowSpec("gaussian"), GRID)
    with pytest.raises(ConfigError):
        GaborSystem(g, 0.3, 1.0)
    with pytest.raises(ConfigError):
        GaborSystem(QField.zeros(GRID), 1.0, 1.0)
    with pytest.raises(ConfigError):
        GaborSystem(g.lmul(np.array([0.0, 1.0, 0.0, 0.0])), 1.0, 1.0)
    with pytest.raises(ConfigError):
        gabor.analysis(g, GaborSystem(g, 1.0, 1.0), mode="complex")


def test_tail_warning(gauss_sys, rng):
    c = gabor.analysis(random_field(GRID, rng), gauss_sys)
    assert c.metadata["tail_fraction"] > gabor.TAIL_WARN
    assert "warning" in c.metadata
    smooth = gabor.analysis(gauss_sys.window, gauss_sys)
    assert "warning" not in smooth.metadata


def test_empirical_bounds_deterministic_and_prefix_stable(gauss_sys):
    a = gabor.empirical_frame_bounds(gauss_sys, trials=3, seed=5)
    b = gabor.empirical_frame_bounds(gauss_sys, trials=3, seed=5)
    assert (a.A, a.B) == (b.A, b.B)
    c = gabor.empirical_frame_bounds(gauss_sys, trials=6, seed=5)
    assert c.metadata["ratios"][: len(a.metadata["ratios"])] == a.metadata["ratios"]
    assert c.A <= a.A and c.B >= a.B


def test_random_probe_keeps_grid(rng):
    p = gabor.random_probe(GRID, rng)
    assert p.grid == GRID
