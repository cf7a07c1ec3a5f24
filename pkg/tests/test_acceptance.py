"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -s``
or by running this file directly) before asserting.
"""
import math
import subprocess
import sys

import numpy as np

from qgabor import density, gabor, qft, wqft, zak
from qgabor.field import Grid2, QField, WindowSpec, sample_window
from qgabor.quat import qabs2

GAUSS = WindowSpec("gaussian")
ALPHAS = (0.5, 1.0, 2.0)


def report(n: int, name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  [{n:2d}] {name}: {detail}")
    assert ok, detail


def theta_sup(alpha=1.0, n=801, M=12):
    m = np.arange(-M, M + 1)
    w = np.linspace(0, 1 / alpha, n)
    ph = np.exp(2j * np.pi * alpha * np.outer(w, m))
    best = 0.0
    for x in np.linspace(0, alpha, n):
        best = max(best, float(np.abs(ph @ np.exp(-np.pi * (x - alpha * m) ** 2)).max()))
    return best


def test_01_qft_round_trip():
    rng = np.random.default_rng(1)
    g = Grid2.square(64, -4, 4)
    rt = 0.0
    for _ in range(20):
        f = QField(g, rng.standard_normal(g.shape + (4,)))
        rt = max(rt, float(np.max(np.abs(qft.qft_inverse(qft.qft_forward(f)).data - f.data))))
    s = QField(Grid2.square(16, -2, 2), rng.standard_normal((16, 16, 4)))
    orc = float(np.max(np.abs(qft.qft_forward(s).data - qft.qft_oracle(s).data)))
    report(1, "QFT round trip", rt <= 1e-12 and orc <= 1e-10, f"round trip {rt:.2e}, oracle {orc:.2e}")


def test_02_heisenberg():
    g = Grid2.square(256, -6, 6)
    x1, x2 = g.coords()
    gauss = np.exp(-np.pi * (x1**2 + x2**2))
    bound = 1 / (4 * math.pi)
    eq = qft.uncertainty(QField.from_real(g, gauss)).products
    dev = max(abs(p - bound) for p in eq)

    def quat(w=0.0, x=0.0, y=0.0, z=0.0):
        return np.stack(np.broadcast_arrays(w, x, y, z), axis=-1)

    a = 1.0
    shifted = lambda s: np.exp(-np.pi * ((x1 - s) ** 2 + (x2 - s) ** 2))
    sech2 = 1 / np.cosh(np.pi * x1) ** 2 / np.cosh(np.pi * x2) ** 2
    probes = {
        "x1 gaussian": quat(x1 * gauss),
        "two-bump": quat(shifted(a), 0, shifted(-a)),
        "gaussian (1 + k x1 x2)": quat(gauss, 0, 0, x1 * x2 * gauss),
        "quartic": quat(np.exp(-np.pi * (x1**4 + x2**4))),
        "sech^2 (1 + i)": quat(sech2, sech2),
    }
    worst = min(min(qft.uncertainty(QField(g, v)).products) for v in probes.values())
    ok = dev <= 1e-6 and worst >= bound - 1e-6
    report(2, "Heisenberg equality", ok, f"gaussian |product - 1/4pi| {dev:.2e}, probe min {worst:.6f} vs {bound:.6f}")


def test_03_orthogonality():
    g32 = Grid2.square(32, -4, 4)
    g = sample_window(GAUSS, g32)
    errs = [wqft.orthogonality_check(g, g, g, b_grid=wqft.b_axes(g32, s))["rel_err"] for s in (2, 1)]
    report(3, "WQFT orthogonality", errs[0] <= 1e-2 and errs[1] < errs[0],
           f"desk {errs[0]:.2e}, refined {errs[1]:.2e}")


def test_04_zak_unitarity():
    grid = Grid2.square(64, -4, 4)
    ge = max(zak.zak_parseval_check(GAUSS, GAUSS, a, grid=grid)["rel_err"] for a in ALPHAS)
    be = max(zak.zak_parseval_check(WindowSpec("box", a), WindowSpec("box", a), a, grid=grid)["rel_err"]
             for a in ALPHAS)
    report(4, "Zak unitarity", ge <= 1e-3 and be <= 1e-10, f"gaussian {ge:.2e}, box {be:.2e}")


def test_05_quasiperiodicity():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        res = zak.quasiperiodicity_check(GAUSS, 1.0, rng.uniform(0, 1, 2), rng.uniform(0, 1, 2), 10)
        worst = max(worst, res["defect_omega"], res["defect_x"])
    report(5, "Zak quasiperiodicity", worst <= 1e-10, f"max defect {worst:.2e}")


def test_06_zak_inversion():
    worst = 0.0
    for a in ALPHAS:
        inv = zak.zak_inverse(zak.zak_grid(GAUSS, a, 32, 32))
        x1, x2 = inv.grid.coords()
        worst = max(worst, float(np.max(np.abs(inv.data[..., 0] - GAUSS(x1, x2)))))
    report(6, "Zak inversion", worst <= 1e-8, f"max error {worst:.2e}")


def test_07_sum_identity():
    grid = Grid2.square(96, -6, 6)
    box = zak.sum_identity_check(WindowSpec("box"), WindowSpec("box"), 1.0, 1, grid=grid)
    errs = [zak.sum_identity_check(GAUSS, GAUSS, 1.0, K, grid=grid)["rel_err"] for K in (1, 2)]
    ok = abs(box["lhs"] - 1) <= 1e-6 and abs(box["rhs"] - 1) <= 1e-6 and errs[1] <= 1e-2 and errs[1] < errs[0]
    report(7, "sum identity", ok, f"box lhs {box['lhs']:.12f} rhs {box['rhs']:.12f}; gaussian K=1 {errs[0]:.2e}, K=2 {errs[1]:.2e}")


def test_08_box_onb():
    dev, verdicts, ident = 0.0, [], 0.0
    rng = np.random.default_rng(8)
    grid = Grid2.square(64, -4, 4)
    f = gabor.random_probe(grid, rng)
    for a in ALPHAS:
        spec = WindowSpec("box", a)
        fb = density.optimal_frame_bounds(spec, a)
        dev = max(dev, abs(fb.A - 1), abs(fb.B - 1))
        verdicts.append(density.frame_decision(spec, a).verdict)
        sys_ = gabor.GaborSystem(sample_window(spec, grid), a, 1 / a)
        ident = max(ident, float(np.max(np.abs(gabor.frame_apply(f, sys_).data - f.data))))
    ok = dev <= 1e-12 and all(v == "onb" for v in verdicts) and ident <= 1e-6
    report(8, "box optimal bounds", ok, f"|A-1|,|B-1| <= {dev:.1e}, verdicts {verdicts}, frame operator {ident:.1e}")


def test_09_gaussian_not_frame():
    vals, paired, verdicts = [], [], []
    for a in ALPHAS:
        res = density.gaussian_zak_critical_value(a, 8)
        vals.append(res["abs"])
        paired.append(res["paired_cancellation"])
        verdicts.append(density.frame_decision(GAUSS, a).verdict)
    control = density.gaussian_zak_critical_value(1.0, m_range=[m for m in range(-8, 9) if m != -1])["abs"]
    ok = max(vals) <= 1e-13 and all(paired) and all(v == "not_frame" for v in verdicts) and control > 1e-9
    report(9, "Gaussian non-frame", ok, f"max |Z| {max(vals):.1e}, verdicts {verdicts}, control {control:.2e}")


def test_10_gaussian_upper_bound():
    oracle = theta_sup(1.0) ** 4
    B = density.optimal_frame_bounds(GAUSS, 1.0, 16, 16).B
    report(10, "Gaussian B_opt", abs(B - oracle) <= 1e-3 and abs(B - 1.3932039) <= 1e-6,
           f"B_opt {B:.10f}, theta oracle {oracle:.10f}")


def _zak_zero_probe(grid: Grid2, alpha: float) -> QField:
    # discrete Zak transform concentrated at (x, w) = (alpha/2, 1/(2 alpha)) in both variables
    t1, _ = zak.tile_axes(grid, alpha)
    K = grid.n1 // t1.size
    vals = np.zeros((t1.size, t1.size, K, K, 4))
    i, k = t1.size // 2, K // 2
    vals[i, i, k, k, 0] = 1.0
    return zak.zak_synthesize(vals, alpha, grid)


def test_11_cross_module():
    grid = Grid2.square(64, -4, 4)
    lines, ok = [], True
    for kind in ("box", "gaussian"):
        spec = WindowSpec(kind, 1.0)
        opt = density.optimal_frame_bounds(spec, 1.0, 16, 16)
        sys_ = gabor.GaborSystem(sample_window(spec, grid), 1.0, 1.0)
        emp = gabor.empirical_frame_bounds(sys_, trials=4, seed=11, probes=[_zak_zero_probe(grid, 1.0)])
        inside = emp.A >= opt.A - 1e-3 and emp.B <= opt.B + 1e-3
        ok &= inside
        lines.append(f"{kind} [{emp.A:.4g}, {emp.B:.6g}] in [{opt.A:.3g}, {opt.B:.6g}]")
    report(11, "empirical within optimal bounds", ok, "; ".join(lines))


def test_12_determinism():
    cmd = [sys.executable, "-m", "qgabor", "verify", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    same = a.stdout == b.stdout and len(a.stdout) > 0
    report(12, "verify determinism", same and a.returncode == 0, f"{len(a.stdout)} bytes, identical={same}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
