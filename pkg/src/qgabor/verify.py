"""Property suite behind ``qgabor verify``: one line per identity with its defect."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import density, field, gabor, qft, quat, wqft, zak
from .field import Grid2, QField, WindowSpec, sample_window
from .quat import qabs, qmul


@dataclass
class Check:
    name: str
    defect: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.defect <= self.tol)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<44s} defect={self.defect:.3e}  tol={self.tol:.1e}"


def theta_modulus_sup(alpha: float = 1.0, n: int = 401, M: int = 12) -> float:
    """Grid-search sup over (x, w) of |sum_m exp(-pi (x - alpha m)^2) exp(2 pi i alpha m w)|."""
    x = np.linspace(0.0, alpha, n)
    w = np.linspace(0.0, 1.0 / alpha, n)
    m = np.arange(-M, M + 1)
    amp = np.exp(-np.pi * (x[:, None] - alpha * m[None, :]) ** 2)
    ph = np.exp(2j * np.pi * alpha * np.outer(m, w))
    return float(np.max(np.abs(amp @ ph)))


def _random_field(grid: Grid2, rng) -> QField:
    return gabor.random_probe(grid, rng)


def run_checks(seed: int = 7) -> list[Check]:
    rng = np.random.default_rng(seed)
    out: list[Check] = []

    # quaternion algebra
    units = [quat.ONE, quat.I, quat.J, quat.K]
    table = max(float(qabs(qmul(quat.I, quat.J) - quat.K)), float(qabs(qmul(quat.J, quat.I) + quat.K)),
                *(float(qabs(qmul(u, u) + quat.ONE)) for u in units[1:]))
    out.append(Check("multiplication table ij=-ji=k, i^2=j^2=k^2=-1", table, 0.0))
    p, q, r = rng.normal(size=(3, 1000, 4))
    out.append(Check("associativity (pq)r = p(qr)", float(np.max(qabs(qmul(qmul(p, q), r) - qmul(p, qmul(q, r))))), 1e-13))
    sc = np.abs(qmul(qmul(p, q), r)[:, 0] - qmul(qmul(r, p), q)[:, 0])
    out.append(Check("cyclic scalar Sc[pqr] = Sc[rpq]", float(sc.max()), 1e-13))
    car = float(np.max(qabs(quat.carrier_apply("right", p, quat.ONE) - p)))
    out.append(Check("carrier C_r(p)1 = 1C_l(p) = p", car, 0.0))

    # field operators
    g64 = Grid2.square(64, -4, 4)
    gw = sample_window(WindowSpec("gaussian"), g64)
    b = (0.375, -1.25)
    w = tuple(rng.uniform(-2, 2, size=2))
    out.append(Check("twisted commutation T_b M_w", field.commutation_check(gw, b, w)["max_abs_defect"], 1e-10))

    # QFT
    f = QField(g64, rng.normal(size=(64, 64, 4)))
    rt = float(np.max(np.abs(qft.qft_inverse(qft.qft_forward(f)).data - f.data)))
    out.append(Check("QFT inversion round trip", rt, 1e-12))
    small = QField(Grid2.square(16, -2, 2), rng.normal(size=(16, 16, 4)))
    orc = float(np.max(np.abs(qft.qft_forward(small).data - qft.qft_oracle(small).data)))
    out.append(Check("QFT fast path vs direct oracle", orc, 1e-10))
    pars = abs(qft.qft_forward(f).norm2() - f.norm2()) / f.norm2()
    out.append(Check("QFT Parseval", pars, 1e-10))
    g256 = Grid2.square(256, -6, 6)
    u = qft.uncertainty(sample_window(WindowSpec("gaussian"), g256))
    out.append(Check("Heisenberg equality for the Gaussian", max(abs(v - qft.HEISENBERG_BOUND) for v in u.products), 1e-6))

    # WQFT
    g32 = Grid2.square(32, -4, 4)
    gg = sample_window(WindowSpec("gaussian"), g32)
    ff = _random_field(g32, rng)
    bq, wq = (0.5, -0.25), (0.3, -0.7)
    d = float(qabs(wqft.wqft_point(ff, gg, bq, wq) - wqft.wqft_direct(ff, gg, bq, wq)))
    out.append(Check("WQFT inner-product form = kernel integral", d, 1e-10))
    cov = wqft.covariance_check(ff, gg, (1.0, 0.0), (0.5, 0.5), [(0.0, 0.0), (0.5, -0.25)], [(0.1, 0.3), (-0.7, 0.2)])
    out.append(Check("WQFT translation covariance", cov["max_defect_translation"], 1e-9))
    out.append(Check("WQFT modulation covariance", cov["max_defect_modulation"], 1e-9))
    orth = wqft.orthogonality_check(gg, gg, gg, b_grid=wqft.b_axes(g32, 2))
    out.append(Check("WQFT orthogonality relation (desk grid)", orth["rel_err"], 1e-2))
    rec = wqft.wqft_reconstruct(wqft.wqft(ff, gg, wqft.b_axes(g32, 2)), gg)
    out.append(Check("WQFT reconstruction formula (desk grid)", (rec - ff).norm() / ff.norm(), 1e-2))

    # Gabor at critical density
    box = sample_window(WindowSpec("box", 1.0), g64)
    sb = gabor.GaborSystem(box, 1.0, 1.0)
    fr = _random_field(g64, rng)
    out.append(Check("box ONB: frame operator is the identity", float(np.max(np.abs(gabor.frame_apply(fr, sb).data - fr.data))), 1e-6))

    # Zak transform
    gsp = WindowSpec("gaussian")
    for a in (0.5, 1.0, 2.0):
        par = zak.zak_parseval_check(gsp, gsp, a, grid=g64)
        out.append(Check(f"Zak unitarity, gaussian, alpha={a:g}", par["rel_err"], 1e-3))
        bx = WindowSpec("box", a)
        par = zak.zak_parseval_check(bx, bx, a, grid=g64)
        out.append(Check(f"Zak unitarity, box, alpha={a:g}", par["rel_err"], 1e-10))
    qp = 0.0
    for _ in range(20):
        x = rng.uniform(0, 1, 2)
        om = rng.uniform(0, 1, 2)
        res = zak.quasiperiodicity_check(gsp, 1.0, x, om, 10)
        qp = max(qp, res["defect_omega"], res["defect_x"])
    out.append(Check("Zak quasiperiodicity", qp, 1e-10))
    Z = zak.zak_grid(gsp, 1.0, 16, 16)
    inv = zak.zak_inverse(Z)
    X1, X2 = inv.grid.coords()
    out.append(Check("Zak inversion formula", float(np.max(np.abs(inv.data[..., 0] - gsp(X1, X2)))), 1e-8))
    mt = 0.0
    for _ in range(10):
        k = rng.integers(-3, 4, 2)
        n = rng.integers(-3, 4, 2)
        x = rng.uniform(0, 1, 2)
        om = rng.uniform(0, 1, 2)
        closed = zak.zak_mt_window(gsp, 1.0, k, n, x, om, 12)
        direct = zak.zak_point(zak.modulated_translate(gsp, 1.0, k, n), 1.0, x, om, 12 + 3)
        mt = max(mt, float(qabs(closed - direct)))
    out.append(Check("Zak of modulated translates (closed form)", mt, 1e-10))
    g96 = Grid2.square(96, -6, 6)
    out.append(Check("sum identity, box/box", zak.sum_identity_check(WindowSpec("box"), WindowSpec("box"), 1.0, 1, grid=g96)["rel_err"], 1e-6))
    out.append(Check("sum identity, gaussian/gaussian", zak.sum_identity_check(gsp, gsp, 1.0, 2, grid=g96)["rel_err"], 1e-2))

    # critical-density certificates
    for a in (0.5, 1.0, 2.0):
        ob = density.optimal_frame_bounds(WindowSpec("box", a), a)
        out.append(Check(f"box ONB bounds A=B=1, alpha={a:g}", max(abs(ob.A - 1), abs(ob.B - 1)), 1e-12))
        cz = density.gaussian_zak_critical_value(a, 8)
        out.append(Check(f"Gaussian Zak zero, alpha={a:g}", cz["abs"] if cz["paired_cancellation"] else math.inf, 1e-13))
    bg = density.optimal_frame_bounds(gsp, 1.0, 16, 16)
    out.append(Check("Gaussian B_opt vs theta-sum oracle", abs(bg.B - theta_modulus_sup(1.0) ** 4), 1e-3))
    sg = gabor.GaborSystem(sample_window(gsp, g64), 1.0, 1.0)
    emp = gabor.empirical_frame_bounds(sg, trials=3, seed=seed)
    excess = max(bg.A - 1e-3 - emp.A, emp.B - bg.B - 1e-3, 0.0)
    out.append(Check("empirical bounds inside Zak bounds", excess, 0.0))
    return out


def render(checks: list[Check], seed: int) -> str:
    lines = [f"qgabor verify  seed={seed}"]
    lines += [c.line() for c in checks]
    npass = sum(c.passed for c in checks)
    lines.append(f"{npass}/{len(checks)} passed")
    return "\n".join(lines) + "\n"
