"""Frame certificates at critical density beta = 1/alpha from the Zak modulus.

Optimal bounds are A = alpha^2 inf |Z g|^2 and B = alpha^2 sup |Z g|^2 over
Q_alpha x Q_{1/alpha}, approximated by grid extrema with a refinement history.
The Gaussian's zero at x = (alpha/2, alpha/2), w = (1/(2 alpha), 1/(2 alpha))
is certified analytically by pairing terms of the lattice sum.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .field import ConfigError, WindowSpec
from .gabor import FrameBounds
from .quat import exp_unit, qabs, qabs2, qmul
from .zak import DEFAULT_TRUNC, zak_grid, zak_values

ONB_TOL = 1e-6
FRAME_THRESHOLD = 1e-4
ZERO_THRESHOLD = 1e-6
REFINE_TOL = 1e-4
PAIR_TOL = 1e-15
ZERO_CERT_TOL = 1e-13

VERDICTS = ("frame", "not_frame", "onb", "inconclusive")


def _check_alpha(alpha):
    if not alpha > 0:
        raise ConfigError("alpha must be positive")


def _bounds_on_grid(g: WindowSpec, alpha: float, r: int, s: int, M: int):
    Z = zak_grid(g, alpha, r, s, M)
    a2 = alpha**2 * Z.abs2()
    imin = np.unravel_index(np.argmin(a2), a2.shape)
    loc = [float(Z.x1[imin[0]]), float(Z.x2[imin[1]]), float(Z.w1[imin[2]]), float(Z.w2[imin[3]])]
    return float(a2.min()), float(a2.max()), loc, Z


def optimal_frame_bounds(g: WindowSpec, alpha: float, r: int = 16, s: int = 16, M: int = DEFAULT_TRUNC,
                         refine: bool = False, max_refinements: int = 3) -> FrameBounds:
    _check_alpha(alpha)
    A, B, loc, Z = _bounds_on_grid(g, alpha, r, s, M)
    history = [{"grid": [r, s], "A": A, "B": B}]
    if refine:
        for _ in range(max_refinements):
            r, s = 2 * r, 2 * s
            A2, B2, loc2, Z = _bounds_on_grid(g, alpha, r, s, M)
            history.append({"grid": [r, s], "A": A2, "B": B2})
            done = abs(A2 - A) < REFINE_TOL and abs(B2 - B) < REFINE_TOL
            A, B, loc = A2, B2, loc2
            if done:
                break
    return FrameBounds(A, B, "zak", {
        "grid": [r, s], "trunc": M, "min_location": loc, "refinements": history, "tail": Z.tail,
    })


def pair_partner(m: int) -> int:
    # at x = alpha/2 the exponent (m - 1/2)^2 is invariant under m -> 1 - m
    return 1 - m


def pair_complete_range(M: int) -> np.ndarray:
    """{-M, ..., M+1}: closed under m -> 1 - m."""
    return np.arange(-M, M + 2)


def gaussian_zak_critical_value(alpha: float, M: int = 8, m_range=None) -> dict:
    """Z of exp(-pi|x|^2) at x = (alpha/2, alpha/2), w = (1/(2 alpha), 1/(2 alpha))."""
    _check_alpha(alpha)
    if M < 1:
        raise ConfigError("truncation must be at least 1")
    m = np.asarray(pair_complete_range(M) if m_range is None else m_range)
    g = WindowSpec("gaussian")
    x = alpha / 2
    w = 1 / (2 * alpha)
    value = zak_values(g, alpha, [x], [x], [w], [w], m, m)[0, 0, 0, 0]

    # each 2-D term, then sum each (m1, m2) with its partner (1 - m1, m2)
    ms = set(int(v) for v in m)
    paired = True
    worst = 0.0
    for m1 in ms:
        p1 = pair_partner(m1)
        if p1 not in ms:
            paired = False
            continue
        if m1 > p1:
            continue
        for m2 in ms:
            s = _term(alpha, x, w, m1, m2) + _term(alpha, x, w, p1, m2)
            worst = max(worst, float(qabs(s)))
    paired = paired and worst <= PAIR_TOL
    return {
        "alpha": alpha,
        "value": [float(v) for v in value],
        "abs": float(qabs(value)),
        "paired_cancellation": bool(paired),
        "max_pair_sum": worst,
        "range": [int(m.min()), int(m.max())],
    }


def _term(alpha, x, w, m1, m2):
    amp = math.exp(-math.pi * ((x - alpha * m1) ** 2 + (x - alpha * m2) ** 2))
    left = exp_unit(2 * math.pi * alpha * m2 * w, "j")
    right = exp_unit(2 * math.pi * alpha * m1 * w, "i")
    return qmul(left * amp, right)


@dataclass
class FrameDecision:
    verdict: str
    bounds: FrameBounds
    evidence: dict = field(default_factory=dict)
    window: str = ""
    alpha: float = 1.0

    def to_dict(self) -> dict:
        ev = self.evidence
        return {
            "window": self.window,
            "alpha": self.alpha,
            "verdict": self.verdict,
            "A": self.bounds.A,
            "B": self.bounds.B,
            "evidence": {
                "grid": ev.get("grid"),
                "trunc": ev.get("trunc"),
                "min_location": ev.get("min_location"),
                "refinements": ev.get("refinements", []),
                **{k: v for k, v in ev.items() if k not in ("grid", "trunc", "min_location", "refinements")},
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def frame_decision(g: WindowSpec, alpha: float, r: int = 8, s: int = 8, M: int = DEFAULT_TRUNC,
                   onb_tol: float = ONB_TOL, frame_threshold: float = FRAME_THRESHOLD,
                   zero_threshold: float = ZERO_THRESHOLD) -> FrameDecision:
    _check_alpha(alpha)
    runs = []
    for k in range(3):
        rr, ss = r * 2**k, s * 2**k
        A, B, loc, Z = _bounds_on_grid(g, alpha, rr, ss, M)
        onb_dev = float(np.max(np.abs(alpha**2 * Z.abs2() - 1.0)))
        runs.append({"grid": [rr, ss], "A": A, "B": B, "min_location": loc, "onb_deviation": onb_dev})
    last = runs[-1]
    bounds = FrameBounds(last["A"], last["B"], "zak", {"grid": last["grid"], "trunc": M})
    evidence = {"grid": last["grid"], "trunc": M, "min_location": last["min_location"],
                "refinements": runs, "note": "bounds are alpha^2 inf/sup |Zg|^2"}

    if g.kind == "gaussian":
        cert = gaussian_zak_critical_value(alpha, max(M, 8))
        evidence["certificate"] = cert
        if cert["abs"] <= ZERO_CERT_TOL and cert["paired_cancellation"]:
            evidence["min_location"] = [alpha / 2, alpha / 2, 1 / (2 * alpha), 1 / (2 * alpha)]
            return FrameDecision("not_frame", FrameBounds(0.0, last["B"], "zak", bounds.metadata),
                                 evidence, g.kind, alpha)

    if all(run["onb_deviation"] <= onb_tol for run in runs):
        verdict = "onb"
    elif all(run["A"] >= frame_threshold for run in runs[-2:]):
        verdict = "frame"
    elif all(run["A"] < zero_threshold for run in runs[-2:]) and runs[-1]["A"] <= runs[-2]["A"]:
        verdict = "not_frame"
    else:
        verdict = "inconclusive"
    return FrameDecision(verdict, bounds, evidence, g.kind, alpha)


def continuity_modulus_probe(g: WindowSpec, alpha: float, delta: float, samples: int = 64,
                             seed: int = 0, M: int = DEFAULT_TRUNC, levels: int = 40) -> dict:
    """Max |Z g(p) - Z g(p')| over |p - p'| <= delta on a fixed dyadic ladder of offsets.

    Offsets are ``2^-k * u`` for fixed random unit directions ``u``; only rungs
    not longer than ``delta`` are used, so shrinking ``delta`` only drops rungs.
    """
    _check_alpha(alpha)
    if delta < 0:
        raise ConfigError("delta must be nonnegative")
    rng = np.random.default_rng(seed)
    pts = rng.random((samples, 4)) * np.array([alpha, alpha, 1 / alpha, 1 / alpha])
    dirs = rng.standard_normal((samples, 4))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    rungs = [2.0**-k for k in range(levels) if 2.0**-k <= delta]
    m = np.arange(-M, M + 1)
    worst = 0.0
    for p, u in zip(pts, dirs):
        z0 = zak_values(g, alpha, [p[0]], [p[1]], [p[2]], [p[3]], m, m)[0, 0, 0, 0]
        for t in rungs:
            q = p + t * u
            z1 = zak_values(g, alpha, [q[0]], [q[1]], [q[2]], [q[3]], m, m)[0, 0, 0, 0]
            worst = max(worst, float(qabs(z1 - z0)))
    return {"max_variation": worst, "delta": delta, "samples": samples, "rungs": len(rungs)}


def onb_deviation(g: WindowSpec, alpha: float, r: int = 16, s: int = 16, M: int = DEFAULT_TRUNC) -> float:
    Z = zak_grid(g, alpha, r, s, M)
    return float(np.max(np.abs(alpha**2 * qabs2(Z.values) - 1.0)))
