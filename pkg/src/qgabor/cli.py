"""Command-line front end: ``qgabor <command> [options]``.

Exit status is 0 on success, 1 when a computation or file check fails and
2 for usage errors. Every diagnostic goes to stderr prefixed with ``error:``.
"""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import density, gabor, qft, verify, wqft, zak
from .field import ConfigError, Grid2, QField, QF2Error, WindowSpec, read_field, sample_window, write_field
from .report import emit_report

DESK_N = 128
DESK_LO, DESK_HI = -8.0, 8.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=_positive_int, default=1, help="cap on internal parallelism")
    p.add_argument("--format", choices=("json", "csv"), default=None, help="report format")
    return p


def _window_opts(p, grid=True):
    p.add_argument("--window", choices=("gaussian", "box", "hat"), default="gaussian")
    p.add_argument("--alpha", type=_positive_float, default=1.0, help="lattice step (beta = 1/alpha)")
    if grid:
        p.add_argument("--n", type=_positive_int, default=DESK_N, help="samples per axis")
        p.add_argument("--lo", type=float, default=DESK_LO)
        p.add_argument("--hi", type=float, default=DESK_HI)


def _zak_opts(p):
    p.add_argument("--r", type=_positive_int, default=32, help="x samples per axis")
    p.add_argument("--s", type=_positive_int, default=32, help="omega samples per axis")
    p.add_argument("--trunc", type=_positive_int, default=zak.DEFAULT_TRUNC)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _Parser(prog="qgabor", description="Quaternionic Fourier, Gabor and Zak analysis.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("qft", parents=[common], help="forward or inverse QFT of a QF2 file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--inverse", action="store_true")

    p = sub.add_parser("wqft", parents=[common], help="windowed QFT, exported as one b-slice")
    p.add_argument("--in", dest="inp", required=True)
    _window_opts(p, grid=False)
    p.add_argument("--b-step", type=_positive_int, default=4, help="b lattice stride in grid samples")
    p.add_argument("--b", type=float, nargs=2, default=(0.0, 0.0), metavar=("B1", "B2"),
                   help="slice position (nearest lattice point)")
    p.add_argument("--out", default="-")

    p = sub.add_parser("gabor", help="Gabor analysis, synthesis and frame bounds")
    gsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = gsub.add_parser("analyze", parents=[common])
    q.add_argument("--in", dest="inp", required=True)
    _window_opts(q, grid=False)
    q.add_argument("--mode", choices=gabor.MODES, default="quaternionic")
    q.add_argument("--out", default="-")
    q = gsub.add_parser("synthesize", parents=[common])
    q.add_argument("--coeffs", required=True, help="coefficient CSV from 'gabor analyze'")
    _window_opts(q)
    q.add_argument("--out", required=True)
    q = gsub.add_parser("framebounds", parents=[common])
    _window_opts(q)
    q.add_argument("--trials", type=_positive_int, default=8)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--mode", choices=gabor.MODES, default="quaternionic")
    q.add_argument("--out", default="-")

    p = sub.add_parser("zak", help="Zak transform sample export")
    zsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = zsub.add_parser("grid", parents=[common])
    _window_opts(q, grid=False)
    _zak_opts(q)
    q.add_argument("--out", default="-")
    q = zsub.add_parser("slice", parents=[common])
    _window_opts(q, grid=False)
    _zak_opts(q)
    q.add_argument("--x-index", type=int, nargs=2, default=(0, 0), metavar=("A1", "A2"))
    q.add_argument("--out", default="-")

    p = sub.add_parser("density", help="critical-density frame certificates")
    dsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("framebounds", "decide"):
        q = dsub.add_parser(name, parents=[common])
        _window_opts(q, grid=False)
        _zak_opts(q)
        q.add_argument("--out", default="-")
        if name == "decide":
            q.set_defaults(r=8, s=8)
    q = dsub.add_parser("gauss-zero", parents=[common])
    q.add_argument("--alpha", type=_positive_float, default=1.0)
    q.add_argument("--trunc", type=_positive_int, default=8)
    q.add_argument("--out", default="-")

    p = sub.add_parser("uncertainty", parents=[common], help="Heisenberg products of a field")
    p.add_argument("--in", dest="inp", help="QF2 input (default: sampled window)")
    _window_opts(p)
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default="-")
    return top


def _grid(args) -> Grid2:
    if not args.hi > args.lo:
        raise ConfigError("--hi must exceed --lo")
    return Grid2.square(args.n, args.lo, args.hi)


def _spec(args) -> WindowSpec:
    return WindowSpec(args.window, args.alpha)


def _fmt(args, default: str) -> str:
    return args.format or default


def _cmd_qft(args) -> int:
    f = read_field(args.inp)
    write_field(args.out, qft.qft_inverse(f) if args.inverse else qft.qft_forward(f))
    return 0


def _cmd_wqft(args) -> int:
    f = read_field(args.inp)
    g = sample_window(_spec(args), f.grid)
    b1, b2 = wqft.b_axes(f.grid, args.b_step)
    i1 = int(np.argmin(np.abs(b1 - args.b[0])))
    i2 = int(np.argmin(np.abs(b2 - args.b[1])))
    coeffs = wqft.wqft(f, g, (b1[i1:i1 + 1], b2[i2:i2 + 1]))
    rows = []
    for a, w1 in enumerate(coeffs.w1):
        for c, w2 in enumerate(coeffs.w2):
            rows.append([float(w1), float(w2), *map(float, coeffs.values[0, 0, a, c])])
    emit_report({"header": ["ω1", "ω2", "w", "x", "y", "z"], "rows": rows}, "csv", args.out)
    return 0


def _coeff_rows(c: gabor.GaborCoefficients):
    m1, m2 = (np.arange(lo, hi + 1) for lo, hi in c.m_range)
    n1, n2 = (np.arange(lo, hi + 1) for lo, hi in c.n_range)
    vals = c.values
    rows = []
    for a, ma in enumerate(m1):
        for b, mb in enumerate(m2):
            for p, na in enumerate(n1):
                for q, nb in enumerate(n2):
                    v = vals[a, b, p, q]
                    tail = [float(v)] if c.mode == "scalar" else [float(t) for t in v]
                    rows.append([int(ma), int(mb), int(na), int(nb), *tail])
    header = ["m1", "m2", "n1", "n2", "w"] + ([] if c.mode == "scalar" else ["x", "y", "z"])
    return header, rows


def _read_coeffs(path: str) -> gabor.GaborCoefficients:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:5] != ["m1", "m2", "n1", "n2", "w"]:
        raise ConfigError(f"{path}: not a Gabor coefficient CSV")
    scalar = len(rows[0]) == 5
    data = np.array([[float(t) for t in r] for r in rows[1:]])
    if data.size == 0:
        raise ConfigError(f"{path}: no coefficients")
    idx = data[:, :4].astype(int)
    lo, hi = idx.min(axis=0), idx.max(axis=0)
    shape = tuple(hi - lo + 1)
    vals = np.zeros(shape + (() if scalar else (4,)))
    pos = tuple((idx - lo).T)
    vals[pos] = data[:, 4] if scalar else data[:, 4:8]
    return gabor.GaborCoefficients(vals, "scalar" if scalar else "quaternionic",
                                   ((lo[0], hi[0]), (lo[1], hi[1])), ((lo[2], hi[2]), (lo[3], hi[3])))


def _cmd_gabor(args) -> int:
    beta = 1.0 / args.alpha
    if args.action == "analyze":
        f = read_field(args.inp)
        sysg = gabor.GaborSystem(sample_window(_spec(args), f.grid), args.alpha, beta)
        c = gabor.analysis(f, sysg, args.mode)
        if "warning" in c.metadata:
            print(f"warning: {c.metadata['warning']}", file=sys.stderr)
        header, rows = _coeff_rows(c)
        emit_report({"header": header, "rows": rows}, "csv", args.out)
        return 0
    grid = _grid(args)
    if args.action == "synthesize":
        c = _read_coeffs(args.coeffs)
        sysg = gabor.GaborSystem(sample_window(_spec(args), grid), args.alpha, beta, c.m_range, c.n_range)
        write_field(args.out, gabor.synthesis(c, sysg))
        return 0
    sysg = gabor.GaborSystem(sample_window(_spec(args), grid), args.alpha, beta)
    fb = gabor.empirical_frame_bounds(sysg, trials=args.trials, seed=args.seed, mode=args.mode)
    if max(abs(fb.A - 1), abs(fb.B - 1)) <= density.ONB_TOL:
        verdict = "onb"
    elif fb.A >= density.FRAME_THRESHOLD:
        verdict = "frame"
    elif fb.A < density.ZERO_THRESHOLD:
        verdict = "not_frame"
    else:
        verdict = "inconclusive"
    out = {"window": args.window, "alpha": args.alpha, "beta": beta, "A": fb.A, "B": fb.B,
           "verdict": verdict, "method": fb.method, "mode": args.mode, "trials": args.trials, "seed": args.seed}
    if _fmt(args, "json") == "csv":
        emit_report({"header": list(out), "rows": [list(out.values())]}, "csv", args.out)
    else:
        emit_report(out, "json", args.out)
    return 0


def _cmd_zak(args) -> int:
    Z = zak.zak_grid(_spec(args), args.alpha, args.r, args.s, args.trunc)
    if args.action == "slice":
        a1, a2 = args.x_index
        if not (0 <= a1 < len(Z.x1) and 0 <= a2 < len(Z.x2)):
            raise ConfigError(f"--x-index must lie in [0, {len(Z.x1)}) x [0, {len(Z.x2)})")
        rows = zak.zak_slice(Z, a1, a2).tolist()
        emit_report({"header": ["ω1", "ω2", "absZ2"], "rows": rows}, "csv", args.out)
        return 0
    X1, X2, W1, W2 = np.meshgrid(Z.x1, Z.x2, Z.w1, Z.w2, indexing="ij")
    table = np.column_stack([X1.ravel(), X2.ravel(), W1.ravel(), W2.ravel(), Z.abs2().ravel()])
    emit_report({"header": ["x1", "x2", "ω1", "ω2", "absZ2"], "rows": table.tolist()}, "csv", args.out)
    return 0


def _cmd_density(args) -> int:
    if args.action == "gauss-zero":
        res = density.gaussian_zak_critical_value(args.alpha, args.trunc)
        emit_report(res, "json", args.out)
        ok = res["abs"] <= density.ZERO_CERT_TOL and res["paired_cancellation"]
        if not ok:
            print(f"error: |Z| = {res['abs']:.3e} exceeds {density.ZERO_CERT_TOL:g}", file=sys.stderr)
        return 0 if ok else 1
    if args.action == "decide":
        dec = density.frame_decision(_spec(args), args.alpha, args.r, args.s, args.trunc)
        emit_report(dec.to_dict(), "json", args.out)
        return 0
    fb = density.optimal_frame_bounds(_spec(args), args.alpha, args.r, args.s, args.trunc)
    verdict = ("onb" if max(abs(fb.A - 1), abs(fb.B - 1)) <= density.ONB_TOL
               else "frame" if fb.A >= density.FRAME_THRESHOLD
               else "not_frame" if fb.A < density.ZERO_THRESHOLD else "inconclusive")
    out = {"window": args.window, "alpha": args.alpha, "A": fb.A, "B": fb.B, "verdict": verdict,
           "evidence": fb.metadata}
    emit_report(out, "json", args.out)
    return 0


def _cmd_uncertainty(args) -> int:
    f = read_field(args.inp) if args.inp else sample_window(_spec(args), _grid(args))
    rep = qft.uncertainty(f)
    out = {"delta_x": list(rep.delta_x), "delta_omega": list(rep.delta_omega),
           "products": list(rep.products), "bound": rep.bound,
           "satisfied": all(p >= rep.bound - 1e-6 for p in rep.products)}
    emit_report(out, "json", args.out)
    return 0


def _cmd_verify(args) -> int:
    checks = verify.run_checks(args.seed)
    text = verify.render(checks, args.seed)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {
    "qft": _cmd_qft, "wqft": _cmd_wqft, "gabor": _cmd_gabor, "zak": _cmd_zak,
    "density": _cmd_density, "uncertainty": _cmd_uncertainty, "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    # --threads is validated but computations here are single-threaded
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QF2Error, OSError, ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
