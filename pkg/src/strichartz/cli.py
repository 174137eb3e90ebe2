"""Command-line entry point: ``strichartz <command> [options]``.

Every command prints (or writes to ``--out``) a JSON document with
``schema: 1`` or a CSV table.  Exit status: 0 when the command's check
passes, 2 when it fails, 1 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import counterexamples as cx
from .errors import StrichartzError
from .exponents import (
    ExponentPoint,
    SigmaContext,
    WeakCaseParams,
    classify_pair,
    corollary_schrodinger,
    corollary_wave,
    parse_number,
    reciprocal,
    region_csv,
    region_samples,
    theorem_hypotheses,
)
from .extremizer import PARAM_NAMES, PRESETS, coordinate_search, preset
from .grid import SpatialGrid, make_test_function
from .propagators import PropagatorKind, dispersive_check
from .reporting import csv_table, dumps, fmt, loglog_slope
from .summation import DyadicBounds, choose_q1_q2, min_family, verify_summation

EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raise instead of exiting so usage errors map to exit code 1."""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class Result:
    doc: dict
    passed: bool = True
    header: Sequence[str] | None = None
    rows: list = field(default_factory=list)
    raw_csv: str | None = None

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            return dumps({**self.doc, "pass": self.passed})
        if self.raw_csv is not None:
            return self.raw_csv
        if self.header is not None:
            return csv_table(self.header, self.rows)
        flat = {**self.doc, "pass": self.passed}
        lines = ["key,value"] + [f"{k},{_scalar(v)}" for k, v in sorted(flat.items()) if _is_scalar(v)]
        return "\n".join(lines) + "\n"


def _is_scalar(v) -> bool:
    return isinstance(v, (bool, int, float, str, Fraction))


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return fmt(v)


def _num(text: str):
    try:
        return parse_number(text)
    except StrichartzError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _exact(v) -> str | float:
    """Exact rationals as ``"p/q"`` strings, floats unchanged."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


# -- commands --------------------------------------------------------------


def cmd_classify(a) -> Result:
    p = ExponentPoint.from_exponents(a.q, a.r)
    cls = classify_pair(p, SigmaContext(a.sigma))
    doc = {"sigma": _exact(a.sigma), "inv_q": _exact(p.inv_q), "inv_r": _exact(p.inv_r), **cls.as_dict()}
    return Result(doc)


def cmd_region(a) -> Result:
    rows = region_samples(a.sigma, a.n)
    return Result({"sigma": _exact(a.sigma), "n": a.n, "points": len(rows)}, raw_csv=region_csv(rows))


def cmd_check_theorem(a) -> Result:
    w = WeakCaseParams(a.theta, a.theta_tilde, reciprocal(a.q), reciprocal(a.qtilde))
    rep = theorem_hypotheses(w, a.sigma)
    doc = {"sigma": _exact(a.sigma), **rep.as_dict()}
    if rep.verdict:
        c = choose_q1_q2(w.inv_q, w.inv_q_tilde_prime, a.sigma, w.theta, w.theta_tilde)
        doc["route"] = c.route
        if c.route == "split":
            doc.update(q1=_exact(c.q1), q2=_exact(c.q2), beta1=_exact(c.beta1), beta2=_exact(c.beta2))
    return Result(doc, rep.verdict)


def cmd_corollary(a) -> Result:
    doc = {"equation": a.equation, "d": a.d}
    if a.equation == "schrodinger":
        ok = corollary_schrodinger(a.d, a.q, a.r, a.qtilde, a.rtilde)
    else:
        w = corollary_wave(a.d, a.q, a.r, a.qtilde, a.rtilde)
        ok = w.verdict
        doc.update(gamma=_exact(w.gamma), gamma_tilde=_exact(w.gamma_tilde))
    doc["verdict"] = ok
    return Result(doc, ok)


def _pow2_at_least(x: float) -> int:
    return 1 << max(5, math.ceil(math.log2(x)))


def _dispersive_setup(equation: str, d: int, tmax: float):
    if equation == "schrodinger":
        if d == 1:
            L = max(20.0, 6.0 * tmax)
            g = SpatialGrid(1, _pow2_at_least(2 * L / 0.3), L)
            return PropagatorKind.schrodinger(), make_test_function("gaussian", g, width=1.0), 1.0
        if d == 2:
            L = max(20.0, 3.2 * tmax)
            g = SpatialGrid(2, _pow2_at_least(2 * L / 0.625), L)
            return PropagatorKind.schrodinger(), make_test_function("gaussian", g, width=2.0), 2.0
        raise UsageError("dispersive schrodinger supports --d 1 or 2")
    if d != 2:
        raise UsageError("dispersive wave supports --d 2")
    L = max(100.0, 7.0 * tmax)
    g = SpatialGrid(2, _pow2_at_least(2 * L / 1.37), L)
    return PropagatorKind.localized_half_wave(), make_test_function("annular_bump", g, normalize=True), None


def cmd_dispersive(a) -> Result:
    if not a.tmax >= 2:
        raise UsageError("--tmax must be at least 2")
    kind, f, width = _dispersive_setup(a.equation, a.d, a.tmax)
    times = [float(t) for t in np.geomspace(1.0, a.tmax, 7)]
    rep = dispersive_check(kind, f, times)
    doc = {"equation": a.equation, "d": a.d, "tmax": a.tmax, "sup": rep.sup, "final": rep.final}
    if a.equation == "schrodinger":
        limit = (4 * math.pi) ** (-a.d / 2)
        # exact Gaussian ratio: limit * (t^2 / (t^2 + w^4/4))^(d/4)
        exact = [limit * (t * t / (t * t + width**4 / 4)) ** (a.d / 4) for t in rep.times]
        err = max(abs(r - e) / e for r, e in zip(rep.ratios, exact))
        passed = err <= 1e-6 and rep.sup <= limit * (1 + 1e-12)
        doc.update(limit=limit, max_rel_error=err)
    else:
        tail = loglog_slope(rep.times[-3:], rep.ratios[-3:])
        passed = all(r > 0 and math.isfinite(r) for r in rep.ratios) and tail <= 0.05
        doc.update(tail_slope=tail)
    return Result(doc, passed, raw_csv=rep.to_csv())


def cmd_gaussian(a) -> Result:
    if not a.tmax > 10:
        raise UsageError("--tmax must exceed 10")
    exp = cx.GaussianExperiment(a.d, float(a.r), tuple(float(t) for t in np.geomspace(10, a.tmax, 11)))
    v = exp.verdict()
    doc = {"d": a.d, "r": float(a.r), **v.as_dict()}
    passed = v.passed
    if a.d >= 3 and a.r == Fraction(2 * a.d, a.d - 2):
        reps = {T: cx.gaussian_endpoint_divergence(a.d, T) for T in (10.0, 100.0, 1000.0)}
        inc1 = reps[100.0].value - reps[10.0].value
        inc2 = reps[1000.0].value - reps[100.0].value
        log_growth = abs(inc1 - inc2) / inc2 < 0.05
        doc.update(
            endpoint_increments=[inc1, inc2],
            endpoint_log_growth=log_growth,
            forcing_norm=reps[10.0].forcing_norm,
        )
        passed = passed and log_growth
    return Result(doc, passed, raw_csv=exp.to_csv())


def cmd_wave(a) -> Result:
    r = float(a.r)
    cfg = cx.WaveProfileConfig(a.d, c0=a.c0)
    times = [100.0, 200.0, 400.0, 800.0]
    growth = cx.wave_norm_growth(cfg, a.d, r, times)
    cone = cx.cone_report(cfg, [100.0, 300.0, 1000.0])
    alpha = (a.d - 1) * (Fraction(1, 2) - reciprocal(a.r))
    verdict = cx.lorentz_divergence_predicate(alpha, 1 / alpha, 2)
    passed = (
        growth.verdict.passed
        and cone.theta_psi_0 > 0
        and min(cone.min_abs_I_plus) > 0
        and cone.I_minus_exponent <= -0.95
        and cone.II_exponent <= -0.95
        and verdict is cx.Divergence.DIVERGES
    )
    doc = {
        "d": a.d,
        "r": r,
        **growth.verdict.as_dict(),
        "alpha": _exact(alpha),
        "critical_line_p2": verdict.value,
        "cone": cone.as_dict(),
    }
    return Result(doc, passed, raw_csv=growth.to_csv())


def cmd_summation(a) -> Result:
    b = DyadicBounds(1.0, a.eps1, a.q1, 1.0, a.eps2, a.q2)
    fam = min_family(range(-a.jmax, a.jmax + 1), eps1=float(a.eps1), eps2=float(a.eps2))
    rep = verify_summation(fam, b)
    doc = {
        "theta": _exact(rep.theta),
        "q": _exact(rep.q),
        "weak_norm": rep.weak_norm,
        "bound": rep.bound,
        "C_measured": rep.C_measured,
        "split_levels": list(rep.split_levels),
    }
    return Result(doc, math.isfinite(rep.C_measured))


def cmd_search(a) -> Result:
    p = preset(a.preset, a.T)
    res = coordinate_search(p, a.iters, a.seed)
    doc = {
        "preset": a.preset,
        "T": a.T,
        "seed": a.seed,
        "iterations": a.iters,
        "best_ratio": res.best_ratio,
        "best_params": dict(zip(PARAM_NAMES, res.best_params)),
    }
    ratios = [r for _, r, _ in res.trace]
    monotone = all(y >= x for x, y in zip(ratios, ratios[1:]))
    return Result(doc, monotone, raw_csv=res.to_csv())


# -- parser ----------------------------------------------------------------


def _common(sp: argparse.ArgumentParser, default_format: str = "json") -> None:
    sp.add_argument("--out", help="write output to this file instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="strichartz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("classify", help="locate (1/r, 1/q) relative to the admissible region")
    sp.add_argument("--sigma", type=_num, required=True)
    sp.add_argument("--q", type=_num, required=True)
    sp.add_argument("--r", type=_num, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("region", help="classify an n x n lattice of exponent pairs (CSV)")
    sp.add_argument("--sigma", type=_num, required=True)
    sp.add_argument("--n", type=int, default=21)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_region)

    sp = sub.add_parser("check-theorem", help="check the weak-type hypotheses and pick (q1, q2)")
    sp.add_argument("--sigma", type=_num, required=True)
    sp.add_argument("--theta", type=_num, required=True)
    sp.add_argument("--theta-tilde", type=_num, required=True)
    sp.add_argument("--q", type=_num, required=True)
    sp.add_argument("--qtilde", type=_num, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_check_theorem)

    sp = sub.add_parser("corollary", help="Schrodinger or wave exponent conditions")
    sp.add_argument("equation", choices=("schrodinger", "wave"))
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--q", type=_num, required=True)
    sp.add_argument("--r", type=_num, required=True)
    sp.add_argument("--qtilde", type=_num, required=True)
    sp.add_argument("--rtilde", type=_num, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_corollary)

    sp = sub.add_parser("dispersive", help="dispersive ratios on a grid up to --tmax")
    sp.add_argument("equation", choices=("schrodinger", "wave"))
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--tmax", type=float, default=100.0)
    _common(sp)
    sp.set_defaults(func=cmd_dispersive)

    sp = sub.add_parser("gaussian-counterexample", help="weak-norm decay of the Gaussian Duhamel profile")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=_num, required=True)
    sp.add_argument("--tmax", type=float, default=100.0)
    _common(sp)
    sp.set_defaults(func=cmd_gaussian)

    sp = sub.add_parser("wave-necessary", help="shell-norm growth of the radial wave construction")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=_num, required=True)
    sp.add_argument("--c0", type=float, default=0.1)
    _common(sp)
    sp.set_defaults(func=cmd_wave)

    sp = sub.add_parser("summation-demo", help="dyadic summation on min(2^(eps1 j), 2^(-eps2 j)) steps")
    sp.add_argument("--eps1", type=_num, required=True)
    sp.add_argument("--eps2", type=_num, required=True)
    sp.add_argument("--q1", type=_num, required=True)
    sp.add_argument("--q2", type=_num, required=True)
    sp.add_argument("--jmax", type=int, default=60)
    _common(sp)
    sp.set_defaults(func=cmd_summation)

    sp = sub.add_parser("search", help="seeded coordinate search over an input family")
    sp.add_argument("--preset", choices=PRESETS, required=True)
    sp.add_argument("--iters", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--T", type=float, default=20.0)
    _common(sp)
    sp.set_defaults(func=cmd_search)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result: Result = args.func(args)
    except SystemExit as exc:  # --help
        return EXIT_PASS if exc.code in (0, None) else EXIT_USAGE
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except (StrichartzError, ValueError, ZeroDivisionError) as exc:
        print(f"strichartz: error: {exc}", file=stderr)
        return EXIT_USAGE
    text = result.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_PASS if result.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
