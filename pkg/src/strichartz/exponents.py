"""Exponent arithmetic for (inhomogeneous) Strichartz estimates.

Exponents are handled through their reciprocals so that ``q = inf`` is the
exact value ``0`` and the admissible/critical lines are linear.  Inputs given
as ``int`` or :class:`fractions.Fraction` are kept exact; as soon as a float
enters a computation, line membership is decided with the tolerance
:data:`TOL`.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError

Number = Union[int, float, Fraction]

TOL = 1e-12


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _coerce(x):
    if _exact(x):
        return Fraction(x)
    return float(x)


def _eq(a, b) -> bool:
    if _exact(a) and _exact(b):
        return a == b
    return abs(float(a) - float(b)) <= TOL


def _lt(a, b) -> bool:
    """Strict ``a < b``; for floats the margin must exceed ``TOL``."""
    if _exact(a) and _exact(b):
        return a < b
    return float(a) < float(b) - TOL


def _le(a, b) -> bool:
    if _exact(a) and _exact(b):
        return a <= b
    return float(a) <= float(b) + TOL


def reciprocal(x: Number) -> Number:
    """Return ``1/x`` with ``1/inf = 0`` (exact when ``x`` is rational)."""
    if isinstance(x, float) and math.isinf(x):
        if x < 0:
            raise DomainError("exponent must be positive")
        return Fraction(0)
    if x <= 0:
        raise DomainError(f"exponent must be positive, got {x!r}")
    if _exact(x):
        return 1 / Fraction(x)
    return 1.0 / float(x)


def parse_number(text: str) -> Number:
    """Parse ``"3/2"``, ``"inf"``, ``"4"`` or ``"0.25"`` into a number.

    Integers and ratios stay exact.
    """
    s = text.strip().lower()
    if s in ("inf", "infinity", "oo", "+inf"):
        return math.inf
    try:
        return Fraction(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError as exc:
        raise DomainError(f"cannot parse number {text!r}") from exc


@dataclass(frozen=True)
class ExponentPoint:
    """A pair ``(1/q, 1/r)`` with ``q >= 1`` and ``r >= 2``."""

    inv_q: Number
    inv_r: Number

    def __post_init__(self):
        iq, ir = _coerce(self.inv_q), _coerce(self.inv_r)
        for name, v in (("inv_q", iq), ("inv_r", ir)):
            if isinstance(v, float) and not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if not (0 <= iq <= 1):
            raise DomainError(f"inv_q={iq} outside [0, 1]")
        if not (0 <= ir <= Fraction(1, 2)):
            raise DomainError(f"inv_r={ir} outside [0, 1/2]")
        object.__setattr__(self, "inv_q", iq)
        object.__setattr__(self, "inv_r", ir)

    @classmethod
    def from_exponents(cls, q: Number, r: Number) -> "ExponentPoint":
        return cls(reciprocal(q), reciprocal(r))

    @property
    def q(self) -> Number:
        return math.inf if self.inv_q == 0 else 1 / self.inv_q

    @property
    def r(self) -> Number:
        return math.inf if self.inv_r == 0 else 1 / self.inv_r


class Equation(enum.Enum):
    SCHRODINGER = "schrodinger"
    WAVE = "wave"
    ABSTRACT = "abstract"


@dataclass(frozen=True)
class SigmaContext:
    """Decay rate ``sigma`` of the dispersive estimate and where it comes from."""

    sigma: Number
    equation: Equation = Equation.ABSTRACT
    d: int | None = None

    def __post_init__(self):
        s = _coerce(self.sigma)
        if not s > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        object.__setattr__(self, "sigma", s)
        if self.equation is Equation.SCHRODINGER:
            if self.d is None or self.d < 1 or s != Fraction(self.d, 2):
                raise DomainError("Schrodinger context needs d >= 1 and sigma = d/2")
        elif self.equation is Equation.WAVE:
            if self.d is None or self.d < 2 or s != Fraction(self.d - 1, 2):
                raise DomainError("wave context needs d >= 2 and sigma = (d-1)/2")

    @classmethod
    def schrodinger(cls, d: int) -> "SigmaContext":
        return cls(Fraction(d, 2), Equation.SCHRODINGER, d)

    @classmethod
    def wave(cls, d: int) -> "SigmaContext":
        return cls(Fraction(d - 1, 2), Equation.WAVE, d)

    @classmethod
    def abstract(cls, sigma: Number) -> "SigmaContext":
        return cls(sigma)


@dataclass(frozen=True)
class RegionClass:
    sharp_admissible: bool
    acceptable: bool
    critical: bool
    outside: bool

    def as_dict(self) -> dict:
        return asdict(self)


def classify_pair(p: ExponentPoint, ctx: SigmaContext | Number) -> RegionClass:
    """Locate ``(1/r, 1/q)`` relative to the admissible line and acceptable region.

    ``sharp_admissible``: ``q, r >= 2``, ``1/q = sigma (1/2 - 1/r)`` and
    ``(q, r, sigma) != (2, inf, 1)``.
    ``acceptable``: ``1 <= q < inf`` with ``1/q < 2 sigma (1/2 - 1/r)``, or
    ``(q, r) = (inf, 2)``.
    ``critical``: ``q < inf`` and ``1/q = 2 sigma (1/2 - 1/r)``.
    """
    sigma = ctx.sigma if isinstance(ctx, SigmaContext) else SigmaContext(ctx).sigma
    iq, ir = p.inv_q, p.inv_r
    gap = Fraction(1, 2) - ir if _exact(ir) else 0.5 - ir

    excluded = _eq(iq, Fraction(1, 2)) and _eq(ir, 0) and _eq(sigma, 1)
    sharp = _le(iq, Fraction(1, 2)) and _eq(iq, sigma * gap) and not excluded

    finite_q = not _eq(iq, 0)
    acceptable = (finite_q and _lt(iq, 2 * sigma * gap)) or (
        _eq(iq, 0) and _eq(ir, Fraction(1, 2))
    )
    critical = finite_q and _eq(iq, 2 * sigma * gap)
    outside = not (sharp or acceptable or critical)
    return RegionClass(sharp, acceptable, critical, outside)


def scaling_gap_schrodinger(p: ExponentPoint, pt: ExponentPoint, d: int) -> Number:
    """``1/q + 1/q~ - (d/2)(1 - 1/r - 1/r~)``; zero exactly on the scaling line."""
    if d < 1:
        raise DomainError("d must be >= 1")
    return p.inv_q + pt.inv_q - Fraction(d, 2) * (1 - p.inv_r - pt.inv_r)


@dataclass(frozen=True)
class NecessaryConditions:
    acceptable: bool
    acceptable_tilde: bool
    q_le_qtilde_prime: bool

    @property
    def all_hold(self) -> bool:
        return self.acceptable and self.acceptable_tilde and self.q_le_qtilde_prime


def necessary_conditions_schrodinger(
    p: ExponentPoint, pt: ExponentPoint, d: int
) -> NecessaryConditions:
    """Known necessary conditions for the inhomogeneous Schrodinger estimate."""
    if d < 1:
        raise DomainError("d must be >= 1")
    half = Fraction(1, 2)
    return NecessaryConditions(
        acceptable=_lt(p.inv_q, d * (half - p.inv_r)),
        acceptable_tilde=_lt(pt.inv_q, d * (half - pt.inv_r)),
        q_le_qtilde_prime=_le(p.inv_q, 1 - pt.inv_q),
    )


@dataclass(frozen=True)
class WeakCaseParams:
    """Interpolation parameters and temporal exponents of the weak-type estimate."""

    theta: Number
    theta_tilde: Number
    inv_q: Number
    inv_q_tilde: Number

    def __post_init__(self):
        for name in ("theta", "theta_tilde"):
            v = _coerce(getattr(self, name))
            if not (0 <= v <= 1):
                raise DomainError(f"{name}={v} outside [0, 1]")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "inv_q", _coerce(self.inv_q))
        object.__setattr__(self, "inv_q_tilde", _coerce(self.inv_q_tilde))

    @property
    def inv_q_tilde_prime(self) -> Number:
        return 1 - self.inv_q_tilde


@dataclass(frozen=True)
class TheoremReport:
    sigma_case: str
    case_ok: bool
    scaling_ok: bool
    strict_ok: bool
    tilde_relation_ok: bool
    order_ok: bool

    @property
    def verdict(self) -> bool:
        return (
            self.case_ok
            and self.scaling_ok
            and self.strict_ok
            and self.tilde_relation_ok
            and self.order_ok
        )

    def as_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict
        return out


def _sigma_case_ok(sigma, theta, theta_t) -> tuple[str, bool]:
    if _lt(sigma, 1):
        return "sigma<1", True
    if _eq(sigma, 1):
        return "sigma=1", _lt(theta, 1) and _lt(theta_t, 1)
    k = (sigma - 1) / sigma
    ok = _le(k * (1 - theta), 1 - theta_t) and _le(k * (1 - theta_t), 1 - theta)
    return "sigma>1", ok


def theorem_hypotheses(w: WeakCaseParams, sigma: Number) -> TheoremReport:
    """Check the hypotheses of the abstract weak-type inhomogeneous estimate.

    The three sigma-regimes constrain ``(theta, theta~)``; the exponents must
    satisfy ``sigma theta = 1/q < 1/q~' = 1 - sigma (theta~ - theta)/2`` with
    ``theta <= theta~``.
    """
    sigma = _coerce(sigma)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    th, tht = w.theta, w.theta_tilde
    label, case_ok = _sigma_case_ok(sigma, th, tht)
    inv_qtp = w.inv_q_tilde_prime
    return TheoremReport(
        sigma_case=label,
        case_ok=case_ok,
        scaling_ok=_eq(sigma * th, w.inv_q),
        strict_ok=_lt(w.inv_q, inv_qtp),
        tilde_relation_ok=_eq(inv_qtp, 1 - sigma * (tht - th) / 2),
        order_ok=_le(th, tht),
    )


def corollary_schrodinger(d: int, q: Number, r: Number, q_t: Number, r_t: Number) -> bool:
    """Exponent conditions under which the weak-type Schrodinger estimate holds."""
    if d < 1:
        raise DomainError("d must be >= 1")
    iq, ir, iqt, irt = (reciprocal(v) for v in (q, r, q_t, r_t))
    half = Fraction(1, 2)
    if not (_le(ir, half) and _le(irt, half) and _le(iq, 1) and _le(iqt, 1)):
        return False
    if d == 1:
        dim_ok = _lt(ir, half) and _lt(irt, half)
    elif d == 2:
        dim_ok = _lt(ir, half) and _lt(irt, half) and _lt(0, ir) and _lt(0, irt)
    else:
        dim_ok = _le((d - 2) * ir, d * irt) and _le((d - 2) * irt, d * ir)
    inv_qtp = 1 - iqt
    return (
        dim_ok
        and _eq(d * (half - ir), iq)
        and _lt(iq, inv_qtp)
        and _eq(inv_qtp, 1 - Fraction(d, 2) * (ir - irt))
        and _le(irt, ir)
    )


@dataclass(frozen=True)
class WaveCorollary:
    verdict: bool
    gamma: Number
    gamma_tilde: Number


def corollary_wave(d: int, q: Number, r: Number, q_t: Number, r_t: Number) -> WaveCorollary:
    """Exponent conditions for the weak-type wave estimate, with Besov regularities.

    ``1/q~'`` is always recomputed as ``1 - ((d-1)/2)(1/r - 1/r~)``.
    """
    if d < 2:
        raise DomainError("d must be >= 2")
    iq, ir, iqt, irt = (reciprocal(v) for v in (q, r, q_t, r_t))
    half = Fraction(1, 2)
    gamma = Fraction(d + 1, 2) * (half - ir)
    gamma_t = Fraction(d + 1, 2) * (half - irt)
    if not (_le(ir, half) and _le(irt, half) and _le(iq, 1) and _le(iqt, 1)):
        return WaveCorollary(False, gamma, gamma_t)
    if d == 2:
        dim_ok = _lt(ir, half) and _lt(irt, half)
    elif d == 3:
        dim_ok = _lt(ir, half) and _lt(irt, half) and _lt(0, ir) and _lt(0, irt)
    else:
        dim_ok = _le((d - 3) * ir, (d - 1) * irt) and _le((d - 3) * irt, (d - 1) * ir)
    inv_qtp = 1 - iqt
    ok = (
        dim_ok
        and _eq((d - 1) * (half - ir), iq)
        and _lt(iq, inv_qtp)
        and _eq(inv_qtp, 1 - Fraction(d - 1, 2) * (ir - irt))
    )
    return WaveCorollary(ok, gamma, gamma_t)


def beta(sigma: Number, theta: Number, theta_tilde: Number, inv_q: Number, inv_q_tilde: Number) -> Number:
    """Dyadic scaling exponent ``sigma (theta + theta~)/2 - 1/q~ - 1/q``."""
    return _coerce(sigma) * (_coerce(theta) + _coerce(theta_tilde)) / 2 - inv_q_tilde - inv_q


def region_samples(sigma: Number, n: int) -> list[tuple[Number, Number, RegionClass]]:
    """Classify an ``n x n`` lattice of ``(1/r, 1/q)`` in ``[0, 1/2] x [0, 1]``.

    Rows are ordered with ``1/r`` as the outer (slow) index.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    ctx = sigma if isinstance(sigma, SigmaContext) else SigmaContext(sigma)
    rows = []
    for i in range(n):
        inv_r = Fraction(i, 2 * (n - 1))
        for k in range(n):
            inv_q = Fraction(k, n - 1)
            rows.append((inv_r, inv_q, classify_pair(ExponentPoint(inv_q, inv_r), ctx)))
    return rows


REGION_HEADER = ("inv_r", "inv_q", "sharp_admissible", "acceptable", "critical")


def region_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REGION_HEADER)
    for inv_r, inv_q, cls in rows:
        writer.writerow(
            [
                repr(float(inv_r)),
                repr(float(inv_q)),
                int(cls.sharp_admissible),
                int(cls.acceptable),
                int(cls.critical),
            ]
        )
    return buf.getvalue()
