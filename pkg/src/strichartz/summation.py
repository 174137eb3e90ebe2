"""Bourgain's dyadic summation trick as an algorithm.

Two families of bounds ``||f_j||_{q1} <= M1 2^(eps1 j)`` and
``||f_j||_{q2} <= M2 2^(-eps2 j)`` interpolate to a weak-type bound
``||sum f_j||_{L^{q,inf}} <= C M1^theta M2^(1-theta)``.  This module computes
``theta`` and ``q``, the optimal Chebyshev split level, the ``(q1, q2)``
choice that feeds the lemma from time-localized estimates, and a harness
measuring ``C`` on step-function families.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .exponents import Number, WeakCaseParams, _coerce, _le, _lt, beta, theorem_hypotheses
from .norms import lorentz_norm

MAX_HALVINGS = 60


@dataclass(frozen=True)
class DyadicBounds:
    M1: float
    eps1: Number
    q1: Number
    M2: float
    eps2: Number
    q2: Number

    def __post_init__(self):
        if not (self.M1 > 0 and self.M2 > 0):
            raise DomainError("M1 and M2 must be positive")
        if not (self.eps1 > 0 and self.eps2 > 0):
            raise DomainError("eps1 and eps2 must be positive")
        for name in ("q1", "q2"):
            v = getattr(self, name)
            if not (1 <= v < math.inf):
                raise DomainError(f"{name}={v} must lie in [1, inf)")


def bourgain_parameters(b: DyadicBounds) -> tuple[Number, Number]:
    """``theta = eps2/(eps1+eps2)`` and ``q`` with ``1/q = theta/q1 + (1-theta)/q2``.

    Exact for rational inputs.
    """
    e1, e2 = _coerce(b.eps1), _coerce(b.eps2)
    if e1 + e2 == 0:
        raise DomainError("eps1 + eps2 must be nonzero")
    theta = e2 / (e1 + e2)
    inv_q = theta / _coerce(b.q1) + (1 - theta) / _coerce(b.q2)
    return theta, 1 / inv_q


def _split_terms(b: DyadicBounds, lam: float):
    """Log2 of the two Chebyshev terms as ``(logA, a, logB, c)`` in ``logA + a N``, ``logB - c N``."""
    q1, q2 = float(b.q1), float(b.q2)
    log_a = q1 * (math.log2(b.M1) - math.log2(lam))
    log_b = q2 * (math.log2(b.M2) - math.log2(lam))
    return log_a, float(b.eps1) * q1, log_b, float(b.eps2) * q2


def split_objective(b: DyadicBounds, lam: float, n) -> np.ndarray:
    """``log2`` of ``(M1 2^(eps1 N)/lam)^q1 + (M2 2^(-eps2 N)/lam)^q2``."""
    log_a, a, log_b, c = _split_terms(b, lam)
    n = np.asarray(n, dtype=float)
    return np.logaddexp2(log_a + a * n, log_b - c * n)


def split_point(b: DyadicBounds, lam: float) -> float:
    """Real minimizer ``log2(c B / (a A)) / (a + c)`` of the split objective."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    log_a, a, log_b, c = _split_terms(b, lam)
    return (math.log2(c / a) + log_b - log_a) / (a + c)


def optimal_split(b: DyadicBounds, lam: float) -> int:
    """Integer level ``N`` minimizing the split objective (ties go to the lower ``N``)."""
    x = split_point(b, lam)
    lo, hi = math.floor(x), math.ceil(x)
    if lo == hi:
        return int(lo)
    v_lo, v_hi = split_objective(b, lam, [lo, hi])
    return int(lo if v_lo <= v_hi else hi)


@dataclass(frozen=True)
class SplitChoice:
    """Outcome of :func:`choose_q1_q2`.

    ``route`` is ``"split"`` when ``(q1, q2)`` straddle ``q``; with ``1/q = 0``
    no finite ``q2`` exists and ``route`` is ``"duality"`` (other fields None).
    """

    route: str
    inv_q1: Number | None = None
    inv_q2: Number | None = None
    delta: Number | None = None
    beta1: Number | None = None
    beta2: Number | None = None
    halvings: int = 0

    @property
    def q1(self):
        return None if self.inv_q1 is None else 1 / self.inv_q1

    @property
    def q2(self):
        return None if self.inv_q2 is None else 1 / self.inv_q2


def _window_violations(inv_qi, inv_qtp) -> list[str]:
    out = []
    if not _le(0, inv_qi):
        out.append("1/q_i >= 0")
    if not _le(inv_qi, inv_qtp):
        out.append("1/q_i <= 1/q~'")
    if not _le(inv_qi, 1):
        out.append("q_i >= 1")
    return out


def choose_q1_q2(inv_q, inv_q_tilde_prime, sigma, theta, theta_tilde) -> SplitChoice:
    """Pick ``1/q1 = 1/q + delta`` and ``1/q2 = 1/q - delta`` for the summation step.

    ``delta`` starts at ``(1/q~' - 1/q)/2`` and is halved until both pairs
    ``(q_i, theta), (q~, theta~)`` satisfy the time-localized exponent window
    and ``q2 < inf``.  The returned ``beta1 < 0 < beta2`` are the dyadic
    decay rates of the two families.
    """
    inv_q, inv_qtp = _coerce(inv_q), _coerce(inv_q_tilde_prime)
    params = WeakCaseParams(theta, theta_tilde, inv_q, 1 - inv_qtp)
    rep = theorem_hypotheses(params, sigma)
    if not rep.verdict:
        failed = [k for k, v in rep.as_dict().items() if v is False]
        raise PreconditionError(f"hypotheses fail: {', '.join(failed)}")
    if inv_q == 0:
        return SplitChoice("duality")
    th, tht = params.theta, params.theta_tilde
    inv_qt = params.inv_q_tilde
    delta = (inv_qtp - inv_q) / 2
    # halvings forced by q2 < inf are counted directly, not looped over
    skip = 0
    if delta >= inv_q:
        skip = max(0, math.floor(math.log2(delta / inv_q)))
        delta = delta / 2**skip
        while delta >= inv_q:
            delta, skip = delta / 2, skip + 1
    violations: list[str] = []
    for k in range(skip, skip + MAX_HALVINGS + 1):
        inv_q1, inv_q2 = inv_q + delta, inv_q - delta
        violations = _window_violations(inv_q1, inv_qtp) + _window_violations(inv_q2, inv_qtp)
        if not _lt(0, inv_q2):
            violations.append("q2 < inf")
        if not violations:
            b1 = beta(sigma, th, tht, inv_q1, inv_qt)
            b2 = beta(sigma, th, tht, inv_q2, inv_qt)
            return SplitChoice("split", inv_q1, inv_q2, delta, b1, b2, k)
        delta = delta / 2
    raise PreconditionError(f"no delta after {MAX_HALVINGS} halvings; violated: {violations}")


# -- verification on step functions --------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """``values[k]`` on ``[breaks[k], breaks[k+1])``, zero elsewhere."""

    breaks: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        br = tuple(float(x) for x in self.breaks)
        vals = tuple(float(v) for v in self.values)
        if len(br) != len(vals) + 1 or len(vals) == 0:
            raise DomainError("need len(breaks) == len(values) + 1 >= 2")
        if any(b1 <= b0 for b0, b1 in zip(br, br[1:])):
            raise DomainError("breaks must be strictly increasing")
        object.__setattr__(self, "breaks", br)
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, a: float, b: float, height: float = 1.0) -> "StepFunction":
        return cls((a, b), (height,))

    def dilate(self, lam: float) -> "StepFunction":
        """``t -> f(t / lam)``."""
        return StepFunction(tuple(lam * x for x in self.breaks), self.values)

    def lebesgue(self, q: float) -> float:
        lengths = np.diff(self.breaks)
        a = np.abs(self.values)
        top = a.max()
        if top == 0:
            return 0.0
        return top * math.fsum(lengths * (a / top) ** float(q)) ** (1.0 / float(q))

    def __call__(self, t: float) -> float:
        k = np.searchsorted(self.breaks, t, side="right") - 1
        return self.values[k] if 0 <= k < len(self.values) else 0.0


def sum_steps(family: Sequence[StepFunction]) -> StepFunction:
    """Pointwise sum on the common refinement (compensated summation per piece)."""
    br = sorted({x for f in family for x in f.breaks})
    mids = [(a + b) / 2 for a, b in zip(br, br[1:])]
    vals = [math.fsum(f(m) for f in family) for m in mids]
    return StepFunction(tuple(br), tuple(vals))


@dataclass(frozen=True)
class SummationReport:
    theta: Number
    q: Number
    weak_norm: float
    bound: float
    C_measured: float
    split_levels: tuple[int, ...]

    def to_json(self) -> str:
        doc = {
            "schema": 1,
            "theta": float(self.theta),
            "q": float(self.q),
            "weak_norm": self.weak_norm,
            "bound": self.bound,
            "C_measured": self.C_measured,
            "split_levels": list(self.split_levels),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def verify_summation(
    family: Sequence[tuple[int, StepFunction]], b: DyadicBounds, rtol: float = 1e-12
) -> SummationReport:
    """Measure ``C`` in ``||sum f_j||_{L^{q,inf}} <= C M1^theta M2^(1-theta)``.

    ``family`` holds ``(j, f_j)`` pairs; each ``f_j`` must satisfy both dyadic
    bounds (relative slack ``rtol``).  ``split_levels`` lists the optimal
    ``N`` at every distinct level of ``|sum f_j|``.
    """
    if not family:
        raise DomainError("family is empty")
    for j, f in family:
        n1, n2 = f.lebesgue(b.q1), f.lebesgue(b.q2)
        if n1 > b.M1 * 2.0 ** (float(b.eps1) * j) * (1 + rtol):
            raise DomainError(f"f_{j} violates the L^q1 bound: {n1!r}")
        if n2 > b.M2 * 2.0 ** (-float(b.eps2) * j) * (1 + rtol):
            raise DomainError(f"f_{j} violates the L^q2 bound: {n2!r}")
    theta, q = bourgain_parameters(b)
    total = sum_steps([f for _, f in family])
    weak = lorentz_norm(np.array(total.values), float(q), math.inf, weights=np.diff(total.breaks))
    bound = b.M1 ** float(theta) * b.M2 ** float(1 - theta)
    levels = sorted({abs(v) for v in total.values if v != 0}, reverse=True)
    splits = tuple(optimal_split(b, lam) for lam in levels)
    C = weak / bound
    if not math.isfinite(C):
        raise DomainError("measured constant is not finite")
    return SummationReport(theta, q, weak, bound, C, splits)


def min_family(
    j_range: range, interval=(0.0, 1.0), eps1: float = 1.0, eps2: float = 1.0
) -> list[tuple[int, StepFunction]]:
    """``f_j = min(2^(eps1 j), 2^(-eps2 j)) 1_interval``.

    On the unit interval it meets both dyadic bounds with ``M1 = M2 = 1`` for
    every ``q1, q2``; with ``eps1 = eps2 = 1`` the sum tends to ``3``.
    """
    a, b = interval
    e1, e2 = float(eps1), float(eps2)
    return [(j, StepFunction.indicator(a, b, min(2.0 ** (e1 * j), 2.0 ** (-e2 * j)))) for j in j_range]
