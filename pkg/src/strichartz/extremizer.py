"""Derivative-free probing of mixed-norm ratios of the retarded operator.

A :class:`RatioProblem` fixes a propagator, an input family
``F(s, x) = a(s) g(x)`` (Gaussian in space and time, four parameters), the
output and input :class:`NormSpec` and a horizon ``T``.  The objective is
``||duhamel(F)||_out / ||F||_in``; :func:`coordinate_search` maximizes it by
seeded golden-section sweeps over a fixed box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DomainError
from .grid import SpaceTimeField, SpatialGrid
from .norms import Lebesgue, NormSpec, mixed_norm
from .propagators import DuhamelConfig, PropagatorKind, duhamel
from .reporting import csv_table

PARAM_NAMES = ("width", "modulation", "translation", "temporal_width")
GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class RatioProblem:
    """Operator-norm probe for one pair of norm specifications.

    The forcing is sampled on ``s in [0, source_window]`` (centred Gaussian
    profile of the given temporal width) and the solution on ``[0, T]``.
    ``box`` holds ``(lower, upper)`` per parameter in :data:`PARAM_NAMES`.
    """

    kind: PropagatorKind
    out_spec: NormSpec
    in_spec: NormSpec
    T: float
    grid: SpatialGrid
    box: tuple[tuple[float, float], ...]
    start: tuple[float, ...]
    source_window: float = 8.0
    source_step: float = 0.25
    out_step: float = 0.5
    amplitude: float = 1.0
    quadrature: str = "trapezoid"

    def __post_init__(self):
        if len(self.box) != len(PARAM_NAMES) or len(self.start) != len(PARAM_NAMES):
            raise DomainError(f"box and start need {len(PARAM_NAMES)} entries")
        for (lo, hi), x in zip(self.box, self.start):
            if not lo <= x <= hi:
                raise DomainError("start lies outside the box")
        if self.box[0][0] <= 0 or self.box[3][0] <= 0:
            raise DomainError("widths must be positive")
        if not self.T > 0:
            raise DomainError("T must be positive")
        if self.amplitude == 0:
            raise DomainError("zero amplitude gives F = 0")

    def check(self, params: Sequence[float]) -> tuple[float, ...]:
        p = tuple(float(v) for v in params)
        if len(p) != len(PARAM_NAMES):
            raise DomainError(f"expected {len(PARAM_NAMES)} parameters")
        for name, (lo, hi), v in zip(PARAM_NAMES, self.box, p):
            if not lo <= v <= hi:
                raise DomainError(f"{name}={v} outside [{lo}, {hi}]")
        return p

    def forcing(self, params: Sequence[float]) -> SpaceTimeField:
        width, xi, x0, tau = self.check(params)
        s = np.arange(0.0, self.source_window + self.source_step / 2, self.source_step)
        a = np.exp(-((s - self.source_window / 2) ** 2) / (2 * tau * tau))
        g = self.grid
        x = g.coords[0]
        sq = sum(c * c for c in g.coords[1:]) + (x - x0) ** 2
        prof = self.amplitude * np.exp(-sq / (2 * width * width)) * np.exp(1j * xi * x)
        return SpaceTimeField(g, s, a.reshape((-1,) + (1,) * g.dim) * prof[None])

    @property
    def output_times(self) -> np.ndarray:
        return np.arange(0.0, self.T + self.out_step / 2, self.out_step)


def ratio_objective(p: RatioProblem, params: Sequence[float]) -> float:
    """``||duhamel(F)||_out / ||F||_in`` for the family member at ``params``."""
    F = p.forcing(params)
    den = mixed_norm(F, p.in_spec)
    if not den > 0:
        raise DomainError("input norm vanishes")
    u = duhamel(F, p.output_times, p.kind, DuhamelConfig(p.quadrature))
    return mixed_norm(u, p.out_spec) / den


@dataclass(frozen=True)
class SearchResult:
    best_params: tuple[float, ...]
    best_ratio: float
    trace: tuple[tuple[int, float, tuple[float, ...]], ...]
    evaluations: int = field(default=0, compare=False)

    def to_csv(self) -> str:
        header = ["iter", "ratio"] + [f"param_{k + 1}" for k in range(len(self.best_params))]
        return csv_table(header, [(i, r, *ps) for i, r, ps in self.trace])


def _golden_max(f, lo: float, hi: float, n_eval: int):
    """Golden-section ascent on ``[lo, hi]``; returns every ``(x, f(x))`` evaluated."""
    seen = []
    if hi <= lo:
        return seen
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    seen += [(c, fc), (d, fd)]
    for _ in range(max(0, n_eval - 2)):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
            seen.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
            seen.append((d, fd))
    return seen


def coordinate_search(
    p: RatioProblem, iterations: int, seed: int, n_eval: int = 6, rtol: float = 1e-9
) -> SearchResult:
    """Seeded coordinate-wise golden-section ascent.

    Each iteration visits the coordinates in an order drawn from ``seed``;
    a candidate replaces the incumbent only if it beats it by more than
    ``rtol`` relative, so flat families return the start point.
    """
    if iterations < 1:
        raise DomainError("iterations must be >= 1")
    rng = np.random.default_rng(seed)
    cache: dict[tuple[float, ...], float] = {}

    def obj(x):
        key = tuple(x)
        if key not in cache:
            cache[key] = ratio_objective(p, key)
        return cache[key]

    best = p.check(p.start)
    best_val = obj(best)
    trace = [(0, best_val, best)]
    for it in range(1, iterations + 1):
        for k in rng.permutation(len(best)):
            lo, hi = p.box[k]

            def along(v, k=k):
                x = list(best)
                x[k] = v
                return obj(x)

            for v, val in _golden_max(along, lo, hi, n_eval):
                if val > best_val * (1 + rtol):
                    x = list(best)
                    x[k] = v
                    best, best_val = tuple(x), val
        trace.append((it, best_val, best))
    return SearchResult(best, best_val, tuple(trace), len(cache))


# -- presets ---------------------------------------------------------------

DEFAULT_BOX = ((1.0, 3.0), (-0.5, 0.5), (-5.0, 5.0), (0.5, 2.0))
DEFAULT_START = (1.0, 0.0, 0.0, 1.0)


def _base(T: float) -> dict:
    return dict(
        kind=PropagatorKind.schrodinger(),
        in_spec=NormSpec(Lebesgue(6 / 5), (1.0, 1.0)),
        T=T,
        grid=SpatialGrid(1, 2048, 512.0),
        box=DEFAULT_BOX,
        start=DEFAULT_START,
    )


def preset(name: str, T: float = 20.0) -> RatioProblem:
    """Named d = 1 Schrodinger problems on the point ``r = r~ = 6``, ``1/q = 1/3``, ``q~' = 1``.

    ``weak``: output ``L^{3,inf}_t L^6_x`` (inside the weak-type region).
    ``failing``: output strong ``L^3_t L^6_x`` on the same critical line.
    ``flat``: the weak problem with only the translation free (a flat family).
    """
    if name == "weak":
        return RatioProblem(out_spec=NormSpec(Lebesgue(6.0), (3.0, math.inf)), **_base(T))
    if name == "failing":
        return RatioProblem(out_spec=NormSpec(Lebesgue(6.0), (3.0, 3.0)), **_base(T))
    if name == "flat":
        p = preset("weak", T)
        box = tuple((x, x) if k != 2 else b for k, (b, x) in enumerate(zip(p.box, p.start)))
        return replace(p, box=box)
    raise DomainError(f"unknown preset {name!r}; choose weak, failing or flat")


PRESETS = ("weak", "failing", "flat")
