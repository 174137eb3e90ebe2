"""Free propagators, the retarded Duhamel integral and dispersive checks.

Symbols follow the package Fourier convention: the Schrodinger group
``e^{it Delta}`` is the multiplier ``exp(-i t |xi|^2)`` and the half-wave
group ``e^{it sqrt(-Delta)}`` is ``exp(i t |xi|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .grid import GridField, LPPartition, SpaceTimeField, SpatialGrid, _fftn, _ifftn
from .norms import lebesgue_norm, level_spectra


def _smooth_step(u):
    """C-infinity step: 0 for ``u <= 0``, 1 for ``u >= 1``."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    a = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
    b = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return a / (a + b)


def chi0(r, support=(0.5, 2.0), plateau=(0.75, 1.5)):
    """Smooth cutoff equal to 1 on ``plateau`` and vanishing outside ``support``."""
    a, b = support
    p0, p1 = plateau
    r = np.asarray(r, dtype=float)
    return _smooth_step((r - a) / (p0 - a)) * _smooth_step((b - r) / (b - p1))


@dataclass(frozen=True)
class PropagatorKind:
    """Which free evolution to apply.

    ``name`` is ``"schrodinger"``, ``"half_wave"`` or ``"localized_half_wave"``;
    the last multiplies the half-wave symbol by :func:`chi0` with the given
    support and plateau.
    """

    name: str
    support: tuple[float, float] = (0.5, 2.0)
    plateau: tuple[float, float] = (0.75, 1.5)

    def __post_init__(self):
        if self.name not in ("schrodinger", "half_wave", "localized_half_wave"):
            raise DomainError(f"unknown propagator {self.name!r}")
        a, b = self.support
        p0, p1 = self.plateau
        if not (0 < a < p0 <= p1 < b):
            raise DomainError("chi0 needs 0 < support[0] < plateau <= support[1]")

    @classmethod
    def schrodinger(cls) -> "PropagatorKind":
        return cls("schrodinger")

    @classmethod
    def half_wave(cls) -> "PropagatorKind":
        return cls("half_wave")

    @classmethod
    def localized_half_wave(cls, support=(0.5, 2.0), plateau=(0.75, 1.5)) -> "PropagatorKind":
        return cls("localized_half_wave", tuple(support), tuple(plateau))

    def decay_exponent(self, dim: int) -> float:
        """``sigma`` in ``||U(t)U(s)* ||_{1->inf} <~ |t-s|^-sigma``."""
        return dim / 2 if self.name == "schrodinger" else (dim - 1) / 2

    def symbol(self, grid: SpatialGrid, t: float) -> np.ndarray:
        if self.name == "schrodinger":
            return np.exp(-1j * t * grid.freq_sq)
        m = np.exp(1j * t * grid.freq_abs)
        if self.name == "localized_half_wave":
            m = m * chi0(grid.freq_abs, self.support, self.plateau)
        return m


def _finite_time(t) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"time must be finite, got {t}")
    return t


def propagate(f: GridField, t: float, kind: PropagatorKind) -> GridField:
    """``U(t) f`` for the chosen propagator."""
    t = _finite_time(t)
    return GridField(f.grid, _ifftn(kind.symbol(f.grid, t) * _fftn(f.values)))


# -- Duhamel quadrature ----------------------------------------------------


@dataclass(frozen=True)
class DuhamelConfig:
    """Quadrature over the forcing's time samples.

    ``retarded=True`` integrates over ``s < t``; otherwise over every sample.
    Simpson's rule needs an odd number of samples.
    """

    quadrature: str = "trapezoid"
    retarded: bool = True

    def __post_init__(self):
        if self.quadrature not in ("trapezoid", "simpson"):
            raise DomainError(f"unknown quadrature {self.quadrature!r}")


def quadrature_weights(times: np.ndarray, lo: float, hi: float, rule: str) -> np.ndarray:
    """Weights for ``int_{[lo, hi]} F(s) ds`` from samples at uniform ``times``.

    ``F`` is taken as zero outside ``[times[0], times[-1]]``.  A panel only
    partly inside ``[lo, hi]`` keeps the fraction of its weights equal to
    the fraction of its length that is inside, so weights are additive
    over adjacent intervals.
    """
    t = np.asarray(times, dtype=float)
    w = np.zeros(t.size)
    if t.size < 2 or hi <= lo:
        return w
    step = 1 if rule == "trapezoid" else 2
    if rule == "simpson" and t.size % 2 == 0:
        raise DomainError("Simpson's rule needs an odd number of time samples")
    ds = (t[-1] - t[0]) / (t.size - 1)
    left = t[:-1:step]
    right = t[step::step]
    frac = (np.clip(np.minimum(hi, right) - np.maximum(lo, left), 0.0, None)) / (right - left)
    if rule == "trapezoid":
        half = 0.5 * ds * frac
        w[:-1] += half
        w[1:] += half
    else:
        third = ds / 3.0 * frac
        w[0:-1:2] += third
        w[1::2] += 4.0 * third
        w[2::2] += third
    return w


def _evolve_sum(F: SpaceTimeField, t_eval, kind: PropagatorKind, window) -> SpaceTimeField:
    """``sum_k w_k(t) U(t - s_k) F(s_k)`` with weights from ``window(t)``."""
    t_eval = np.atleast_1d(np.asarray(t_eval, dtype=float))
    for t in t_eval:
        _finite_time(t)
    g = F.grid
    spectra = None
    out = np.zeros((t_eval.size,) + g.shape, dtype=complex)
    for i, t in enumerate(t_eval):
        w = window(t)
        idx = np.nonzero(w)[0]
        if idx.size == 0:
            continue
        if spectra is None:
            spectra = _fftn(F.values, axes=tuple(range(1, g.dim + 1)))
        acc = np.zeros(g.shape, dtype=complex)
        for k in idx:  # fixed order keeps the sum reproducible
            acc += w[k] * kind.symbol(g, t - F.times[k]) * spectra[k]
        out[i] = _ifftn(acc)
    return SpaceTimeField(g, t_eval, out)


def duhamel(
    F: SpaceTimeField, t_eval: Sequence[float], kind: PropagatorKind, cfg: DuhamelConfig
) -> SpaceTimeField:
    """``int U(t - s) F(s) ds`` over ``s < t`` (retarded) or all sampled ``s``.

    The ``-i`` prefactor of the inhomogeneous solution is omitted.
    """
    lo = F.times[0]

    def window(t):
        hi = t if cfg.retarded else F.times[-1]
        return quadrature_weights(F.times, lo, hi, cfg.quadrature)

    return _evolve_sum(F, t_eval, kind, window)


def dyadic_piece(
    F: SpaceTimeField, t_eval: Sequence[float], j: int, kind: PropagatorKind, cfg: DuhamelConfig
) -> SpaceTimeField:
    """Retarded integral restricted to the shell ``2^j <= t - s < 2^(j+1)``."""

    def window(t):
        return quadrature_weights(F.times, t - 2.0 ** (j + 1), t - 2.0**j, cfg.quadrature)

    return _evolve_sum(F, t_eval, kind, window)


# -- dispersive estimates --------------------------------------------------


def _csv_float(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class DispersiveReport:
    """``ratio(t) = ||U(t) f||_inf |t|^sigma / ||f||_1`` on the resolved times."""

    sigma: float
    times: tuple[float, ...]
    ratios: tuple[float, ...]
    skipped: tuple[float, ...]

    @property
    def sup(self) -> float:
        return max(self.ratios) if self.ratios else 0.0

    @property
    def final(self) -> float:
        return self.ratios[-1] if self.ratios else 0.0

    def to_csv(self) -> str:
        rows = ["t,ratio"] + [f"{_csv_float(t)},{_csv_float(r)}" for t, r in zip(self.times, self.ratios)]
        return "\n".join(rows) + "\n"


def _min_time(kind: PropagatorKind, grid: SpatialGrid) -> float:
    h = grid.spacing
    return 4 * h * h if kind.name == "schrodinger" else 4 * h


def dispersive_check(kind: PropagatorKind, f: GridField, t_list: Sequence[float]) -> DispersiveReport:
    """Tabulate the dispersive ratio of ``f`` at each time.

    Times below the grid's resolution limit (``4 h^2`` for Schrodinger,
    ``4 h`` for the wave) are listed in ``skipped``.
    """
    l1 = lebesgue_norm(f, 1)
    if l1 == 0:
        raise DomainError("dispersive ratio needs a nonzero field")
    sigma = kind.decay_exponent(f.grid.dim)
    spec = _fftn(f.values)
    tmin = _min_time(kind, f.grid)
    times, ratios, skipped = [], [], []
    for t in t_list:
        t = _finite_time(t)
        if abs(t) < tmin:
            skipped.append(t)
            continue
        u = _ifftn(kind.symbol(f.grid, t) * spec)
        times.append(t)
        ratios.append(float(np.abs(u).max()) * abs(t) ** sigma / l1)
    return DispersiveReport(sigma, tuple(times), tuple(ratios), tuple(skipped))


@dataclass(frozen=True)
class BesovDispersiveReport:
    """Per-level wave ratios ``||phi_j * U(t) f||_inf |t|^((d-1)/2) 2^(-j(d+1)/2)``.

    ``ratios[i][k]`` belongs to ``times[i]`` and ``levels[k]``;
    ``aggregate[i]`` is the l^2 norm over levels.
    """

    times: tuple[float, ...]
    levels: tuple[int, ...]
    ratios: tuple[tuple[float, ...], ...]
    aggregate: tuple[float, ...]
    tail_fraction: float
    skipped: tuple[float, ...]

    @property
    def sup(self) -> float:
        return max((max(row) for row in self.ratios if row), default=0.0)

    def ratio(self, t: float, j: int) -> float:
        return self.ratios[self.times.index(t)][self.levels.index(j)]

    def to_csv(self) -> str:
        rows = ["t,j,ratio"]
        for t, row in zip(self.times, self.ratios):
            rows += [f"{_csv_float(t)},{j},{_csv_float(r)}" for j, r in zip(self.levels, row)]
        return "\n".join(rows) + "\n"


def besov_dispersive_check(
    f: GridField, t_list: Sequence[float], part: LPPartition, tail_tol: float = 1e-8
) -> BesovDispersiveReport:
    """Level-by-level half-wave dispersive ratios of ``f``.

    The ratios carry no ``||f||_1`` normalization; for ``L^1``-normalized
    data they are invariant under the dilation ``2^(kd) f(2^k x)`` paired
    with ``j -> j + k`` and ``t -> 2^-k t``.
    """
    g = f.grid
    d = g.dim
    pieces, tail = level_spectra(f, part, tail_tol)
    levels = tuple(j for j, _ in pieces)
    kind = PropagatorKind.half_wave()
    tmin = _min_time(kind, g)
    times, rows, agg, skipped = [], [], [], []
    for t in t_list:
        t = _finite_time(t)
        if abs(t) < tmin:
            skipped.append(t)
            continue
        m = kind.symbol(g, t)
        row = tuple(
            float(np.abs(_ifftn(m * spec)).max()) * abs(t) ** ((d - 1) / 2) * 2.0 ** (-j * (d + 1) / 2)
            for j, spec in pieces
        )
        times.append(t)
        rows.append(row)
        agg.append(math.sqrt(math.fsum(r * r for r in row)))
    return BesovDispersiveReport(tuple(times), levels, tuple(rows), tuple(agg), tail, tuple(skipped))
