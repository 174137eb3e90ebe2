"""Lebesgue, Lorentz, Sobolev, Besov and mixed space-time norms on grids.

Lorentz norms are evaluated from the decreasing rearrangement of weighted
samples, which is piecewise constant, so both the weak norm (a supremum over
breakpoints) and the strong ``L^{q,p}`` integral are computed exactly for
the sampled data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, TruncationError
from .grid import (
    GridField,
    LPPartition,
    SpaceTimeField,
    _fftn,
    _ifftn,
    apply_multiplier,
    homogeneous_power,
    lp_profile,
    zero_frequency_fraction,
)

INF = math.inf


def _samples(f, weights):
    if isinstance(f, GridField):
        if f.domain != "space":
            raise DomainError("norms are taken of space-domain fields")
        w = f.grid.cell_volume if weights is None else weights
        return np.abs(f.values).ravel(), w
    a = np.abs(np.asarray(f)).ravel()
    return a, (1.0 if weights is None else weights)


@dataclass(frozen=True)
class Rearrangement:
    """Decreasing rearrangement ``f*`` as levels and the measure carried by each."""

    levels: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_samples(cls, values, weights=1.0) -> "Rearrangement":
        a = np.abs(np.asarray(values)).ravel()
        w = np.broadcast_to(np.asarray(weights, dtype=float), a.shape)
        if np.any(w <= 0):
            raise DomainError("weights must be positive")
        order = np.argsort(-a, kind="stable")
        return cls(a[order], np.ascontiguousarray(w[order]))

    @property
    def breakpoints(self) -> np.ndarray:
        """Cumulative measure ``m_k``; ``f* = levels[k]`` on ``[m_{k-1}, m_k)``."""
        return np.cumsum(self.weights)


def lebesgue_norm(f, r, weights=None) -> float:
    """``(sum w |f|^r)^(1/r)``, or ``max |f|`` for ``r = inf``."""
    if not (r >= 1):
        raise DomainError(f"r must be in [1, inf], got {r}")
    a, w = _samples(f, weights)
    if a.size == 0:
        return 0.0
    top = float(a.max())
    if r == INF or top == 0:
        return top
    # scale by the maximum so that a**r neither underflows nor overflows
    return top * float(np.sum(w * (a / top) ** r) ** (1.0 / r))


def lorentz_norm(f, q, p=INF, weights=None, trace: dict | None = None) -> float:
    """Lorentz ``L^{q,p}`` (quasi-)norm from the decreasing rearrangement.

    ``p = inf`` gives ``sup_t t^(1/q) f*(t)``, attained at a breakpoint.
    Otherwise ``(int_0^inf (t^(1/q) f*(t))^p dt/t)^(1/p)``, integrated
    exactly over each constant piece of ``f*``.  ``q = inf`` is only allowed
    with ``p = inf`` (the sup norm).
    """
    if not (q > 0):
        raise DomainError(f"q must be positive, got {q}")
    if not (p >= 1):
        raise DomainError(f"p must be in [1, inf], got {p}")
    a, w = _samples(f, weights)
    if q == INF:
        if p != INF:
            raise DomainError("L^{inf,p} with p < inf is trivial; use p = inf")
        return float(a.max()) if a.size else 0.0
    rr = Rearrangement.from_samples(a, w)
    m = rr.breakpoints
    if trace is not None:
        trace["levels"] = rr.levels.tolist()
        trace["breakpoints"] = m.tolist()
    if a.size == 0:
        return 0.0
    if p == INF:
        return float(np.max(rr.levels * m ** (1.0 / q)))
    top = float(rr.levels[0])
    if top == 0:
        return 0.0
    e = p / q
    mp = m**e
    prev = np.concatenate(([0.0], mp[:-1]))
    total = np.sum((rr.levels / top) ** p * (mp - prev)) / e
    return top * float(total ** (1.0 / p))


def sobolev_norm(f: GridField, rho: float, r: float, zero_tol: float = 1e-10) -> float:
    """Homogeneous Sobolev norm ``||(-Delta)^(rho/2) f||_r``."""
    if rho == 0:
        return lebesgue_norm(f, r)
    if rho < 0 and zero_frequency_fraction(f) > zero_tol:
        raise DomainError("negative-order Sobolev norm needs f^(0) = 0")
    return lebesgue_norm(apply_multiplier(f, homogeneous_power(rho)), r)


def level_spectra(f: GridField, part: LPPartition, tail_tol: float = 1e-8):
    """Split the (unnormalized FFT) spectrum of ``f`` into Littlewood-Paley pieces.

    Returns ``(pieces, tail)`` where ``pieces`` lists ``(j, phi_j * spectrum)``
    for the levels touching the spectrum and ``tail`` is the relative ``L^2``
    mass outside the partition.  Raises :class:`TruncationError` when
    ``tail > tail_tol``.
    """
    g = f.grid
    spec = _fftn(f.values)
    norm2 = np.sum(np.abs(spec) ** 2)
    if norm2 == 0:
        return [], 0.0
    k = g.freq_abs
    residual = (1.0 - part.total(k)) * spec
    tail = float(np.sqrt(np.sum(np.abs(residual) ** 2) / norm2))
    if tail > tail_tol:
        raise TruncationError(
            f"{tail:.3e} of the L^2 mass lies outside levels "
            f"[{part.j_min}, {part.j_max}]",
            {"tail_fraction": tail, "band": list(part.covered_band)},
        )
    # round-off leaves every bin slightly nonzero; ignore it
    mag = np.abs(spec)
    support = mag > 1e-13 * mag.max()
    pieces = []
    for j in part.levels:
        sym = lp_profile(k * 2.0 ** (-j))
        if not np.any(sym[support]):
            continue
        pieces.append((j, sym * spec))
    return pieces, tail


def besov_norm(
    f: GridField,
    rho: float,
    r: float,
    s: float,
    part: LPPartition,
    inner_p: float | None = None,
    tail_tol: float = 1e-8,
    trace: dict | None = None,
) -> float:
    """Homogeneous Besov norm ``(sum_j 2^(rho s j) ||f * phi_j||_r^s)^(1/s)``.

    The sum runs over ``part.levels``; the discarded spectral tail must be
    below ``tail_tol`` (relative ``L^2``) or :class:`TruncationError` is
    raised.  With ``inner_p`` the per-level norm is Lorentz ``L^{r, inner_p}``.
    """
    if not (s >= 1):
        raise DomainError("s must be in [1, inf]")
    pieces, tail = level_spectra(f, part, tail_tol)
    w = f.grid.cell_volume
    terms = {}
    for j, spec in pieces:
        vals = _ifftn(spec)
        if inner_p is None:
            nj = lebesgue_norm(vals, r, weights=w)
        else:
            nj = lorentz_norm(vals, r, inner_p, weights=w)
        terms[j] = 2.0 ** (rho * j) * nj
    if trace is not None:
        trace["terms"] = {str(j): v for j, v in terms.items()}
        trace["tail_fraction"] = tail
    if not terms:
        return 0.0
    vals = np.array(list(terms.values()))
    if s == INF:
        return float(vals.max())
    return float(np.sum(vals**s) ** (1.0 / s))


# -- norm specifications ---------------------------------------------------


@dataclass(frozen=True)
class Lebesgue:
    r: float


@dataclass(frozen=True)
class Lorentz:
    r: float
    p: float


@dataclass(frozen=True)
class Sobolev:
    rho: float
    r: float


@dataclass(frozen=True)
class Besov:
    rho: float
    r: float
    s: float
    partition: LPPartition
    inner_p: float | None = None


Spatial = Union[Lebesgue, Lorentz, Sobolev, Besov]


@dataclass(frozen=True)
class NormSpec:
    """``L^{q,p}_t X_x``; ``temporal=None`` means ``L^inf_t``."""

    spatial: Spatial
    temporal: tuple[float, float] | None = None

    def __post_init__(self):
        sp = self.spatial
        if isinstance(sp, (Lebesgue, Sobolev)) and not sp.r >= 1:
            raise DomainError("spatial exponent must be >= 1")
        if isinstance(sp, Lorentz) and not (sp.r > 0 and sp.p >= 1):
            raise DomainError("invalid spatial Lorentz exponents")
        if isinstance(sp, Besov) and not isinstance(sp.partition, LPPartition):
            raise DomainError("Besov norms need an LPPartition")
        if self.temporal is not None:
            q, p = self.temporal
            if not (q > 0 and p >= 1):
                raise DomainError("invalid temporal Lorentz exponents")


def spatial_norm(f: GridField, spatial: Spatial) -> float:
    if isinstance(spatial, Lebesgue):
        return lebesgue_norm(f, spatial.r)
    if isinstance(spatial, Lorentz):
        return lorentz_norm(f, spatial.r, spatial.p)
    if isinstance(spatial, Sobolev):
        return sobolev_norm(f, spatial.rho, spatial.r)
    if isinstance(spatial, Besov):
        return besov_norm(
            f, spatial.rho, spatial.r, spatial.s, spatial.partition, inner_p=spatial.inner_p
        )
    raise DomainError(f"unsupported spatial norm {spatial!r}")


def mixed_norm(F: SpaceTimeField, spec: NormSpec, trace: dict | None = None) -> float:
    """Spatial norm of every time slice, then a temporal Lorentz norm of the series.

    Each time sample carries the weight ``F.time_step``.
    """
    series = np.array([spatial_norm(s, spec.spatial) for s in F.slices])
    if trace is not None:
        trace["times"] = F.times.tolist()
        trace["slice_norms"] = series.tolist()
    if spec.temporal is None:
        return float(series.max())
    q, p = spec.temporal
    return lorentz_norm(series, q, p, weights=F.time_step)
