"""Periodic grids, Fourier transforms and Littlewood-Paley partitions.

Fourier convention (used everywhere in the package)::

    f^(xi) = int f(x) exp(-i x.xi) dx
    f(x)   = (2 pi)^-d int f^(xi) exp(i x.xi) dxi

On a grid of ``n`` points per axis covering ``[-L, L)`` both integrals are
Riemann sums, with weights ``h^d`` (``h = 2L/n``) and ``(pi/L)^d / (2 pi)^d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence, Union

import numpy as np
import scipy.fft as sfft

from . import _config
from .errors import DomainError, NumericError, PeriodizationError, RangeError

Symbol = Union[np.ndarray, Callable[["SpatialGrid"], np.ndarray]]


@dataclass(frozen=True)
class SpatialGrid:
    dim: int
    n: int
    half_extent: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise DomainError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 16 or self.n & (self.n - 1):
            raise DomainError(f"points_per_axis must be a power of two >= 16, got {self.n}")
        if not (np.isfinite(self.half_extent) and self.half_extent > 0):
            raise DomainError("half_extent must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.n

    @property
    def freq_spacing(self) -> float:
        return np.pi / self.half_extent

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_extent + self.spacing * np.arange(self.n)

    @cached_property
    def freq_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    @cached_property
    def freqs(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.freq_axis] * self.dim), indexing="ij"))

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c * c for c in self.coords))

    @cached_property
    def freq_sq(self) -> np.ndarray:
        return sum(k * k for k in self.freqs)

    @cached_property
    def freq_abs(self) -> np.ndarray:
        return np.sqrt(self.freq_sq)

    @cached_property
    def _phase(self) -> np.ndarray:
        # exp(i L xi_m) = (-1)^m because xi_m = m pi / L
        sign = np.where(np.arange(self.n) % 2 == 0, 1.0, -1.0)
        out = np.ones(self.shape)
        for ax in range(self.dim):
            shape = [1] * self.dim
            shape[ax] = self.n
            out = out * sign.reshape(shape)
        return out


@dataclass(frozen=True)
class GridField:
    """Complex samples on a :class:`SpatialGrid` (space or frequency side)."""

    grid: SpatialGrid
    values: np.ndarray
    domain: str = "space"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise DomainError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise NumericError("field contains non-finite samples")
        if self.domain not in ("space", "frequency"):
            raise DomainError(f"unknown domain {self.domain!r}")
        v = v.copy() if v is self.values else v
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "GridField":
        return GridField(self.grid, values, self.domain)


def _fftn(a, axes=None):
    return sfft.fftn(a, axes=axes, workers=_config.threads())


def _ifftn(a, axes=None):
    return sfft.ifftn(a, axes=axes, workers=_config.threads())


def transform(f: GridField, direction: str = "forward") -> GridField:
    """Riemann-sum Fourier transform (``forward``) or its inverse (``inverse``)."""
    g = f.grid
    if direction == "forward":
        if f.domain != "space":
            raise DomainError("forward transform expects a space-domain field")
        return GridField(g, g.cell_volume * g._phase * _fftn(f.values), "frequency")
    if direction == "inverse":
        if f.domain != "frequency":
            raise DomainError("inverse transform expects a frequency-domain field")
        return GridField(g, _ifftn(g._phase * f.values) / g.cell_volume, "space")
    raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def evaluate_symbol(m: Symbol, grid: SpatialGrid) -> np.ndarray:
    """Sample a frequency symbol on the grid, rejecting non-finite values."""
    vals = m(grid) if callable(m) else m
    vals = np.broadcast_to(np.asarray(vals), grid.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        xi = tuple(float(k[idx]) for k in grid.freqs)
        raise DomainError(f"multiplier is not finite at frequency xi={xi}")
    return vals


def apply_multiplier(f: GridField, m: Symbol) -> GridField:
    """Return ``F^-1 [m F f]``.

    The transform phases cancel, so this is a plain FFT round trip.
    """
    vals = evaluate_symbol(m, f.grid)
    return GridField(f.grid, _ifftn(vals * _fftn(f.values)))


def homogeneous_power(rho: float) -> Callable[[SpatialGrid], np.ndarray]:
    """Symbol ``|xi|^rho`` with the value 0 at ``xi = 0``."""

    def symbol(grid):
        k = grid.freq_abs
        out = np.zeros_like(k)
        nz = k > 0
        out[nz] = k[nz] ** rho
        return out

    return symbol


def zero_frequency_fraction(f: GridField) -> float:
    """``|f^(0)| / max |f^|`` (0 for the zero field)."""
    spec = np.abs(_fftn(f.values))
    top = spec.max()
    return 0.0 if top == 0 else float(spec.flat[0] / top)


# -- Littlewood-Paley ------------------------------------------------------


def _bump(s):
    """``exp(-1/(1-s^2))`` on ``|s| < 1``, zero elsewhere."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def lp_profile(r) -> np.ndarray:
    """Dyadic profile supported in ``[1/2, 2]`` whose dilates sum to one."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    pos = r > 0
    s = np.log2(r[pos])
    frac = s - np.floor(s)
    out[pos] = _bump(s) / (_bump(frac) + _bump(frac - 1.0))
    return out


@dataclass(frozen=True)
class LPPartition:
    """Levels ``j_min..j_max`` of the partition ``sum_j phi^(2^-j |xi|) = 1``."""

    j_min: int
    j_max: int

    def __post_init__(self):
        if self.j_max < self.j_min:
            raise DomainError("j_max must be >= j_min")

    @property
    def levels(self) -> range:
        return range(self.j_min, self.j_max + 1)

    @property
    def covered_band(self) -> tuple[float, float]:
        """Radii on which the retained levels sum exactly to one."""
        return 2.0**self.j_min, 2.0**self.j_max

    def symbol(self, j: int) -> Callable[[SpatialGrid], np.ndarray]:
        if j not in self.levels:
            raise RangeError(f"level {j} outside [{self.j_min}, {self.j_max}]")
        return lambda grid: lp_profile(grid.freq_abs * 2.0 ** (-j))

    def total(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return sum(lp_profile(r * 2.0 ** (-j)) for j in self.levels)

    @classmethod
    def for_grid(cls, grid: SpatialGrid, low: float | None = None) -> "LPPartition":
        """Levels covering ``[low, nyquist]`` on ``grid``."""
        low = grid.freq_spacing if low is None else low
        top = np.pi / grid.spacing
        return cls(int(np.floor(np.log2(low))) - 1, int(np.ceil(np.log2(top))) + 1)


def lp_projection(f: GridField, part: LPPartition, j: int) -> GridField:
    """Littlewood-Paley piece ``f * phi_j``."""
    return apply_multiplier(f, part.symbol(j))


# -- analytic test data ----------------------------------------------------


def _vector(value, dim, name):
    v = np.zeros(dim) if value is None else np.atleast_1d(np.asarray(value, dtype=float))
    if v.shape == (1,) and dim > 1:
        v = np.repeat(v, dim)
    if v.shape != (dim,):
        raise DomainError(f"{name} must have {dim} components")
    return v


def _smooth_bump_1d(u):
    return _bump(u)


def make_test_function(kind: str, grid: SpatialGrid, **params) -> GridField:
    """Sample an analytic test function on ``grid``.

    Parameters
    ----------
    kind : {"gaussian", "smooth_bump", "annular_bump"}
        ``gaussian``: ``exp(-|x-c|^2 / (2 w^2)) exp(i xi0.(x-c))`` with params
        ``center``, ``width`` and ``modulation``.
        ``smooth_bump``: ``exp(-1/(1-u^2))`` rescaled to ``support=(a, b)``
        (along ``x`` in 1D, along ``|x|`` otherwise).
        ``annular_bump``: function whose transform is a smooth bump of ``|xi|``
        supported in ``scale * support`` (default support ``(1/2, 2)``).
    normalize : bool
        Rescale to unit integral (``smooth_bump``) or unit ``L^1`` norm
        (``annular_bump``).
    """
    normalize = params.pop("normalize", False)
    if kind == "gaussian":
        width = float(params.pop("width", 1.0))
        if width <= 0:
            raise DomainError("width must be positive")
        c = _vector(params.pop("center", None), grid.dim, "center")
        xi0 = _vector(params.pop("modulation", None), grid.dim, "modulation")
        _no_extra(params)
        shifted = [x - ci for x, ci in zip(grid.coords, c)]
        r2 = sum(s * s for s in shifted)
        phase = sum(k * s for k, s in zip(xi0, shifted))
        return GridField(grid, np.exp(-r2 / (2 * width**2) + 1j * phase))

    if kind == "smooth_bump":
        a, b = (float(v) for v in params.pop("support", (-1.0, 1.0)))
        _no_extra(params)
        if not b > a:
            raise DomainError("support must be a non-empty interval")
        var = grid.coords[0] if grid.dim == 1 else grid.radius
        vals = _smooth_bump_1d((var - 0.5 * (a + b)) / (0.5 * (b - a))).astype(complex)
        if normalize:
            vals /= grid.cell_volume * vals.real.sum()
        return GridField(grid, vals)

    if kind == "annular_bump":
        lo, hi = (float(v) for v in params.pop("support", (0.5, 2.0)))
        scale = float(params.pop("scale", 1.0))
        _no_extra(params)
        if not (hi > lo >= 0) or scale <= 0:
            raise DomainError("annular support must be a non-empty interval in [0, inf)")
        lo, hi = lo * scale, hi * scale
        k = grid.freq_abs
        spec = _bump((k - 0.5 * (lo + hi)) / (0.5 * (hi - lo))).astype(complex)
        f = transform(GridField(grid, spec, "frequency"), "inverse")
        if normalize:
            f = f.with_values(f.values / (grid.cell_volume * np.abs(f.values).sum()))
        return f

    raise DomainError(f"unknown test-function kind {kind!r}")


def _no_extra(params):
    if params:
        raise DomainError(f"unexpected parameters: {sorted(params)}")


def boundary_decay(f: GridField) -> float:
    """Largest ``|f|`` on the box boundary relative to ``max |f|``."""
    a = np.abs(f.values)
    top = a.max()
    if top == 0:
        return 0.0
    edge = max(float(np.take(a, 0, axis=ax).max()) for ax in range(a.ndim))
    return edge / float(top)


def require_decay(f: GridField, tol: float = 1e-12) -> None:
    ratio = boundary_decay(f)
    if ratio > tol:
        raise PeriodizationError(
            f"field is {ratio:.3e} of its maximum at the boundary (limit {tol:.0e}); "
            "enlarge half_extent"
        )


@dataclass(frozen=True)
class SpaceTimeField:
    """Fields on one grid sampled at uniformly spaced times."""

    grid: SpatialGrid
    times: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=np.complex128)
        if t.ndim != 1 or t.size == 0:
            raise DomainError("times must be a non-empty 1-D array")
        if v.shape != (t.size,) + self.grid.shape:
            raise DomainError(f"values shape {v.shape} incompatible with times/grid")
        if t.size > 1:
            dt = np.diff(t)
            if np.any(dt <= 0):
                raise DomainError("times must be strictly increasing")
            step = (t[-1] - t[0]) / (t.size - 1)
            if np.max(np.abs(dt - step)) > 1e-12 * max(1.0, abs(step)):
                raise DomainError("times must be uniformly spaced")
        if not np.all(np.isfinite(v)):
            raise NumericError("field contains non-finite samples")
        t = t.copy()
        t.setflags(write=False)
        v = v.copy() if v is self.values else v
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def time_step(self) -> float:
        if self.times.size == 1:
            return 1.0
        return float((self.times[-1] - self.times[0]) / (self.times.size - 1))

    @property
    def slices(self) -> list[GridField]:
        return [GridField(self.grid, v) for v in self.values]

    @classmethod
    def separable(cls, grid: SpatialGrid, times: Sequence[float], profile, g: GridField):
        """``F(t, x) = profile(t) g(x)``."""
        t = np.asarray(times, dtype=float)
        a = np.asarray(profile(t) if callable(profile) else profile, dtype=complex)
        a = np.broadcast_to(a, t.shape)
        return cls(grid, t, a[(slice(None),) + (None,) * grid.dim] * g.values[None])
