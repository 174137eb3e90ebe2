"""Explicit constructions showing where inhomogeneous estimates fail.

Two families live here.

* A Gaussian forcing whose two-sided Schrodinger Duhamel integral is the
  explicit profile ``(1+it)^(-d/2) exp(-|x|^2 / (4(1+it)))``.  Its weak
  ``L^r`` norm decays like ``|t|^(d(1/r - 1/2))``, which is not integrable in
  time at ``r = 2d/(d-2)``.
* A radial wave construction with forcing ``F^(s, xi) = psi(s) phi(|xi|)``.
  On the light cone ``||x| - t| <= delta0`` the solution has size
  ``t^(-(d-1)/2)``, so its ``L^r`` norm over the shell behaves like
  ``t^((d-1)(1/r - 1/2))``.

The wave solution reduces to one-dimensional integrals over ``r`` in
``[1/2, 2]``: with ``Psi(r) = int e^{isr} psi(s) ds`` and
``g(r) = r^((d-1)/2) phi(r) Psi(r)``,

    I_pm(x, t) = int exp(-i(pm|x| - t) r) g(r) dr
    II(x, t)   = int exp(i t r) g(r) E(r|x|) dr
    u          = 2 (2 pi)^(-(d+1)/2) |x|^(-(d-1)/2) (I + II),

where ``I = (e^{-i a} I_- + e^{i a} I_+)/2``, ``a = pi(d-1)/4`` and
``E(rho) = sqrt(pi rho/2) J_{(d-2)/2}(rho) - cos(rho - a)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special

from .errors import DomainError
from .exponents import Number, _coerce, _le
from .reporting import SlopeVerdict, csv_table, dumps, loglog_slope

GL_ORDER = 32


def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _panels(a: float, b: float, n_panels: int):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``."""
    x, w = leggauss(GL_ORDER)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def unit_sphere_area(d: int) -> float:
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


# -- Gaussian counterexample ----------------------------------------------


def gaussian_response(d: int, t: float, x_magnitude):
    """``(1+it)^(-d/2) exp(-|x|^2 / (4(1+it)))`` (normalized to 1 at the origin, t=0)."""
    z = 1 + 1j * float(t)
    x = np.asarray(x_magnitude, dtype=float)
    return z ** (-d / 2) * np.exp(-(x**2) / (4 * z))


def gaussian_response_grid(grid, t: float) -> np.ndarray:
    """The same profile from the frequency integral of ``exp(-(1+it)|xi|^2)`` on ``grid``."""
    from .grid import GridField, transform

    spec = np.exp(-(1 + 1j * t) * grid.freq_sq)
    u = transform(GridField(grid, spec, "frequency"), "inverse").values
    return (4 * math.pi) ** (grid.dim / 2) * u


def gaussian_weak_norm(d: int, r: float, t: float) -> float:
    """Exact ``L^{r,inf}`` norm of :func:`gaussian_response` at time ``t``.

    ``|u| = A exp(-|x|^2/w)`` with ``A = (1+t^2)^(-d/4)``, ``w = 4(1+t^2)``;
    ``lambda |{|u| > lambda}|^(1/r)`` is maximal at ``lambda = A e^(-d/(2r))``.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    if r == math.inf:
        return (1 + t * t) ** (-d / 4)
    amp = (1 + t * t) ** (-d / 4)
    w = 4 * (1 + t * t)
    k = d / (2 * r)
    return amp * math.exp(-k) * unit_ball_volume(d) ** (1 / r) * (w * k) ** k


def gaussian_forcing_norm(d: int, b: float) -> float:
    """``||F||_{L^1_t L^{b,1}_x}`` for ``F = exp(-|x|^2/2)/(1+4t^2)`` (finite for ``b < inf``).

    The time factor integrates to ``pi/2``; the spatial Lorentz norm is
    ``(d/2) v_d^(1/b) 2^(d/(2b)) Gamma(d/(2b))``.
    """
    if not (1 <= b < math.inf):
        raise DomainError("b must lie in [1, inf)")
    k = d / (2 * b)
    spatial = (d / 2) * unit_ball_volume(d) ** (1 / b) * 2**k * math.gamma(k)
    return math.pi / 2 * spatial


@dataclass(frozen=True)
class EndpointDivergence:
    d: int
    r: float
    T: float
    value: float
    forcing_norm: float

    def __float__(self) -> float:
        return self.value


def endpoint_integrand(d: int, t: float) -> float:
    """``||u(t)||_{L^{2d/(d-2), inf}}``, the integrand of the endpoint time integral."""
    return gaussian_weak_norm(d, 2 * d / (d - 2), t)


def gaussian_endpoint_divergence(d: int, T: float) -> EndpointDivergence:
    """``int_1^T ||u(t)||_{L^{2d/(d-2), inf}} dt``, which grows like ``log T``."""
    if d < 3:
        raise DomainError("the endpoint exponent 2d/(d-2) needs d >= 3")
    if T < 2:
        raise DomainError("T must be at least 2")
    r = 2 * d / (d - 2)
    # substitute t = e^s so the ~1/t integrand becomes ~1
    val, _ = integrate.quad(
        lambda s: endpoint_integrand(d, math.exp(s)) * math.exp(s),
        0.0,
        math.log(T),
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    return EndpointDivergence(d, r, float(T), val, gaussian_forcing_norm(d, r))


@dataclass(frozen=True)
class GaussianExperiment:
    """Weak-norm decay of the Gaussian Duhamel profile.

    The forcing is ``F(t, x) = exp(-|x|^2/2) / (1 + 4t^2)``.
    """

    d: int
    r: float
    t_range: tuple[float, ...] = tuple(float(t) for t in np.geomspace(10, 100, 11))
    tolerance: float = 0.05

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("d must be >= 1")
        if not self.r > 2:
            raise DomainError("r must exceed 2")
        if min(self.t_range) < 1:
            raise DomainError("times must be >= 1")

    @property
    def target(self) -> float:
        return self.d * (1 / self.r - 0.5)

    def values(self) -> list[float]:
        return [gaussian_weak_norm(self.d, self.r, t) for t in self.t_range]

    def verdict(self) -> SlopeVerdict:
        return SlopeVerdict(loglog_slope(self.t_range, self.values()), self.target, self.tolerance)

    def to_csv(self) -> str:
        return csv_table(["t", "value"], zip(self.t_range, self.values()))

    def to_json(self) -> str:
        doc = {"d": self.d, "r": self.r, **self.verdict().as_dict()}
        return dumps(doc)


# -- radial wave construction ---------------------------------------------


@dataclass(frozen=True)
class WaveProfileConfig:
    """Data of the radial wave construction.

    ``psi`` is the normalized even bump on ``(-c0, c0)`` and ``phi`` the bump
    on ``(1/2, 2)``; integrals over ``r`` use 32-point Gauss-Legendre panels,
    at least one per oscillation and never fewer than ``min_panels``.
    """

    d: int
    c0: float = 0.1
    min_panels: int = 16
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise DomainError("d must be >= 2")
        if not (0 < self.c0 <= 1):
            raise DomainError("c0 must lie in (0, 1]")

    @staticmethod
    def phi(r):
        return _bump((np.asarray(r, dtype=float) - 1.25) / 0.75)

    def psi(self, s):
        return _bump(np.asarray(s, dtype=float) / self.c0) / self._psi_mass

    @cached_property
    def _psi_nodes(self):
        return _panels(0.0, self.c0, 4)

    @cached_property
    def _psi_mass(self) -> float:
        s, w = self._psi_nodes
        return float(2 * np.sum(w * _bump(s / self.c0)))

    def psi_transform(self, r) -> np.ndarray:
        """``Psi(r) = int e^{isr} psi(s) ds`` (real, since ``psi`` is even)."""
        s, w = self._psi_nodes
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return 2 * (np.cos(np.outer(r, s)) @ (w * self.psi(s)))

    def _r_nodes(self, omega: float):
        n = max(self.min_panels, math.ceil(abs(omega) * 1.5 / (2 * math.pi)))
        key = ("r", n)
        if key not in self._cache:
            r, w = _panels(0.5, 2.0, n)
            g = r ** ((self.d - 1) / 2) * self.phi(r) * self.psi_transform(r)
            self._cache[key] = (r, w, g)
        return self._cache[key]

    def theta_psi(self, u: float) -> complex:
        """``(vartheta * psi)(u) = int e^{-iur} r^((d-1)/2) phi(r) Psi(r) dr``."""
        r, w, g = self._r_nodes(u)
        return complex(np.sum(w * g * np.exp(-1j * u * r)))

    @cached_property
    def first_zero(self) -> float:
        """Smallest ``u > 0`` with ``Re (vartheta * psi)(u) = 0`` (the real part is even)."""
        if not self.theta_psi(0.0).real > 0:
            raise DomainError("vartheta * psi(0) is not positive; decrease c0")
        step = 0.05
        lo = 0.0
        while self.theta_psi(lo + step).real > 0:
            lo += step
            if lo > 100:
                raise DomainError("no sign change found")
        hi = lo + step
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self.theta_psi(mid).real > 0:
                lo = mid
            else:
                hi = mid
        return lo

    @property
    def delta0(self) -> float:
        """Cone half-width: half the first zero, so ``Re(vartheta*psi)`` stays bounded below."""
        return 0.5 * self.first_zero

    def bessel_remainder(self, rho) -> np.ndarray:
        """``E(rho) = sqrt(pi rho/2) J_{(d-2)/2}(rho) - cos(rho - pi(d-1)/4)``; zero for d = 3."""
        rho = np.asarray(rho, dtype=float)
        if self.d == 3:
            return np.zeros_like(rho)
        nu = (self.d - 2) / 2
        return np.sqrt(np.pi * rho / 2) * special.jv(nu, rho) - np.cos(rho - np.pi * (self.d - 1) / 4)


@dataclass(frozen=True)
class WaveKernel:
    I_plus: complex
    I_minus: complex
    II: complex
    u: complex


def wave_radial_kernel(cfg: WaveProfileConfig, x_magnitude: float, t: float) -> WaveKernel:
    """Terms of the radial wave solution at ``|x| = x_magnitude`` and time ``t``."""
    x = float(x_magnitude)
    t = float(t)
    if x < 1:
        raise DomainError("|x| must be >= 1")
    d = cfg.d
    r, w, g = cfg._r_nodes(abs(t) + x)
    wg = w * g
    i_plus = complex(np.sum(wg * np.exp(-1j * (x - t) * r)))
    i_minus = complex(np.sum(wg * np.exp(-1j * (-x - t) * r)))
    ii = complex(np.sum(wg * np.exp(1j * t * r) * cfg.bessel_remainder(r * x)))
    a = math.pi * (d - 1) / 4
    i_main = 0.5 * (np.exp(-1j * a) * i_minus + np.exp(1j * a) * i_plus)
    u = 2 * (2 * math.pi) ** (-(d + 1) / 2) * x ** (-(d - 1) / 2) * (i_main + ii)
    return WaveKernel(i_plus, i_minus, ii, complex(u))


def wave_solution_direct(cfg: WaveProfileConfig, x_magnitude: float, t: float) -> complex:
    """Same solution from the Bessel form of the sphere transform (no splitting)."""
    x = float(x_magnitude)
    d = cfg.d
    r, w, _ = cfg._r_nodes(abs(t) + x)
    nu = (d - 2) / 2
    rho = r * x
    radial = cfg.phi(r) * cfg.psi_transform(r) * r ** (d - 1) * rho ** (-nu) * special.jv(nu, rho)
    return complex((2 * math.pi) ** (-d / 2) * np.sum(w * np.exp(1j * t * r) * radial))


def _shell_nodes(cfg: WaveProfileConfig, t: float, panels: int = 4):
    return _panels(t - cfg.delta0, t + cfg.delta0, panels)


@dataclass(frozen=True)
class ConeReport:
    """Extremes of the three terms over the cone shell at each time."""

    times: tuple[float, ...]
    min_abs_I_plus: tuple[float, ...]
    max_abs_I_minus: tuple[float, ...]
    max_abs_II: tuple[float, ...]
    theta_psi_0: float
    delta0: float

    @staticmethod
    def _exponent(t, v) -> float:
        v = np.asarray(v)
        if np.all(v == 0):
            return -math.inf  # identically zero
        return loglog_slope(t, v)

    @property
    def I_minus_exponent(self) -> float:
        return self._exponent(self.times, self.max_abs_I_minus)

    @property
    def II_exponent(self) -> float:
        return self._exponent(self.times, self.max_abs_II)

    def as_dict(self) -> dict:
        return {
            "times": list(self.times),
            "theta_psi_0": self.theta_psi_0,
            "delta0": self.delta0,
            "min_abs_I_plus": list(self.min_abs_I_plus),
            "max_abs_I_minus": list(self.max_abs_I_minus),
            "max_abs_II": list(self.max_abs_II),
            "I_minus_exponent": self.I_minus_exponent,
            "II_exponent": self.II_exponent,
        }


def cone_report(cfg: WaveProfileConfig, t_list: Sequence[float]) -> ConeReport:
    ip, im, ii = [], [], []
    for t in t_list:
        xs, _ = _shell_nodes(cfg, t)
        xs = np.concatenate(([t - cfg.delta0], xs, [t + cfg.delta0]))
        ks = [wave_radial_kernel(cfg, x, t) for x in xs]
        ip.append(min(abs(k.I_plus) for k in ks))
        im.append(max(abs(k.I_minus) for k in ks))
        ii.append(max(abs(k.II) for k in ks))
    return ConeReport(
        tuple(float(t) for t in t_list),
        tuple(ip),
        tuple(im),
        tuple(ii),
        cfg.theta_psi(0.0).real,
        cfg.delta0,
    )


@dataclass(frozen=True)
class GrowthReport:
    d: int
    r: float
    times: tuple[float, ...]
    values: tuple[float, ...]
    verdict: SlopeVerdict

    def to_csv(self) -> str:
        return csv_table(["t", "value"], zip(self.times, self.values))

    def to_json(self) -> str:
        return dumps({"d": self.d, "r": self.r, **self.verdict.as_dict()})


def shell_norm(cfg: WaveProfileConfig, r: float, t: float) -> float:
    """``L^r`` norm of the wave solution over ``||x| - t| <= delta0``."""
    xs, ws = _shell_nodes(cfg, t)
    u = np.array([abs(wave_radial_kernel(cfg, x, t).u) for x in xs])
    if r == math.inf:
        return float(u.max())
    top = u.max()
    dens = ws * unit_sphere_area(cfg.d) * xs ** (cfg.d - 1) * (u / top) ** r
    return float(top * math.fsum(dens) ** (1 / r))


def wave_norm_growth(
    cfg: WaveProfileConfig, d: int, r: float, t_list: Sequence[float], tolerance: float = 0.05
) -> GrowthReport:
    """Shell norms at each ``t`` and their log-log slope against ``(d-1)(1/r - 1/2)``."""
    if d != cfg.d:
        raise DomainError(f"d={d} does not match the profile dimension {cfg.d}")
    if not r > 2:
        raise DomainError("r must exceed 2")
    if min(t_list) < 100:
        raise DomainError("times must be >= 100")
    vals = tuple(shell_norm(cfg, r, t) for t in t_list)
    target = (cfg.d - 1) * (1 / r - 0.5)
    verdict = SlopeVerdict(loglog_slope(t_list, vals), target, tolerance)
    return GrowthReport(cfg.d, r, tuple(float(t) for t in t_list), vals, verdict)


class Divergence(enum.Enum):
    DIVERGES = "diverges"
    CONVERGES = "converges"


def lorentz_divergence_predicate(alpha: Number, q: Number, p: Number) -> Divergence:
    """Whether ``int_0^1 lambda^(p(1 - 1/(alpha q)) - 1) d lambda`` diverges.

    It diverges exactly when ``1/q >= alpha``.
    """
    alpha, q, p = _coerce(alpha), _coerce(q), _coerce(p)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if not q >= 1:
        raise DomainError("q must be >= 1")
    if not (1 <= p < math.inf):
        raise DomainError("p must lie in [1, inf)")
    return Divergence.DIVERGES if _le(alpha, 1 / q) else Divergence.CONVERGES
