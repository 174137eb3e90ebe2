import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from strichartz.counterexamples import (
    Divergence,
    GaussianExperiment,
    WaveProfileConfig,
    cone_report,
    endpoint_integrand,
    gaussian_endpoint_divergence,
    gaussian_forcing_norm,
    gaussian_response,
    gaussian_response_grid,
    gaussian_weak_norm,
    lorentz_divergence_predicate,
    unit_ball_volume,
    wave_norm_growth,
    wave_radial_kernel,
    wave_solution_direct,
)
from strichartz.errors import DomainError
from strichartz.grid import GridField, SpatialGrid
from strichartz.norms import lorentz_norm
from strichartz.reporting import loglog_slope


class TestGaussianResponse:
    def test_origin(self):
        assert gaussian_response(3, 0.0, 0.0) == 1

    def test_magnitude(self):
        assert abs(gaussian_response(2, math.sqrt(3), 0.0)) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("d,n", [(1, 4096), (2, 1024)])
    def test_grid_oracle(self, d, n):
        g = SpatialGrid(d, n, 160.0)
        u = gaussian_response_grid(g, 10.0)
        exact = gaussian_response(d, 10.0, g.radius)
        assert np.max(np.abs(u - exact)) / np.max(np.abs(exact)) < 1e-6

    def test_duhamel_identity(self):
        # two-sided time integral of e^{-i(t-s)|xi|^2} exp(-|xi|^2/2)/(1+4s^2)
        # equals a constant times exp(-(1+it)|xi|^2)
        t = 3.0
        ratios = []
        for xi in (0.3, 0.9, 1.6):
            w = xi**2
            # the odd sine part cancels; Fourier-weighted quadrature on the half line
            even = 2 * integrate.quad(lambda s: 1 / (1 + 4 * s * s), 0, np.inf, weight="cos", wvar=w)[0]
            val = even * np.exp(-1j * w * t) * math.exp(-(xi**2) / 2)
            ratios.append(val / np.exp(-(1 + 1j * t) * xi**2))
        assert np.allclose(ratios, ratios[0], rtol=1e-7)


class TestGaussianWeakNorm:
    @pytest.mark.parametrize("d,r,target", [(3, 6, -1.0), (2, 4, -0.5)])
    def test_slopes(self, d, r, target):
        ts = np.geomspace(10, 100, 11)
        slope = loglog_slope(ts, [gaussian_weak_norm(d, r, t) for t in ts])
        assert abs(slope - target) <= 0.01

    def test_grid_rearrangement(self):
        g = SpatialGrid(2, 2048, 20.0)
        t, r = 10.0, 4.0
        f = GridField(g, np.abs(gaussian_response(2, t, g.radius)))
        assert lorentz_norm(f, r) == pytest.approx(gaussian_weak_norm(2, r, t), rel=1e-4)

    @settings(max_examples=100, deadline=None)
    @given(
        d=st.integers(1, 5),
        r=st.floats(1.0, 20.0),
        t=st.floats(0.0, 1e3),
        lam=st.floats(0.01, 0.999),
    )
    def test_is_supremum(self, d, r, t, lam):
        # lambda |{|u| > lambda}|^(1/r) never exceeds the closed form
        amp = (1 + t * t) ** (-d / 4)
        w = 4 * (1 + t * t)
        level = lam * amp
        radius_sq = w * math.log(amp / level)
        val = level * (unit_ball_volume(d) * radius_sq ** (d / 2)) ** (1 / r)
        assert val <= gaussian_weak_norm(d, r, t) * (1 + 1e-12)

    def test_sup_norm(self):
        assert gaussian_weak_norm(2, math.inf, math.sqrt(3)) == pytest.approx(0.5)

    def test_invalid(self):
        with pytest.raises(DomainError):
            gaussian_weak_norm(2, 0, 1.0)


class TestEndpoint:
    @pytest.mark.parametrize("d", [3, 4])
    def test_log_growth(self, d):
        v = {T: gaussian_endpoint_divergence(d, T).value for T in (10, 100, 1000)}
        a, b = v[100] - v[10], v[1000] - v[100]
        assert abs(a - b) / b < 0.05

    def test_increment_constant(self):
        # large-t integrand ~ K/t with K from the closed form
        d, r = 3, 6.0
        k = d / (2 * r)
        K = math.exp(-k) * unit_ball_volume(d) ** (1 / r) * (4 * k) ** k
        v1 = gaussian_endpoint_divergence(d, 1e4).value
        v2 = gaussian_endpoint_divergence(d, 1e5).value
        assert (v2 - v1) / math.log(10) == pytest.approx(K, rel=1e-6)

    def test_plumbing(self):
        assert endpoint_integrand(3, 10.0) == pytest.approx(gaussian_weak_norm(3, 6.0, 10.0), rel=1e-12)

    def test_derivative_is_integrand(self):
        h = 1e-3
        a = gaussian_endpoint_divergence(3, 10.0 - h).value
        b = gaussian_endpoint_divergence(3, 10.0 + h).value
        assert (b - a) / (2 * h) == pytest.approx(endpoint_integrand(3, 10.0), rel=1e-6)

    def test_forcing_norm_finite(self):
        rep = gaussian_endpoint_divergence(3, 100)
        assert math.isfinite(rep.forcing_norm) and rep.forcing_norm > 0
        assert float(rep) == rep.value

    def test_forcing_norm_oracle(self):
        # L^{b,1} norm = b int_0^inf m(lam)^(1/b) d lam, with m the distribution function
        d, b = 2, 3.0
        m = lambda lam: unit_ball_volume(d) * (-2 * math.log(lam)) ** (d / 2)
        spatial = b * integrate.quad(lambda lam: m(lam) ** (1 / b), 0, 1)[0]
        assert gaussian_forcing_norm(d, b) == pytest.approx(math.pi / 2 * spatial, rel=1e-9)

    @pytest.mark.parametrize("args", [(2, 10.0), (3, 1.5)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            gaussian_endpoint_divergence(*args)


class TestGaussianExperiment:
    def test_report(self):
        exp = GaussianExperiment(3, 6.0)
        doc = json.loads(exp.to_json())
        assert doc["pass"] and doc["target"] == pytest.approx(-1.0)
        assert exp.to_csv().splitlines()[0] == "t,value"

    def test_deterministic(self):
        assert GaussianExperiment(2, 4.0).to_json() == GaussianExperiment(2, 4.0).to_json()

    @pytest.mark.parametrize("kw", [{"d": 0, "r": 4.0}, {"d": 2, "r": 2.0}, {"d": 2, "r": 4.0, "t_range": (0.5, 2.0)}])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            GaussianExperiment(**kw)


@pytest.fixture(scope="module")
def cfg2():
    return WaveProfileConfig(2)


@pytest.fixture(scope="module")
def cfg3():
    return WaveProfileConfig(3)


class TestWaveProfile:
    def test_certificate(self, cfg2):
        assert cfg2.theta_psi(0.0).real > 0
        assert abs(cfg2.theta_psi(0.0).imag) < 1e-15
        assert cfg2.delta0 > 0
        assert cfg2.theta_psi(cfg2.first_zero).real == pytest.approx(0, abs=1e-12)

    def test_psi_normalized(self, cfg2):
        assert cfg2.psi_transform(0.0)[0] == pytest.approx(1.0, abs=1e-14)
        s = np.linspace(-0.2, 0.2, 101)
        assert np.array_equal(cfg2.psi(s), cfg2.psi(-s))

    def test_theta_psi_oracle(self, cfg2):
        # direct adaptive quadrature of the convolution at u = 0.7
        u = 0.7
        g = lambda r: math.sqrt(r) * cfg2.phi(r) * cfg2.psi_transform(r)[0]
        re = integrate.quad(lambda r: g(r) * math.cos(u * r), 0.5, 2, epsabs=1e-14)[0]
        im = integrate.quad(lambda r: -g(r) * math.sin(u * r), 0.5, 2, epsabs=1e-14)[0]
        assert cfg2.theta_psi(u) == pytest.approx(re + 1j * im, abs=1e-12)

    @pytest.mark.parametrize("kw", [{"d": 1}, {"d": 2, "c0": 0.0}, {"d": 2, "c0": 1.5}])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            WaveProfileConfig(**kw)


class TestWaveKernel:
    @pytest.mark.parametrize("x,t", [(5.0, 3.0), (30.0, 30.0), (101.0, 100.0)])
    def test_sphere_oracle_d3(self, cfg3, x, t):
        # (2 pi)^-3 4 pi / |x| int e^{itr} Psi(r) phi(r) r sin(r|x|) dr
        h = lambda r: cfg3.psi_transform(r)[0] * cfg3.phi(r) * r * math.sin(r * x)
        kw = dict(limit=2000, epsabs=1e-13, epsrel=1e-11, wvar=t)
        re = integrate.quad(h, 0.5, 2, weight="cos", **kw)[0]
        im = integrate.quad(h, 0.5, 2, weight="sin", **kw)[0]
        exact = (2 * math.pi) ** -3 * 4 * math.pi / x * (re + 1j * im)
        got = wave_radial_kernel(cfg3, x, t).u
        assert abs(got - exact) <= 1e-8 * abs(exact)

    def test_ii_vanishes_d3(self, cfg3):
        assert wave_radial_kernel(cfg3, 50.0, 50.0).II == 0

    @pytest.mark.parametrize("x,t", [(1.0, 0.0), (12.0, 10.0), (250.0, 250.5)])
    def test_bessel_consistency_d2(self, cfg2, x, t):
        split = wave_radial_kernel(cfg2, x, t).u
        direct = wave_solution_direct(cfg2, x, t)
        assert abs(split - direct) <= 1e-10 * abs(direct)

    def test_i_plus_is_convolution(self, cfg2):
        k = wave_radial_kernel(cfg2, 120.3, 120.0)
        assert k.I_plus == pytest.approx(cfg2.theta_psi(0.3), abs=1e-13)

    def test_small_radius(self, cfg2):
        with pytest.raises(DomainError):
            wave_radial_kernel(cfg2, 0.5, 1.0)


@pytest.fixture(scope="module")
def report(cfg2):
    return cone_report(cfg2, [100, 300, 1000])


class TestCone:
    def test_i_plus_bounded_below(self, report):
        assert min(report.min_abs_I_plus) > 0.1

    def test_decay_exponents(self, report):
        assert report.I_minus_exponent <= -0.95
        assert report.II_exponent <= -0.95

    def test_ii_d3_identically_zero(self, cfg3):
        assert cone_report(cfg3, [100, 300]).II_exponent == -math.inf


class TestNormGrowth:
    @pytest.mark.parametrize("d,r", [(2, math.inf), (3, 4.0)])
    def test_slope(self, d, r):
        rep = wave_norm_growth(WaveProfileConfig(d), d, r, [100, 200, 400, 800])
        assert rep.verdict.passed
        assert abs(rep.verdict.slope - (d - 1) * (1 / r - 0.5)) <= 0.05
        doc = json.loads(rep.to_json())
        assert set(doc) >= {"slope", "target", "tolerance", "pass"}

    def test_r2_excluded(self, cfg3):
        with pytest.raises(DomainError):
            wave_norm_growth(cfg3, 3, 2.0, [100, 200])

    def test_early_time_excluded(self, cfg3):
        with pytest.raises(DomainError):
            wave_norm_growth(cfg3, 3, 4.0, [50, 200])

    def test_dimension_mismatch(self, cfg3):
        with pytest.raises(DomainError):
            wave_norm_growth(cfg3, 2, 4.0, [100, 200])


class TestDivergencePredicate:
    @pytest.mark.parametrize(
        "alpha,q,p,expected",
        [
            (F(1, 4), 4, 2, Divergence.DIVERGES),
            (F(1, 4), 8, 1, Divergence.CONVERGES),
            (F(1, 4), 2, 1, Divergence.DIVERGES),
            (F(1, 4), 2, 100, Divergence.DIVERGES),
            (F(1, 2), 2, 1, Divergence.DIVERGES),
            (F(1, 2), 3, 5, Divergence.CONVERGES),
        ],
    )
    def test_table(self, alpha, q, p, expected):
        assert lorentz_divergence_predicate(alpha, q, p) is expected

    @settings(max_examples=300, deadline=None)
    @given(
        alpha=st.fractions(F(1, 100), 3),
        inv_q=st.fractions(F(1, 100), 1),
        p=st.fractions(1, 10),
    )
    def test_exponent_sign(self, alpha, inv_q, p):
        exponent = p * (1 - inv_q / alpha)
        expected = Divergence.DIVERGES if exponent <= 0 else Divergence.CONVERGES
        assert lorentz_divergence_predicate(alpha, 1 / inv_q, p) is expected

    @pytest.mark.parametrize("args", [(0, 2, 1), (F(1, 2), F(1, 2), 1), (F(1, 2), 2, math.inf)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            lorentz_divergence_predicate(*args)
