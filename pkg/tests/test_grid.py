import numpy as np
import pytest

from strichartz.errors import DomainError, NumericError, PeriodizationError, RangeError
from strichartz.grid import (
    GridField,
    LPPartition,
    SpaceTimeField,
    SpatialGrid,
    apply_multiplier,
    boundary_decay,
    homogeneous_power,
    lp_profile,
    lp_projection,
    make_test_function,
    require_decay,
    transform,
)


def random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return GridField(grid, v)


def test_grid_validation():
    with pytest.raises(DomainError):
        SpatialGrid(4, 32, 1.0)
    with pytest.raises(DomainError):
        SpatialGrid(1, 48, 1.0)
    with pytest.raises(DomainError):
        SpatialGrid(1, 8, 1.0)
    with pytest.raises(DomainError):
        SpatialGrid(1, 32, 0.0)
    g = SpatialGrid(2, 64, 4.0)
    assert g.spacing == 0.125
    assert np.isclose(g.freq_axis[1], np.pi / 4.0)


def test_nonfinite_field_rejected():
    g = SpatialGrid(1, 16, 1.0)
    v = np.zeros(16)
    v[3] = np.nan
    with pytest.raises(NumericError):
        GridField(g, v)


class TestTransform:
    def test_zero(self):
        g = SpatialGrid(1, 32, 3.0)
        assert np.all(transform(GridField(g, np.zeros(32))).values == 0)

    def test_gaussian_at_origin(self):
        g = SpatialGrid(1, 1024, 20.0)
        f = GridField(g, np.exp(-g.axis**2 / 2))
        fh = transform(f)
        assert abs(fh.values[0] - np.sqrt(2 * np.pi)) < 1e-10

    def test_gaussian_profile_2d(self):
        g = SpatialGrid(2, 128, 12.0)
        fh = transform(GridField(g, np.exp(-g.radius**2 / 2)))
        expected = 2 * np.pi * np.exp(-g.freq_sq / 2)
        assert np.max(np.abs(fh.values - expected)) < 1e-10

    @pytest.mark.parametrize("dim,n", [(1, 256), (2, 64), (3, 16)])
    def test_round_trip(self, dim, n):
        f = random_field(SpatialGrid(dim, n, 2.5), seed=dim)
        back = transform(transform(f), "inverse")
        rel = np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))
        assert rel < 1e-12

    @pytest.mark.parametrize("dim,n", [(1, 512), (2, 64), (3, 32)])
    def test_plancherel(self, dim, n):
        g = SpatialGrid(dim, n, 7.0)
        f = random_field(g, seed=10 + dim)
        fh = transform(f)
        lhs = g.cell_volume * np.sum(np.abs(f.values) ** 2)
        rhs = (g.freq_spacing / (2 * np.pi)) ** dim * np.sum(np.abs(fh.values) ** 2)
        assert abs(lhs - rhs) / lhs < 1e-10

    def test_domain_checks(self):
        g = SpatialGrid(1, 16, 1.0)
        f = GridField(g, np.ones(16))
        with pytest.raises(DomainError):
            transform(f, "inverse")
        with pytest.raises(DomainError):
            transform(f, "sideways")


class TestMultiplier:
    def test_identity(self):
        f = random_field(SpatialGrid(2, 64, 3.0))
        out = apply_multiplier(f, np.ones(1))
        assert np.max(np.abs(out.values - f.values)) < 1e-12 * np.max(np.abs(f.values))

    def test_zeroth_power_on_mean_free(self):
        g = SpatialGrid(1, 256, 10.0)
        f = GridField(g, g.axis * np.exp(-g.axis**2))
        out = apply_multiplier(f, homogeneous_power(0.0))
        assert np.max(np.abs(out.values - f.values)) < 1e-10

    def test_translation(self):
        g = SpatialGrid(1, 256, 16.0)
        f = GridField(g, np.exp(-((g.axis - 1.0) ** 2)))
        k = 7
        a = k * g.spacing
        out = apply_multiplier(f, lambda grid: np.exp(1j * grid.freqs[0] * a))
        assert np.max(np.abs(out.values - np.roll(f.values, -k))) < 1e-12

    def test_composition(self):
        g = SpatialGrid(2, 64, 5.0)
        f = random_field(g, 3)
        m1 = lambda grid: np.exp(-0.3j * grid.freq_sq)
        m2 = lambda grid: 1.0 / (1.0 + grid.freq_abs)
        lhs = apply_multiplier(apply_multiplier(f, m2), m1)
        rhs = apply_multiplier(f, lambda grid: m1(grid) * m2(grid))
        assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12 * np.max(np.abs(f.values))

    def test_nonfinite_symbol_names_frequency(self):
        g = SpatialGrid(1, 32, 2.0)
        f = random_field(g)
        with np.errstate(divide="ignore"), pytest.raises(DomainError, match="xi="):
            apply_multiplier(f, lambda grid: 1.0 / grid.freq_abs)


class TestLittlewoodPaley:
    def test_partition_of_unity(self):
        part = LPPartition(-3, 4)
        lo, hi = part.covered_band
        r = np.geomspace(lo, hi, 5001)
        assert np.max(np.abs(part.total(r) - 1.0)) < 1e-10

    def test_partition_on_grid_frequencies(self):
        g = SpatialGrid(2, 256, 20.0)
        part = LPPartition(-2, 5)
        k = g.freq_abs
        lo, hi = part.covered_band
        band = (k >= lo) & (k <= hi)
        assert np.max(np.abs(part.total(k[band]) - 1.0)) < 1e-10

    def test_profile_support(self):
        r = np.linspace(0, 4, 4001)
        vals = lp_profile(r)
        assert np.all(vals[(r <= 0.5) | (r >= 2)] == 0)
        assert np.all(vals >= 0)

    def test_ring_reproduced_by_two_levels(self):
        g = SpatialGrid(1, 512, 40.0)
        k = np.abs(g.freq_axis)
        spec = np.where((k >= 1) & (k <= 2), np.exp(-((k - 1.5) ** 2)), 0.0)
        f = transform(GridField(g, spec, "frequency"), "inverse")
        part = LPPartition(-2, 3)
        total = lp_projection(f, part, 0).values + lp_projection(f, part, 1).values
        assert np.max(np.abs(total - f.values)) < 1e-10

    def test_constant_killed(self):
        g = SpatialGrid(1, 64, 4.0)
        f = GridField(g, np.full(64, 3.0))
        part = LPPartition(-1, 3)
        for j in part.levels:
            assert np.max(np.abs(lp_projection(f, part, j).values)) < 1e-12

    def test_random_bandlimited_sum(self):
        g = SpatialGrid(2, 128, 30.0)
        part = LPPartition(-2, 2)
        lo, hi = part.covered_band
        rng = np.random.default_rng(7)
        k = g.freq_abs
        spec = (rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)) * (
            (k >= lo) & (k <= hi)
        )
        f = transform(GridField(g, spec, "frequency"), "inverse")
        total = sum(lp_projection(f, part, j).values for j in part.levels)
        assert np.max(np.abs(total - f.values)) < 1e-10 * np.max(np.abs(f.values))

    def test_level_out_of_range(self):
        g = SpatialGrid(1, 32, 2.0)
        with pytest.raises(RangeError):
            lp_projection(random_field(g), LPPartition(0, 2), 5)


class TestTestFunctions:
    def test_gaussian_unit_peak(self):
        g = SpatialGrid(2, 64, 8.0)
        f = make_test_function("gaussian", g, width=1.0)
        assert f.values[32, 32] == 1.0

    def test_smooth_bump_even_and_supported(self):
        g = SpatialGrid(1, 1024, 0.5)
        f = make_test_function("smooth_bump", g, support=(-0.1, 0.1), normalize=True)
        x = g.axis
        assert np.all(f.values[np.abs(x) >= 0.1] == 0)
        inner = f.values[1:]  # x -> -x maps index i to n - i
        assert np.allclose(inner, inner[::-1], atol=1e-15)
        assert abs(g.spacing * f.values.real.sum() - 1.0) < 1e-12

    def test_annular_bump_spectrum(self):
        g = SpatialGrid(2, 256, 60.0)
        f = make_test_function("annular_bump", g)
        fh = np.abs(transform(f).values)
        k = g.freq_abs
        outside = (k < 0.5) | (k > 2.0)
        assert fh[outside].max() <= 1e-8 * fh.max()

    @pytest.mark.parametrize(
        "kind,params",
        [("gaussian", {"width": 0.0}), ("smooth_bump", {"support": (1.0, 1.0)}), ("nope", {})],
    )
    def test_invalid(self, kind, params):
        with pytest.raises(DomainError):
            make_test_function(kind, SpatialGrid(1, 32, 2.0), **params)

    def test_boundary_decay(self):
        g = SpatialGrid(1, 256, 10.0)
        wide = make_test_function("gaussian", g, width=3.0)
        narrow = make_test_function("gaussian", g, width=1.0)
        assert boundary_decay(wide) > 1e-12
        with pytest.raises(PeriodizationError):
            require_decay(wide)
        require_decay(narrow)


class TestSpaceTime:
    def test_uniform_times_required(self):
        g = SpatialGrid(1, 16, 1.0)
        with pytest.raises(DomainError):
            SpaceTimeField(g, [0.0, 1.0, 3.0], np.zeros((3, 16)))

    def test_separable(self):
        g = SpatialGrid(1, 16, 1.0)
        h = GridField(g, np.arange(16.0))
        F = SpaceTimeField.separable(g, [0.0, 0.5], lambda t: 1 + t, h)
        assert np.allclose(F.values[1], 1.5 * np.arange(16.0))
        assert F.time_step == 0.5
        assert len(F.slices) == 2
