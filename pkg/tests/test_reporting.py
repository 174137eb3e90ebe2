import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strichartz.errors import DomainError
from strichartz.grid import GridField, SpaceTimeField, SpatialGrid
from strichartz.reporting import (
    SlopeVerdict,
    csv_table,
    dumps,
    fmt,
    loglog_slope,
    read_field,
    slice_csv,
    write_field,
)


class TestText:
    def test_fmt_round_trip(self):
        assert fmt(0.1) == "0.1" and fmt(3) == "3" and float(fmt(1 / 3)) == 1 / 3

    def test_csv(self):
        assert csv_table(["t", "value"], [(1.0, 2), (2.5, 0.1)]) == "t,value\n1.0,2\n2.5,0.1\n"

    def test_dumps_canonical(self):
        a = dumps({"b": 1.0, "a": [np.float64(2.0), math.inf], "flag": np.bool_(True)})
        b = dumps({"flag": True, "a": [2.0, math.inf], "b": 1.0})
        assert a == b
        doc = json.loads(a)
        assert doc["schema"] == 1 and doc["a"] == [2.0, "inf"] and list(doc) == sorted(doc)


class TestSlope:
    @settings(max_examples=100, deadline=None)
    @given(p=st.floats(-3, 3), c=st.floats(1e-3, 1e3))
    def test_power_law(self, p, c):
        t = np.geomspace(1, 100, 7)
        assert loglog_slope(t, c * t**p) == pytest.approx(p, abs=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            loglog_slope([1, 2], [1, 0])

    def test_verdict(self):
        v = SlopeVerdict(-0.96, -1.0, 0.05)
        assert v.passed and v.as_dict()["pass"] is True
        assert not SlopeVerdict(-0.9, -1.0, 0.05).passed


class TestFieldContainer:
    def test_round_trip(self, tmp_path):
        g = SpatialGrid(2, 16, 3.0)
        rng = np.random.default_rng(0)
        shape = (3, 16, 16)
        vals = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).astype(np.complex64)
        F = SpaceTimeField(g, [0.0, 0.5, 1.0], vals)
        path = tmp_path / "f.bin"
        write_field(path, F)
        back = read_field(path)
        assert back.grid == g
        assert np.array_equal(back.times, F.times)
        assert np.array_equal(back.values, vals.astype(np.complex128))

    def test_single_slice(self, tmp_path):
        g = SpatialGrid(1, 16, 2.0)
        path = tmp_path / "g.bin"
        write_field(path, GridField(g, np.ones(16)))
        assert read_field(path).times.tolist() == [0.0]

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"XXXX" + bytes(40))
        with pytest.raises(DomainError):
            read_field(path)


def test_slice_csv():
    g = SpatialGrid(2, 16, 2.0)
    vals = np.arange(256).reshape(16, 16).astype(complex)
    lines = slice_csv(GridField(g, vals)).splitlines()
    assert lines[0] == "x,re,im" and len(lines) == 17
    assert lines[1] == f"{fmt(g.axis[0])},8.0,0.0"
