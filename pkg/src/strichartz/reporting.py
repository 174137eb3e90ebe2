"""Deterministic CSV/JSON output, slope fits and a binary field container."""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .grid import GridField, SpaceTimeField, SpatialGrid

SCHEMA = 1
MAGIC = b"STRZ"
_HEADER = struct.Struct("<4sIIIdI")  # magic, version, dim, n, half_extent, n_times


def fmt(x) -> str:
    """Shortest round-trip text for a number (``repr`` of the float)."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def csv_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, str) or obj is None:
        return obj
    v = float(obj)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


def dumps(doc: dict) -> str:
    """Canonical JSON: ``schema`` key, sorted keys, fixed indentation."""
    out = {"schema": SCHEMA}
    out.update(_plain(doc))
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("slope fit needs at least two positive samples")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


@dataclass(frozen=True)
class SlopeVerdict:
    slope: float
    target: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.slope - self.target) <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "target": self.target,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# -- binary field container -----------------------------------------------


def write_field(path, F: SpaceTimeField | GridField) -> None:
    """Write a field as header, float64 times, then little-endian complex64 samples."""
    if isinstance(F, GridField):
        F = SpaceTimeField(F.grid, [0.0], F.values[None])
    g = F.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, SCHEMA, g.dim, g.n, g.half_extent, F.times.size))
        fh.write(np.asarray(F.times, dtype="<f8").tobytes())
        fh.write(np.asarray(F.values, dtype="<c8").tobytes())


def read_field(path) -> SpaceTimeField:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, dim, n, half, nt = _HEADER.unpack_from(raw)
    if magic != MAGIC or version != SCHEMA:
        raise DomainError("not a field container of a supported version")
    g = SpatialGrid(dim, n, half)
    off = _HEADER.size
    times = np.frombuffer(raw, dtype="<f8", count=nt, offset=off)
    off += 8 * nt
    vals = np.frombuffer(raw, dtype="<c8", count=nt * g.size, offset=off)
    return SpaceTimeField(g, times, vals.reshape((nt,) + g.shape).astype(np.complex128))


def slice_csv(f: GridField) -> str:
    """Values along the first axis through the grid centre: ``x,re,im``."""
    g = f.grid
    centre = (g.n // 2,) * (g.dim - 1)
    line = f.values[(slice(None),) + centre]
    return csv_table(["x", "re", "im"], zip(g.axis, line.real, line.imag))
