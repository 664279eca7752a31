"""Flat binary and CSV serialization of radial fields."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import RadialField, RadialGrid

_HEADER = struct.Struct("<qqd")


def field_to_bytes(f: RadialField) -> bytes:
    """Header ``(n, N, R)`` as little-endian int64, int64, float64, then N float64."""
    g = f.grid
    return _HEADER.pack(g.n, g.N, g.R) + np.asarray(f.samples, dtype="<f8").tobytes()


def field_from_bytes(buf: bytes) -> RadialField:
    if len(buf) < _HEADER.size:
        raise ValueError("buffer shorter than field header")
    n, N, R = _HEADER.unpack_from(buf)
    body = buf[_HEADER.size:]
    if len(body) != 8 * N:
        raise ValueError(f"expected {8 * N} payload bytes, got {len(body)}")
    return RadialField(RadialGrid(n, N, R), np.frombuffer(body, dtype="<f8").astype(float))


def write_field(path: str | Path, f: RadialField) -> None:
    Path(path).write_bytes(field_to_bytes(f))


def read_field(path: str | Path) -> RadialField:
    return field_from_bytes(Path(path).read_bytes())


def write_field_csv(path: str | Path, f: RadialField) -> None:
    data = np.column_stack([f.grid.r, f.samples])
    np.savetxt(path, data, delimiter=",", header="r,value", comments="", fmt="%.17g")
