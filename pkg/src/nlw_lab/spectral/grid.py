"""Radial grids and the field containers that live on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.special import gamma


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (2*pi for n=2, 4*pi for n=3)."""
    return 2.0 * np.pi ** (n / 2) / gamma(n / 2)


@dataclass(frozen=True)
class RadialGrid:
    """Staggered radial grid ``r_i = (i + 1/2) dr`` on ``[0, R]``.

    The dual grid ``rho_k = (k + 1/2) drho`` with ``drho = pi / R`` carries
    transforms; its cutoff ``N * drho = pi / dr`` is the grid Nyquist frequency.
    """

    n: int
    N: int
    R: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n}")
        if int(self.N) != self.N or self.N < 8:
            raise ValueError(f"N must be an integer >= 8, got {self.N}")
        if not (np.isfinite(self.R) and self.R > 0):
            raise ValueError(f"R must be positive, got {self.R}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "R", float(self.R))

    @property
    def dr(self) -> float:
        return self.R / self.N

    @property
    def drho(self) -> float:
        return np.pi / self.R

    @property
    def rho_max(self) -> float:
        return np.pi / self.dr

    @cached_property
    def r(self) -> np.ndarray:
        r = (np.arange(self.N) + 0.5) * self.dr
        r.flags.writeable = False
        return r

    @cached_property
    def rho(self) -> np.ndarray:
        rho = (np.arange(self.N) + 0.5) * self.drho
        rho.flags.writeable = False
        return rho

    @property
    def omega(self) -> float:
        return sphere_area(self.n)

    def refined(self, factor: int = 2) -> "RadialGrid":
        """Same domain, ``factor`` times more nodes."""
        return RadialGrid(self.n, self.N * factor, self.R)

    def sample(self, fn: Callable[[np.ndarray], np.ndarray]) -> "RadialField":
        return RadialField(self, np.asarray(fn(self.r), dtype=float))


def _as_samples(grid: RadialGrid, samples) -> np.ndarray:
    arr = np.array(samples, dtype=float)
    if arr.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} samples, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("field samples must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class RadialField:
    """Samples ``u(r_i)`` of a radial function."""

    grid: RadialGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_samples(self.grid, self.samples))

    @property
    def r(self) -> np.ndarray:
        return self.grid.r

    def with_samples(self, samples) -> "RadialField":
        return RadialField(self.grid, samples)

    def scaled(self, lam: float) -> "RadialField":
        return RadialField(self.grid, lam * self.samples)

    def __add__(self, other: "RadialField") -> "RadialField":
        _check_same(self.grid, other.grid)
        return RadialField(self.grid, self.samples + other.samples)

    def __sub__(self, other: "RadialField") -> "RadialField":
        _check_same(self.grid, other.grid)
        return RadialField(self.grid, self.samples - other.samples)

    @classmethod
    def zeros(cls, grid: RadialGrid) -> "RadialField":
        return cls(grid, np.zeros(grid.N))


@dataclass(frozen=True)
class SpectralField:
    """Samples ``F(rho_k)`` of a radial Fourier transform on the dual grid."""

    grid: RadialGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_samples(self.grid, self.samples))

    @property
    def rho(self) -> np.ndarray:
        return self.grid.rho

    def with_samples(self, samples) -> "SpectralField":
        return SpectralField(self.grid, samples)

    def multiplied(self, m: np.ndarray) -> "SpectralField":
        return SpectralField(self.grid, self.samples * m)


def _check_same(a: RadialGrid, b: RadialGrid) -> None:
    if a != b:
        raise ValueError(f"grid mismatch: {a} vs {b}")
