"""Exact-oracle identities of the radial spectral layer."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .spectral.grid import RadialGrid
from .spectral.operators import fractional_derivative, l2_norm, spectral_l2_norm
from .spectral.transforms import forward_transform, inverse_transform


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def to_dict(self) -> dict:
        return {**asdict(self), "pass": self.passed}


def origin_value(samples: np.ndarray, r: np.ndarray) -> float:
    """Value at ``r = 0`` of an even function from its first three nodes (fit in ``r^2``)."""
    x = r[:3] ** 2
    V = np.vander(x, 3, increasing=True)
    return float(np.linalg.solve(V, samples[:3])[0])


def spectral_selftest(n: int = 3, N: int = 1024, R: float = 20.0) -> list[Check]:
    """Gaussian self-duality, Plancherel, round trip, ``D^0``, ``D^2`` at the origin, semigroup."""
    grid = RadialGrid(n, N, R)
    gauss = grid.sample(lambda r: np.exp(-0.5 * r * r))
    G = forward_transform(gauss)
    checks = [Check("gaussian_self_duality", float(np.max(np.abs(G.samples - np.exp(-0.5 * grid.rho**2)))), 1e-6)]

    f = grid.sample(lambda r: (1.0 + r * r) * np.exp(-0.5 * r * r) + 0.5 * np.exp(-((r - 2.0) ** 2)) + 0.5 * np.exp(-((r + 2.0) ** 2)))
    F = forward_transform(f)
    checks.append(Check("plancherel", abs(spectral_l2_norm(F) - l2_norm(f)) / l2_norm(f), 1e-6))
    back = inverse_transform(F)
    checks.append(Check("round_trip", float(np.max(np.abs(back.samples - f.samples)) / np.max(np.abs(f.samples))), 1e-8))

    d0 = fractional_derivative(f, 0.0)
    checks.append(Check("D0_identity", float(np.max(np.abs(d0.samples - f.samples))), 0.0))

    lap = fractional_derivative(gauss, 2.0)
    checks.append(Check("D2_gaussian_origin", abs(origin_value(lap.samples, grid.r) - n), 1e-4))

    s1, s2 = 0.5, 0.7
    two = fractional_derivative(fractional_derivative(f, s1), s2, check=False)
    one = fractional_derivative(f, s1 + s2)
    checks.append(Check("semigroup", float(np.max(np.abs(two.samples - one.samples)) / np.max(np.abs(one.samples))), 1e-6))
    return checks


__all__ = ["Check", "origin_value", "spectral_selftest"]
