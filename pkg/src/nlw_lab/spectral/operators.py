"""Fourier multipliers, Littlewood-Paley blocks and norms on radial grids."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.fft import dct, dst
from scipy.integrate import quad

from .grid import RadialField, RadialGrid, SpectralField
from .quadrature import corrected_weights
from .transforms import forward_samples, inverse_samples

DECAY_TOL = 1e-10
DECAY_FRACTION = 0.1


class DecayError(ValueError):
    """Field is not numerically zero near ``R``; nonlocal operators would wrap it."""


def check_decay(f: RadialField, tol: float = DECAY_TOL, fraction: float = DECAY_FRACTION) -> None:
    """Require ``|f| <= tol * max|f|`` on the outer ``fraction`` of the grid."""
    u = np.abs(f.samples)
    peak = u.max()
    if peak == 0.0:
        return
    start = int(np.floor((1.0 - fraction) * f.grid.N))
    tail = u[start:].max()
    if tail > tol * peak:
        raise DecayError(
            f"field not decayed near R={f.grid.R}: outer {fraction:.0%} max "
            f"{tail:.3e} exceeds {tol:.1e} x peak {peak:.3e}"
        )


# -- measures ---------------------------------------------------------------


@lru_cache(maxsize=128)
def _physical_weights(grid: RadialGrid) -> np.ndarray:
    w = corrected_weights(grid.n - 1, grid.N, grid.dr)
    w.flags.writeable = False
    return w


@lru_cache(maxsize=256)
def _dual_weights(grid: RadialGrid, alpha: float) -> np.ndarray:
    if alpha > -1:
        w = corrected_weights(alpha, grid.N, grid.drho)
    else:
        w = grid.rho**alpha * grid.drho
    w.flags.writeable = False
    return w


def physical_weights(grid: RadialGrid) -> np.ndarray:
    """Quadrature weights for ``int_0^R (.) r^(n-1) dr`` (sphere factor excluded)."""
    return _physical_weights(grid)


def dual_weights(grid: RadialGrid, alpha: float | None = None) -> np.ndarray:
    """Quadrature weights for ``int (.) rho^alpha drho``; default ``alpha = n - 1``."""
    a = grid.n - 1.0 if alpha is None else float(alpha)
    return _dual_weights(grid, a)


# -- norms ------------------------------------------------------------------


def l2_norm(f: RadialField) -> float:
    """``||f||_{L^2(R^n)}``."""
    return float(np.sqrt(f.grid.omega * (physical_weights(f.grid) @ f.samples**2)))


def spectral_l2_norm(F: SpectralField) -> float:
    """``||F||_{L^2(R^n)}`` on the dual side."""
    return float(np.sqrt(F.grid.omega * (dual_weights(F.grid) @ F.samples**2)))


def sobolev_norm(f: RadialField, s: float, homogeneous: bool = True, check: bool = True) -> float:
    """Sobolev norm ``||rho^s F||`` (homogeneous) or ``||<rho>^s F||``.

    ``s = 0`` is evaluated on the physical side, so it agrees with
    :func:`weighted_L2_norm` for ``w = 1`` to rounding.
    """
    if not -1.0 <= s <= 2.0:
        raise ValueError(f"s must lie in [-1, 2], got {s}")
    grid = f.grid
    if s == 0:
        return l2_norm(f)
    if check:
        check_decay(f)
    F = forward_samples(grid, f.samples)
    if not homogeneous:
        w = dual_weights(grid) * (1.0 + grid.rho**2) ** s
        return float(np.sqrt(grid.omega * (w @ F**2)))
    alpha = 2.0 * s + grid.n - 1.0
    if alpha <= -1.0:
        # int rho^alpha |F|^2 converges only if F vanishes at the origin.
        peak = np.abs(F).max()
        if peak > 0 and abs(F[0]) > 1e-8 * peak:
            raise ValueError(f"divergent low-frequency integral for s={s}, n={grid.n}")
    return float(np.sqrt(grid.omega * (dual_weights(grid, alpha) @ F**2)))


def weighted_L2_norm(
    f: RadialField,
    w: Callable[[np.ndarray], np.ndarray],
    cell_average: bool = True,
) -> float:
    """``(omega * sum w(r_i) |f_i|^2 mu_i)^(1/2)`` with ``mu`` the physical weights.

    With ``cell_average`` the origin node uses the ``r^(n-1) dr`` average of
    ``w`` over ``[0, dr]``, which keeps integrable singular weights honest.
    """
    grid = f.grid
    wv = np.asarray(w(grid.r), dtype=float) * np.ones(grid.N)
    if cell_average:
        n, dr = grid.n, grid.dr
        val, _ = quad(lambda r: w(np.asarray(r)) * r ** (n - 1), 0.0, dr, limit=200)
        wv = wv.copy()
        wv[0] = float(val) * n / dr**n
    if not np.all(np.isfinite(wv)):
        raise ValueError("weight is not finite on the grid")
    return float(np.sqrt(grid.omega * (physical_weights(grid) * wv @ f.samples**2)))


# -- multipliers --------------------------------------------------------------


def apply_multiplier(f: RadialField, m: np.ndarray, check: bool = True) -> RadialField:
    """``T^{-1} diag(m) T f``."""
    if check:
        check_decay(f)
    F = forward_samples(f.grid, f.samples)
    return RadialField(f.grid, inverse_samples(f.grid, m * F))


def fractional_derivative(f: RadialField, s: float, check: bool = True) -> RadialField:
    """``D^s f`` with ``D = sqrt(-Laplacian)``, ``s in [0, 2]``."""
    if not 0.0 <= s <= 2.0:
        raise ValueError(f"s must lie in [0, 2], got {s}")
    if s == 0:
        return RadialField(f.grid, f.samples)
    return apply_multiplier(f, f.grid.rho**s, check=check)


def radial_derivative(f: RadialField) -> RadialField:
    """``d/dr`` of the even extension via a cosine/sine series (Dirichlet at ``R``)."""
    grid = f.grid
    c = dct(f.samples, type=4) / grid.N
    return RadialField(grid, -dst(c * grid.rho, type=4) / 2.0)


# -- Littlewood-Paley -----------------------------------------------------------


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def lp_cutoff(t: np.ndarray) -> np.ndarray:
    """``phi``: 1 on ``[0, 1]``, 0 beyond 2, smooth in between."""
    return 1.0 - _smooth_step(np.asarray(t, dtype=float) - 1.0)


def lp_range(grid: RadialGrid) -> tuple[int, int]:
    """Dyadic indices ``j`` with ``2^j`` in ``[2 pi / R, pi / dr]``."""
    jmin = int(np.ceil(np.log2(2.0 * np.pi / grid.R) - 1e-12))
    jmax = int(np.floor(np.log2(grid.rho_max) + 1e-12))
    if jmin > jmax:
        raise ValueError(f"no resolvable dyadic band for {grid}")
    return jmin, jmax


def lp_multiplier(grid: RadialGrid, j: int) -> np.ndarray:
    """``psi_j(rho)``; the two edge bands absorb everything beyond the range."""
    jmin, jmax = lp_range(grid)
    if not jmin <= j <= jmax:
        raise ValueError(f"band {j} outside resolvable range [{jmin}, {jmax}]")
    rho = grid.rho
    upper = lp_cutoff(rho / 2.0**j) if j < jmax else np.ones(grid.N)
    lower = lp_cutoff(rho / 2.0 ** (j - 1)) if j > jmin else np.zeros(grid.N)
    return upper - lower


@dataclass(frozen=True)
class LPBand:
    """Littlewood-Paley block ``S_j f``."""

    j: int
    field: RadialField


def lp_block(f: RadialField, j: int, check: bool = True) -> LPBand:
    """``S_j f``."""
    return LPBand(j, apply_multiplier(f, lp_multiplier(f.grid, j), check=check))


def lp_band_norms(f: RadialField, check: bool = True) -> dict[int, float]:
    """``{j: ||S_j f||_{L^2}}`` over the resolvable range, computed spectrally."""
    if check:
        check_decay(f)
    grid = f.grid
    F = forward_samples(grid, f.samples)
    w = dual_weights(grid)
    jmin, jmax = lp_range(grid)
    out = {}
    for j in range(jmin, jmax + 1):
        Fj = lp_multiplier(grid, j) * F
        out[j] = float(np.sqrt(grid.omega * (w @ Fj**2)))
    return out


def besov_norm_half(f: RadialField, check: bool = True) -> float:
    """``sum_j 2^(j/2) ||S_j f||_{L^2}`` over the resolvable range."""
    return float(sum(2.0 ** (j / 2.0) * v for j, v in lp_band_norms(f, check=check).items()))
