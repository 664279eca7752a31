"""Spectral free propagator, Duhamel operator, Picard iteration and the X-norm."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .solver import CauchyData, NonlinearitySpec, REACHED_T_MAX, Trajectory
from .spectral.grid import RadialField, RadialGrid
from .spectral.operators import (
    check_decay,
    dual_weights,
    physical_weights,
    radial_derivative,
)
from .spectral.transforms import forward_samples, inverse_samples
from .weights import ExponentPack, WeightSpec, critical_exponents, critical_power


def _sin_over_rho(t, rho):
    # sin(t rho) / rho with the rho -> 0 limit t
    t = np.asarray(t, dtype=float)
    return np.expand_dims(t, -1) * np.sinc(np.multiply.outer(t, rho) / np.pi)


def linear_propagator(data: CauchyData, t: float, check: bool = True) -> CauchyData:
    """Exact-in-time free evolution ``(u(t), u_t(t))`` by spectral multipliers."""
    grid = data.grid
    if check:
        check_decay(data.u0)
        check_decay(data.u1)
    rho = grid.rho
    U0 = forward_samples(grid, data.u0.samples)
    U1 = forward_samples(grid, data.u1.samples)
    c, s = np.cos(t * rho), np.sin(t * rho)
    u = c * U0 + _sin_over_rho(t, rho) * U1
    ut = -rho * s * U0 + c * U1
    return CauchyData(
        RadialField(grid, inverse_samples(grid, u)),
        RadialField(grid, inverse_samples(grid, ut)),
    )


def simpson_weights(m: int) -> np.ndarray:
    """Composite weights on ``m`` equal intervals (unit spacing).

    Simpson's rule for even ``m``; for odd ``m >= 3`` the last three
    intervals use the 3/8 rule; ``m = 1`` is the trapezoid.
    """
    if m < 1:
        return np.zeros(max(m + 1, 1))
    w = np.zeros(m + 1)
    if m == 1:
        w[:] = 0.5
        return w
    k = m if m % 2 == 0 else m - 3
    if k > 0:
        w[0:k:2] += 1.0 / 3
        w[1:k:2] += 4.0 / 3
        w[2 : k + 1 : 2] += 1.0 / 3
    if m % 2:
        w[k : k + 4] += np.array([3, 9, 9, 3]) / 8.0
    return w


def _check_forcing_grid(times: np.ndarray, dr: float) -> float:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("forcing needs at least two time samples")
    if abs(times[0]) > 1e-14:
        raise ValueError("forcing samples must start at t = 0")
    steps = np.diff(times)
    h = steps.mean()
    if np.abs(steps - h).max() > 1e-9 * max(h, 1.0):
        raise ValueError("forcing samples must be uniformly spaced")
    if h > dr / 2 * (1 + 1e-12):
        raise ValueError(f"under-resolved forcing: dtau={h:.4g} exceeds dr/2={dr / 2:.4g}")
    return h


def duhamel_all(grid: RadialGrid, times: np.ndarray, forcing: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Duhamel solution at every sample time; spectral arrays ``(M, N)``.

    ``u(t_j) = int_0^{t_j} sin((t_j - tau) D) / D F(tau) dtau`` by composite
    Simpson in ``tau``. Writing ``sin(rho (t - tau))`` through complex
    exponentials turns the rule into one weighted sum per ``t_j``.
    """
    h = _check_forcing_grid(times, grid.dr)
    rho = grid.rho
    Fh = np.array([forward_samples(grid, f) for f in forcing])
    E = np.exp(-1j * np.multiply.outer(times, rho)) * Fh
    M = len(times)
    U = np.zeros((M, grid.N))
    Ut = np.zeros((M, grid.N))
    for j in range(1, M):
        w = simpson_weights(j) * h
        C = w @ E[: j + 1]
        rot = np.exp(1j * times[j] * rho) * C
        U[j] = rot.imag / rho
        Ut[j] = rot.real
    return U, Ut


def duhamel(grid: RadialGrid, times: Sequence[float], forcing: np.ndarray, t: float | None = None) -> CauchyData:
    """Inhomogeneous solution with zero data at ``t`` (default: last sample).

    ``forcing`` holds physical-space samples ``F(tau_m, r_i)`` with shape
    ``(M, N)`` on uniformly spaced ``tau_m`` starting at 0 with spacing at
    most ``dr / 2``.
    """
    times = np.asarray(times, dtype=float)
    forcing = np.asarray(forcing, dtype=float)
    if t is not None:
        j = int(np.searchsorted(times, t - 1e-12 * max(1.0, abs(t))))
        if j >= len(times) or abs(times[j] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"t={t} is not a forcing sample time")
        times, forcing = times[: j + 1], forcing[: j + 1]
    if not np.any(forcing):
        z = RadialField.zeros(grid)
        return CauchyData(z, z)
    U, Ut = duhamel_all(grid, times, forcing)
    return CauchyData(
        RadialField(grid, inverse_samples(grid, U[-1])),
        RadialField(grid, inverse_samples(grid, Ut[-1])),
    )


# -- Picard iteration -----------------------------------------------------------


def _free_all(data: CauchyData, times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    grid = data.grid
    rho = grid.rho
    U0 = forward_samples(grid, data.u0.samples)
    U1 = forward_samples(grid, data.u1.samples)
    tr = np.multiply.outer(times, rho)
    U = np.cos(tr) * U0 + _sin_over_rho(times, rho) * U1
    Ut = -rho * np.sin(tr) * U0 + np.cos(tr) * U1
    return U, Ut


def _spectral_trajectory(grid, nl, times, U, Ut) -> Trajectory:
    u = np.array([inverse_samples(grid, x) for x in U])
    ut = np.array([inverse_samples(grid, x) for x in Ut])
    ur = np.array([radial_derivative(RadialField(grid, x)).samples for x in u])
    forcing = np.array([nl(a, b) for a, b in zip(ut, ur)])
    sup = np.sqrt(ut**2 + ur**2).max(axis=1)
    return Trajectory(
        grid=grid, nl=nl, times=times, u=u, ut=ut, ur=ur, forcing=forcing,
        termination=REACHED_T_MAX, t_end=float(times[-1]), blowup_time=None,
        step_times=times, sup_du=sup, probe=u[:, 0], steps=len(times) - 1,
    )


@dataclass
class PicardResult:
    iterates: list[Trajectory]
    increments: list[float]
    diverged: bool


def picard_iterate(
    data: CauchyData,
    nl: NonlinearitySpec,
    T_slab: float,
    k: int,
    dtau: float | None = None,
    pack: ExponentPack | None = None,
    growth_limit: float = 1e3,
) -> PicardResult:
    """Iterates ``u^(0) = H[u0, u1]``, ``u^(m+1) = H[u0, u1] + I[N[u^(m)]]``.

    Everything is spectral: the free part and the Duhamel term are exact
    multipliers, ``u_r`` is a spectral derivative. ``increments[m]`` is the
    X^0-norm of ``u^(m+1) - u^(m)``. Iteration stops with ``diverged`` once
    an iterate's X^0-norm exceeds ``growth_limit`` times the first one.
    """
    grid = data.grid
    check_decay(data.u0)
    check_decay(data.u1)
    dtau = grid.dr / 2 if dtau is None else dtau
    M = max(2, int(np.ceil(T_slab / dtau - 1e-9)))
    times = np.linspace(0.0, T_slab, M + 1)
    pack = pack or _default_pack(grid.n)
    U0, Ut0 = _free_all(data, times)
    free = _spectral_trajectory(grid, nl, times, U0, Ut0)
    iterates = [free]
    increments = []
    base = x_norm(free, 0.0, pack, T_slab)
    diverged = False
    for _ in range(k - 1):
        prev = iterates[-1]
        if nl.is_linear:
            U, Ut = U0, Ut0
        else:
            Ud, Utd = duhamel_all(grid, times, prev.forcing)
            U, Ut = U0 + Ud, Ut0 + Utd
        nxt = _spectral_trajectory(grid, nl, times, U, Ut)
        diff = _difference(nxt, prev)
        increments.append(x_norm(diff, 0.0, pack, T_slab))
        iterates.append(nxt)
        size = x_norm(nxt, 0.0, pack, T_slab)
        if not np.isfinite(size) or size > growth_limit * max(base, 1e-300):
            diverged = True
            break
    return PicardResult(iterates, increments, diverged)


def _difference(a: Trajectory, b: Trajectory) -> Trajectory:
    return Trajectory(
        grid=a.grid, nl=a.nl, times=a.times, u=a.u - b.u, ut=a.ut - b.ut, ur=a.ur - b.ur,
        forcing=a.forcing - b.forcing, termination=a.termination, t_end=a.t_end, blowup_time=None,
    )


def _default_pack(n: int) -> ExponentPack:
    return critical_exponents(n, critical_power(n), 1.75)


# -- X-norm ---------------------------------------------------------------------


def _time_integral(t: np.ndarray, y: np.ndarray, rule: str) -> float:
    if len(t) < 2:
        return 0.0
    if rule == "trapezoid":
        return float(np.trapezoid(y, t))
    if rule == "simpson":
        from scipy.integrate import simpson

        return float(simpson(y, x=t))
    raise ValueError(f"unknown quadrature rule {rule!r}")


def x_norm(traj: Trajectory, nu: float, pack: ExponentPack, T: float, rule: str = "trapezoid") -> float:
    """Discrete ``X_nu^T`` norm.

    ``A~_T^{-1} ||w^{1/2} d D^nu u||_{L^2_T L^2_x} + sup_t ||d u||_{H^nu-dot}``
    with ``w`` the weight of ``pack`` and ``A~_T`` its regime-dependent time
    factor. ``d u = (u_t, u_r)``; the energy part uses
    ``||u_t||_{H^nu}^2 + ||u||_{H^(nu+1)}^2``.
    """
    if not 0 <= nu < 1:
        raise ValueError(f"nu must lie in [0, 1), got {nu}")
    if traj.u is None:
        raise ValueError("trajectory has no recorded fields")
    grid = traj.grid
    keep = traj.times <= T * (1 + 1e-12)
    t = traj.times[keep]
    if len(t) == 0:
        return 0.0
    w = WeightSpec.paper(grid.n, pack.delta, pack.delta1)
    mu = physical_weights(grid) * w(grid.r) * grid.omega
    dens, energy = [], []
    for m in np.flatnonzero(keep):
        u, ut, ur = traj.u[m], traj.ut[m], traj.ur[m]
        if nu == 0:
            a, b = ut, ur
            e = grid.omega * physical_weights(grid) @ (ut**2 + ur**2)
        else:
            Ut = forward_samples(grid, ut) * grid.rho**nu
            Uu = forward_samples(grid, u) * grid.rho**nu
            a = inverse_samples(grid, Ut)
            b = radial_derivative(RadialField(grid, inverse_samples(grid, Uu))).samples
            e = grid.omega * (
                dual_weights(grid, 2 * nu + grid.n - 1) @ forward_samples(grid, ut) ** 2
                + dual_weights(grid, 2 * nu + 2 + grid.n - 1) @ forward_samples(grid, u) ** 2
            )
        dens.append(mu @ (a**2 + b**2))
        energy.append(e)
    weighted = np.sqrt(max(_time_integral(t, np.array(dens), rule), 0.0))
    factor = pack.a_tilde(T) if T > 0 else 1.0
    return float(weighted / factor + np.sqrt(max(energy)))


__all__ = [
    "linear_propagator",
    "duhamel",
    "duhamel_all",
    "simpson_weights",
    "picard_iterate",
    "PicardResult",
    "x_norm",
]
