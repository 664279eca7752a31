"""Numerical blow-up times bracketed by grid refinement."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .solver import BLOW_UP, REACHED_T_MAX, CauchyData, NonlinearitySpec, SolverConfig, evolve
from .spectral.grid import RadialGrid


@dataclass(frozen=True)
class BumpProfile:
    """``peak * exp(W - W / (1 - (r/radius)^2))`` on ``r < radius``, zero outside.

    ``W = sharpness``; larger values flatten the edge and concentrate the mass
    toward the center, which suppresses grid dispersion at the wavefront.
    """

    radius: float = 3.0
    peak: float = 1.0
    sharpness: float = 1.0

    def __call__(self, r: np.ndarray) -> np.ndarray:
        x = np.asarray(r, dtype=float) / self.radius
        inside = np.abs(x) < 1
        out = np.zeros_like(x)
        W = self.sharpness
        out[inside] = self.peak * np.exp(W - W / (1.0 - x[inside] ** 2))
        return out

    @property
    def support(self) -> float:
        return self.radius

    def to_dict(self) -> dict:
        return {"kind": "bump", **asdict(self)}


@dataclass(frozen=True)
class ConstantProfile:
    """``value`` everywhere; the ODE blow-up case lives in the causally inert interior."""

    value: float = 1.0

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(r, dtype=float), self.value)

    @property
    def support(self) -> float:
        return math.inf

    def to_dict(self) -> dict:
        return {"kind": "constant", **asdict(self)}


def profile_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("kind")
    if kind == "bump":
        return BumpProfile(**d)
    if kind == "constant":
        return ConstantProfile(**d)
    raise ValueError(f"unknown profile kind {kind!r}")


@dataclass(frozen=True)
class LadderConfig:
    """Refinement ladder for :func:`estimate_lifespan`.

    Levels run in order of ``dr_ladder``; the loop stops once two successive
    blow-up times agree within ``tol`` (after at least ``min_levels``).
    ``R = None`` picks ``t_max + support + margin`` (or ``t_max + margin`` for
    non-compact profiles, whose interior is then causally shielded only up
    to ``R - t``).
    """

    n: int = 3
    t_max: float = 100.0
    dr_ladder: tuple[float, ...] = (0.1, 0.05, 0.025, 0.0125)
    tol: float = 0.01
    min_levels: int = 2
    R: float | None = None
    margin: float = 2.0
    cfl: float = 0.5
    blowup_threshold: float = 1e6
    early_threshold: float = 1e4
    growth_limit: float = 0.05
    active_window: bool = True
    max_wall_time: float | None = None

    def radius_for(self, profile) -> float:
        if self.R is not None:
            return self.R
        support = profile.support if math.isfinite(profile.support) else 0.0
        return self.t_max + support + self.margin

    def solver_config(self, dr: float, R: float) -> SolverConfig:
        return SolverConfig.for_spacing(
            self.n, dr, R, self.t_max,
            cfl=self.cfl, blowup_threshold=self.blowup_threshold,
            early_threshold=self.early_threshold, record_fields=False,
            growth_limit=self.growth_limit, active_window=self.active_window,
            max_wall_time=self.max_wall_time,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dr_ladder"] = list(self.dr_ladder)
        return d


@dataclass
class LifespanResult:
    """Numerical blow-up time of ``u0 = 0, u1 = eps * profile``.

    ``T_high`` is the blow-up time at the finest level; ``T_low`` the last
    time up to which the two finest sup-norm histories agree within the
    ladder tolerance. Censored runs carry ``T_low = T_high = t_max``.
    """

    eps: float
    T_low: float
    T_high: float
    refinement_history: list[dict] = field(default_factory=list)
    converged: bool = False
    censored: bool = False
    termination: str = REACHED_T_MAX

    @property
    def T(self) -> float:
        return self.T_high

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "T_low": self.T_low,
            "T_high": self.T_high,
            "converged": self.converged,
            "censored": self.censored,
            "termination": self.termination,
            "refinement_history": self.refinement_history,
            "label": "numerical blow-up time",
        }


def _agreement_time(coarse, fine, tol: float) -> float:
    # latest time at which the two sup-norm histories agree within tol
    t = fine.step_times
    if t.size == 0 or coarse.step_times.size < 2:
        return 0.0
    t_common = t[t <= coarse.step_times[-1]]
    sc = np.interp(t_common, coarse.step_times, coarse.sup_du)
    sf = fine.sup_du[: t_common.size]
    good = np.flatnonzero(np.abs(sc - sf) <= tol * np.abs(sf))
    return float(t_common[good[-1]]) if good.size else 0.0


def estimate_lifespan(
    profile,
    eps: float,
    nl: NonlinearitySpec,
    ladder: LadderConfig | None = None,
) -> LifespanResult:
    """Run the refinement ladder for data ``(0, eps * profile)``.

    Each history entry records the level's spacing, its bracket
    ``[T(early_threshold), T(blowup_threshold)]`` and its termination.
    """
    ladder = ladder or LadderConfig()
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    R = ladder.radius_for(profile)
    history: list[dict] = []
    runs = []
    converged = False
    for level, dr in enumerate(ladder.dr_ladder):
        cfg = ladder.solver_config(dr, R)
        grid = RadialGrid(ladder.n, cfg.N, cfg.R)
        data = CauchyData(grid.sample(lambda r: 0.0 * r), grid.sample(lambda r: eps * profile(r)))
        traj = evolve(data, nl, cfg)
        T_hi = float(traj.blowup_time if traj.termination == BLOW_UP else traj.t_end)
        T_lo = float(traj.crossing_times.get("early", T_hi))
        history.append({
            "level": level, "dr": float(cfg.dr), "N": cfg.N, "dt": float(cfg.dt),
            "bracket": [T_lo, T_hi], "termination": traj.termination, "steps": traj.steps,
        })
        runs.append(traj)
        if len(runs) >= 2:
            a, b = history[-2]["bracket"][1], history[-1]["bracket"][1]
            converged = abs(a - b) <= ladder.tol * max(abs(b), 1e-300)
            if converged and len(runs) >= ladder.min_levels:
                break
    last = runs[-1]
    if last.termination != BLOW_UP:
        T = float(last.t_end)
        censored = last.termination == REACHED_T_MAX
        return LifespanResult(eps, T, T, history, bool(converged), censored, last.termination)
    T_high = float(last.blowup_time)
    if len(runs) >= 2:
        T_low = min(_agreement_time(runs[-2], last, ladder.tol), T_high)
    else:
        T_low = float(history[-1]["bracket"][0])
    return LifespanResult(eps, T_low, T_high, history, bool(converged), False, BLOW_UP)


__all__ = [
    "BumpProfile",
    "ConstantProfile",
    "profile_from_dict",
    "LadderConfig",
    "LifespanResult",
    "estimate_lifespan",
]
