"""Ensemble ratio studies of trace, chain-rule, local energy and Strichartz inequalities.

Each ``<=`` with an implicit constant is probed through the distribution of
``lhs / rhs`` over a test-function family. The falsifiable surrogate for the
constant existing is a finite maximum ratio that is stable when the grid is
refined (or, for the space-time estimates, when the horizon grows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Sequence

import numpy as np

from .parallel import pmap
from .reporting import sanitize, write_csv, write_json, write_text
from .solver import Trajectory
from .spectral.grid import RadialField, RadialGrid
from .spectral.operators import (
    besov_norm_half,
    check_decay,
    fractional_derivative,
    physical_weights,
    sobolev_norm,
)
from .spectral.quadrature import corrected_weights
from .spectral.transforms import inverse_samples
from .weights import BOUNDED, ExponentPack, SamplingPlan, WeightSpec, estimate_Ap_constant

FAMILIES = ("gaussian-bumps", "dyadic-band-limited", "wave-packets")
STABILITY_TOL = 0.5


# -- ensembles ------------------------------------------------------------------


@dataclass(frozen=True)
class Ensemble:
    """Seeded family of smooth, rapidly decaying radial test functions.

    Members are sums of ``1..max_components`` components drawn once from
    ``numpy.random.default_rng(seed)``; the draw does not depend on the grid,
    so the same member can be sampled at ``N`` and ``2N``.

    * ``gaussian-bumps``: ``A (g(r - c) + g(r + c))`` with ``g(x) = exp(-(x/w)^2)``.
    * ``dyadic-band-limited``: transform ``A (h(rho - 1.5 2^j) + h(rho + 1.5 2^j))``
      with ``h`` a Gaussian of width ``2^j / 4``, an exact dilation family in ``j``.
    * ``wave-packets``: the Gaussian pair modulated by ``cos(k (r -+ c))``.

    The even reflections make every member smooth at the origin.
    """

    seed: int = 0
    size: int = 200
    family: str = "gaussian-bumps"
    n: int = 3
    R: float = 25.0
    amplitude: tuple[float, float] = (0.5, 2.0)
    width: tuple[float, float] = (0.1, 2.0)
    center_fraction: float = 0.5
    bands: tuple[int, int] = (1, 4)
    frequency: tuple[float, float] = (1.0, 10.0)
    packet_width: tuple[float, float] = (0.3, 2.0)
    max_components: int = 3

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.size < 1:
            raise ValueError("ensemble size must be positive")

    def grid(self, N: int) -> RadialGrid:
        return RadialGrid(self.n, N, self.R)

    def parameters(self) -> list[list[dict]]:
        rng = np.random.default_rng(self.seed)
        out = []
        for _ in range(self.size):
            k = int(rng.integers(1, self.max_components + 1))
            comps = []
            for _ in range(k):
                amp = float(rng.uniform(*self.amplitude)) * float(rng.choice([-1.0, 1.0]))
                if self.family == "gaussian-bumps":
                    comps.append({
                        "amp": amp,
                        "center": float(rng.uniform(0.0, self.center_fraction * self.R)),
                        "width": float(np.exp(rng.uniform(*np.log(self.width)))),
                    })
                elif self.family == "dyadic-band-limited":
                    comps.append({"amp": amp, "band": int(rng.integers(self.bands[0], self.bands[1] + 1))})
                else:
                    comps.append({
                        "amp": amp,
                        "center": float(rng.uniform(0.0, self.center_fraction * self.R)),
                        "width": float(rng.uniform(*self.packet_width)),
                        "k": float(rng.uniform(*self.frequency)),
                    })
            out.append(comps)
        return out

    def member(self, grid: RadialGrid, comps: list[dict]) -> RadialField:
        r = grid.r
        f = np.zeros(grid.N)
        for c in comps:
            if self.family == "gaussian-bumps":
                f += c["amp"] * (np.exp(-(((r - c["center"]) / c["width"]) ** 2))
                                 + np.exp(-(((r + c["center"]) / c["width"]) ** 2)))
            elif self.family == "dyadic-band-limited":
                f += c["amp"] * band_function(grid, c["band"])
            else:
                a, b = r - c["center"], r + c["center"]
                w, k = c["width"], c["k"]
                f += c["amp"] * (np.exp(-((a / w) ** 2)) * np.cos(k * a) + np.exp(-((b / w) ** 2)) * np.cos(k * b))
        field_ = RadialField(grid, f)
        check_decay(field_)
        return field_

    def members(self, grid: RadialGrid) -> list[RadialField]:
        return [self.member(grid, p) for p in self.parameters()]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed, "size": self.size, "family": self.family, "n": self.n, "R": self.R,
            "amplitude": list(self.amplitude), "width": list(self.width),
            "center_fraction": self.center_fraction, "bands": list(self.bands),
            "frequency": list(self.frequency), "packet_width": list(self.packet_width),
            "max_components": self.max_components,
        }


def band_function(grid: RadialGrid, j: int) -> np.ndarray:
    """Samples of the dyadic band member ``j`` (unit amplitude)."""
    rho = grid.rho
    c, w = 1.5 * 2.0**j, 0.25 * 2.0**j
    F = np.exp(-0.5 * ((rho - c) / w) ** 2) + np.exp(-0.5 * ((rho + c) / w) ** 2)
    return inverse_samples(grid, F)


# -- reports --------------------------------------------------------------------


@dataclass
class InequalityReport:
    """Ratio distribution for one inequality.

    ``stability`` holds the two max ratios being compared (resolution pair
    ``N``/``2N`` or horizon pair) and their relative change. A refused report
    carries ``refused=True`` and the failed precondition in ``reason``; it
    never passes.
    """

    id: str
    params: dict
    samples: list[dict] = field(default_factory=list)
    max_ratio: float = math.nan
    quantiles: dict = field(default_factory=dict)
    stability: dict = field(default_factory=dict)
    passed: bool = False
    refused: bool = False
    reason: str = ""
    degenerate: int = 0

    def to_dict(self) -> dict:
        return sanitize({
            "id": self.id,
            "params": self.params,
            "samples": self.samples,
            "max_ratio": self.max_ratio,
            "quantiles": self.quantiles,
            "stability": self.stability,
            "pass": self.passed,
            "refused": self.refused,
            "reason": self.reason,
            "degenerate": self.degenerate,
        })

    def write_json(self, path) -> None:
        write_json(path, self.to_dict())

    def write_csv(self, path) -> None:
        keys = ["index", "lhs", "rhs", "ratio"]
        extra = sorted({k for s in self.samples for k in s} - set(keys))
        rows = [[i, s["lhs"], s["rhs"], s["ratio"]] + [s.get(k, "") for k in extra] for i, s in enumerate(self.samples)]
        write_csv(path, keys + extra, rows)

    def write_svg(self, path) -> None:
        from .svgplot import Series, plot

        y = [s["ratio"] for s in self.samples]
        svg = plot([Series(list(range(len(y))), y, self.id, lines=False)],
                   title=f"{self.id}: lhs/rhs", xlabel="sample index", ylabel="ratio")
        write_text(path, svg)


def refusal(id_: str, params: dict, reason: str) -> InequalityReport:
    return InequalityReport(id=id_, params=params, refused=True, passed=False, reason=reason)


def _ratio(lhs: float, rhs: float) -> float | None:
    """``None`` marks a degenerate ``0/0`` sample."""
    if lhs == 0.0 and rhs == 0.0:
        return None
    if rhs == 0.0:
        return math.inf
    return lhs / rhs


def _records(pairs: Sequence[tuple]) -> tuple[list[dict], int]:
    out, degenerate = [], 0
    for pair in pairs:
        lhs, rhs = float(pair[0]), float(pair[1])
        extra = pair[2] if len(pair) > 2 else {}
        q = _ratio(lhs, rhs)
        if q is None:
            degenerate += 1
            continue
        out.append({"lhs": lhs, "rhs": rhs, "ratio": q, **extra})
    return out, degenerate


def _max(records: list[dict]) -> float:
    return max((s["ratio"] for s in records), default=math.nan)


def _quantiles(records: list[dict]) -> dict:
    r = np.array([s["ratio"] for s in records])
    r = r[np.isfinite(r)]
    if r.size == 0:
        return {}
    qs = np.quantile(r, [0.05, 0.25, 0.5, 0.75, 0.95])
    return {k: float(v) for k, v in zip(("q05", "q25", "q50", "q75", "q95"), qs)}


def _change(a: float, b: float) -> float:
    if not (math.isfinite(a) and math.isfinite(b)) or a == 0:
        return math.inf
    return abs(b - a) / abs(a)


def summarize(
    id_: str,
    params: dict,
    pairs: Sequence[tuple],
    reference: Sequence[tuple] | None = None,
    labels: tuple[str, str] = ("N", "2N"),
    tol: float = STABILITY_TOL,
) -> InequalityReport:
    """Report from ``(lhs, rhs[, extra])`` pairs and an optional comparison run."""
    records, degenerate = _records(pairs)
    m = _max(records)
    stability: dict = {}
    ok = bool(records) and math.isfinite(m)
    if reference is not None:
        ref_records, _ = _records(reference)
        m2 = _max(ref_records)
        ch = _change(m, m2)
        stability = {labels[0]: m, labels[1]: m2, "change": ch, "tolerance": tol}
        ok = ok and ch <= tol
    report = InequalityReport(
        id=id_, params=params, samples=records, max_ratio=m, quantiles=_quantiles(records),
        stability=stability, passed=ok, degenerate=degenerate,
    )
    if not records:
        report.reason = "all samples degenerate"
    return report


# -- measures -------------------------------------------------------------------


def lq_norm(f: RadialField, w: WeightSpec | None, q: float) -> float:
    """``||w f||_{L^q(R^n)}``; ``q = inf`` is the grid sup of ``|w f|``.

    The power ``r^(a q)`` of the weight is folded into an end-corrected
    measure, so integrable singular weights keep full accuracy.
    """
    grid = f.grid
    a, b = (w.a, w.b) if w is not None else (0.0, 0.0)
    if math.isinf(q):
        return float(np.max(np.abs(f.samples) * (w(grid.r) if w is not None else 1.0)))
    alpha = grid.n - 1 + a * q
    if alpha <= -1:
        raise ValueError(f"weight r^{a} is not locally L^{q} on R^{grid.n}")
    mu = corrected_weights(alpha, grid.N, grid.dr) * (1.0 + grid.r**2) ** (0.5 * b * q)
    return float((grid.omega * (mu @ np.abs(f.samples) ** q)) ** (1.0 / q))


def refined_sup(h: np.ndarray) -> float:
    """Grid sup of ``|h|`` raised to the vertex of the parabola through the top three samples."""
    h = np.abs(np.asarray(h, dtype=float))
    i = int(np.argmax(h))
    top = float(h[i])
    if 0 < i < h.size - 1:
        y0, y1, y2 = h[i - 1], h[i], h[i + 1]
        curv = y0 - 2 * y1 + y2
        if curv < 0:
            top = max(top, float(y1 - (y2 - y0) ** 2 / (8 * curv)))
    return top


# -- trace estimates ----------------------------------------------------------------


def trace_pair(f: RadialField, s: float) -> tuple[float, float]:
    """``(sup r^(n/2-s) |f|, ||f||_{H^s-dot})``."""
    grid = f.grid
    lhs = float(np.max(grid.r ** (grid.n / 2 - s) * np.abs(f.samples)))
    if lhs == 0.0:
        return 0.0, 0.0
    return lhs, sobolev_norm(f, s)


def besov_trace_pair(f: RadialField) -> tuple[float, float]:
    """``(sup r^((n-1)/2) |f|, ||f||_{B^(1/2)_{2,1}})``."""
    grid = f.grid
    lhs = float(np.max(grid.r ** ((grid.n - 1) / 2) * np.abs(f.samples)))
    if lhs == 0.0:
        return 0.0, 0.0
    return lhs, besov_norm_half(f)


def _member_pair(comps, ensemble: Ensemble, grid: RadialGrid, pair_fn: Callable):
    return pair_fn(ensemble.member(grid, comps))


def ensemble_pairs(pair_fn: Callable, ensemble: Ensemble, N: int, jobs: int | None = 1) -> list[tuple]:
    """``pair_fn`` over every member sampled on the ``N``-point grid, in member order."""
    grid = ensemble.grid(N)
    fn = partial(_member_pair, ensemble=ensemble, grid=grid, pair_fn=pair_fn)
    return pmap(fn, ensemble.parameters(), jobs=jobs)


def _resolution_study(id_, params, pair_fn, ensemble, N, jobs) -> InequalityReport:
    base = ensemble_pairs(pair_fn, ensemble, N, jobs)
    fine = ensemble_pairs(pair_fn, ensemble, 2 * N, jobs)
    return summarize(id_, {**params, "N": N, "ensemble": ensemble.to_dict()}, base, fine,
                     labels=(f"N={N}", f"N={2 * N}"))


def test_trace(n: int, s: float, ensemble: Ensemble, N: int = 1024, jobs: int | None = 1) -> InequalityReport:
    """Ratios ``sup r^(n/2-s)|f| / ||f||_{H^s-dot}``; refused unless ``1/2 < s < n/2``."""
    params = {"n": n, "s": s}
    if not 0.5 < s < n / 2:
        return refusal("trace", params, f"s={s} outside (1/2, n/2) = (0.5, {n / 2:g}); the estimate fails there")
    if ensemble.n != n:
        raise ValueError(f"ensemble dimension {ensemble.n} differs from n={n}")
    return _resolution_study("trace", params, partial(trace_pair, s=s), ensemble, N, jobs)


def test_besov_trace(n: int, ensemble: Ensemble, N: int = 1024, jobs: int | None = 1) -> InequalityReport:
    """Ratios ``sup r^((n-1)/2)|f| / ||f||_{B^(1/2)_{2,1}}``."""
    if ensemble.n != n:
        raise ValueError(f"ensemble dimension {ensemble.n} differs from n={n}")
    return _resolution_study("besov_trace", {"n": n}, besov_trace_pair, ensemble, N, jobs)


# -- weighted fractional chain rule ---------------------------------------------------


@dataclass(frozen=True)
class ChainRuleCase:
    """``F(v) = |v|^p``, ``G(v) = p |v|^(p-1)`` and the exponent/weight data.

    ``q2 = inf`` selects the endpoint form with ``q1 = q``. For this family
    ``|F'(tau v + (1-tau) w)| <= p max(|v|, |w|)^(p-1) <= G(v) + G(w)``, so the
    constant ``mu = 1`` works.
    """

    n: int
    s: float
    p: float
    q: float
    q1: float
    q2: float
    w1: WeightSpec
    w2: WeightSpec
    mu: float = 1.0

    def __post_init__(self):
        if not 0 < self.s < 1:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        for name in ("q", "q1"):
            v = getattr(self, name)
            if not 1 < v < math.inf:
                raise ValueError(f"{name} must lie in (1, inf), got {v}")
        if not self.q2 > 1:
            raise ValueError(f"q2 must exceed 1, got {self.q2}")
        if abs(1 / self.q - 1 / self.q1 - 1 / self.q2) > 1e-12:
            raise ValueError(f"Hoelder triple fails: 1/{self.q} != 1/{self.q1} + 1/{self.q2}")
        if self.w1.n != self.n or self.w2.n != self.n:
            raise ValueError("weights must live in R^n")

    @classmethod
    def corollary(cls, n: int, delta: float, delta1: float, s: float = 0.5, p: float = 2.0) -> "ChainRuleCase":
        """``w1 = w^(1/2)``, ``w2 = w^(-1)``, ``q = q1 = 2``, ``q2 = inf`` for the delta weight ``w``."""
        w = WeightSpec.paper(n, delta, delta1)
        return cls(n=n, s=s, p=p, q=2.0, q1=2.0, q2=math.inf, w1=w.pow(0.5), w2=w.pow(-1.0))

    @classmethod
    def unweighted(cls, n: int, s: float = 0.5, p: float = 2.0, q: float = 2.0, q1: float = 4.0, q2: float = 4.0):
        one = WeightSpec.constant(n)
        return cls(n=n, s=s, p=p, q=q, q1=q1, q2=q2, w1=one, w2=one)

    def F(self, v: np.ndarray) -> np.ndarray:
        return np.abs(v) ** self.p

    def dF(self, v: np.ndarray) -> np.ndarray:
        return self.p * np.sign(v) * np.abs(v) ** (self.p - 1)

    def G(self, v: np.ndarray) -> np.ndarray:
        return self.p * np.abs(v) ** (self.p - 1)

    def hypotheses(self) -> list[tuple[str, WeightSpec, float]]:
        """``(label, weight, index)`` triples that must lie in ``A_index``."""
        w1, w2 = self.w1, self.w2
        if math.isinf(self.q2):
            return [
                ("w1^q in A_q", w1.pow(self.q), self.q),
                ("(w1 w2)^q in A_q", (w1 * w2).pow(self.q), self.q),
                ("w2^-1 in A_1", w2.pow(-1.0), 1.0),
            ]
        return [
            ("(w1 w2)^q in A_q", (w1 * w2).pow(self.q), self.q),
            ("w1^q1 in A_q1", w1.pow(self.q1), self.q1),
            ("w2^q2 in A_q2", w2.pow(self.q2), self.q2),
        ]

    def to_dict(self) -> dict:
        return {
            "n": self.n, "s": self.s, "p": self.p, "q": self.q, "q1": self.q1, "q2": self.q2,
            "w1": self.w1.to_dict(), "w2": self.w2.to_dict(), "mu": self.mu,
            "F": f"|v|^{self.p:g}", "G": f"{self.p:g}|v|^{self.p - 1:g}",
        }


@lru_cache(maxsize=256)
def _ap_check(spec: WeightSpec, index: float, plan: SamplingPlan) -> tuple[str, float]:
    rep = estimate_Ap_constant(spec, index, plan)
    return rep.verdict, rep.estimate


def check_hypotheses(case: ChainRuleCase, plan: SamplingPlan | None = None) -> tuple[bool, list[dict]]:
    """Numerical ``A_p`` verdicts for every weight hypothesis of ``case``."""
    plan = plan or SamplingPlan()
    out, ok = [], True
    for label, spec, index in case.hypotheses():
        if spec.a == 0 and spec.b == 0:
            verdict, est = BOUNDED, 1.0
        else:
            verdict, est = _ap_check(spec, float(index), plan)
        out.append({"hypothesis": label, "weight": spec.to_dict(), "index": index, "verdict": verdict, "estimate": est})
        ok = ok and verdict == BOUNDED
    return ok, out


def chain_rule_pair(u: RadialField, case: ChainRuleCase) -> tuple[float, float, dict]:
    """``(||w1 w2 D^s F(u)||_q, ||w1 D^s u||_q1 ||w2 G(u)||_q2, extra)``.

    For ``q2 = inf`` the rhs uses :func:`refined_sup`; ``extra`` keeps the
    plain grid sup for comparison.
    """
    grid = u.grid
    Fu = RadialField(grid, case.F(u.samples))
    if not np.any(Fu.samples):
        return 0.0, 0.0, {}
    lhs = lq_norm(fractional_derivative(Fu, case.s), case.w1 * case.w2, case.q)
    a = lq_norm(fractional_derivative(u, case.s), case.w1, case.q1)
    g = case.G(u.samples)
    extra = {}
    if math.isinf(case.q2):
        h = case.w2(grid.r) * g
        b = refined_sup(h)
        extra = {"rhs_grid_sup": float(a * np.max(np.abs(h)))}
    else:
        b = lq_norm(RadialField(grid, g), case.w2, case.q2)
    return lhs, a * b, extra


def test_chain_rule(
    case: ChainRuleCase,
    ensemble: Ensemble,
    N: int = 1024,
    jobs: int | None = 1,
    plan: SamplingPlan | None = None,
) -> InequalityReport:
    """Ratio study of the weighted chain rule; refused if an ``A_p`` hypothesis is not confirmed."""
    if ensemble.n != case.n:
        raise ValueError(f"ensemble dimension {ensemble.n} differs from n={case.n}")
    ok, checks = check_hypotheses(case, plan)
    params = {"case": case.to_dict(), "hypotheses": checks}
    if not ok:
        failed = [c["hypothesis"] for c in checks if c["verdict"] != BOUNDED]
        return refusal("chain_rule", params, "A_p hypothesis not confirmed: " + ", ".join(failed))
    return _resolution_study("chain_rule", params, partial(chain_rule_pair, case=case), ensemble, N, jobs)


# -- local energy (KSS / Morawetz) ------------------------------------------------------


KSS_VARIANTS = ("kss3", "kss2", "kss1")


def _kss_shape(variant: str, pack: ExponentPack) -> tuple[float, float, Callable[[float], float]]:
    d, d1 = pack.delta, pack.delta1
    if variant == "kss3":
        return 0.0, 0.0, lambda T: T**d
    if variant == "kss2":
        return -d, d, lambda T: min(T**d, math.sqrt(math.log(2.0 + T)))
    if variant == "kss1":
        return -d - d1, d + d1, lambda T: min(T**d, 1.0)
    raise ValueError(f"unknown KSS variant {variant!r}")


def _weighted_density(grid: RadialGrid, values_sq: np.ndarray, a: float, b: float) -> np.ndarray:
    # omega * int r^a <r>^b v^2 r^(n-1) dr for every row of values_sq
    mu = corrected_weights(grid.n - 1 + a, grid.N, grid.dr) * (1.0 + grid.r**2) ** (0.5 * b)
    return grid.omega * (values_sq @ mu)


def kss_pairs(traj: Trajectory, pack: ExponentPack, T: float, variants: Sequence[str] = KSS_VARIANTS) -> dict:
    """``{variant: (lhs, rhs)}`` at horizon ``T`` from a recorded trajectory.

    lhs is ``F_T^-1 ||r^(-1/2+delta) <r>^beta du||_{L^2_T L^2} + sup_t ||du||_{L^2}``
    and rhs ``||du(0)||_{L^2} + F_T ||r^(1/2-delta) <r>^-beta Box u||_{L^2_T L^2}``
    with ``F_T`` the variant's time factor. Time integrals use the trapezoid
    rule on the stored samples with ``t <= T``.
    """
    if traj.forcing is None or traj.u is None:
        raise ValueError("trajectory lacks a forcing record")
    if T > traj.t_end * (1 + 1e-12) or T <= 0:
        raise ValueError(f"T={T} outside (0, {traj.t_end}]")
    grid = traj.grid
    keep = traj.times <= T * (1 + 1e-12)
    t = traj.times[keep]
    du2 = traj.ut[keep] ** 2 + traj.ur[keep] ** 2
    box2 = traj.forcing[keep] ** 2
    mu0 = grid.omega * physical_weights(grid)
    energy = np.sqrt(du2 @ mu0)
    e0, esup = float(energy[0]), float(energy.max())
    d = pack.delta
    out = {}
    for v in variants:
        beta_l, beta_r, factor = _kss_shape(v, pack)
        left = _weighted_density(grid, du2, -1.0 + 2 * d, 2 * beta_l)
        right = _weighted_density(grid, box2, 1.0 - 2 * d, 2 * beta_r)
        L = math.sqrt(max(float(np.trapezoid(left, t)), 0.0)) if t.size > 1 else 0.0
        Rf = math.sqrt(max(float(np.trapezoid(right, t)), 0.0)) if t.size > 1 else 0.0
        FT = factor(T)
        out[v] = (L / FT + esup, e0 + FT * Rf)
    return out


def test_kss(
    pack: ExponentPack,
    trajectory: Trajectory,
    T_grid: Sequence[float],
    max_spread: float = 3.0,
) -> InequalityReport:
    """Per-variant ratios over ``T_grid`` and their spread ``max / min``.

    The ``delta1`` variant needs ``delta1 > 0`` and is refused otherwise;
    the remaining variants still run.
    """
    if trajectory.forcing is None:
        raise ValueError("trajectory lacks a forcing record")
    variants = [v for v in KSS_VARIANTS if v != "kss1" or pack.delta1 > 0]
    refused = [] if "kss1" in variants else ["kss1: needs delta1 > 0"]
    params = {"pack": pack.to_dict(), "T_grid": list(T_grid), "variants": variants,
              "refused_variants": refused, "max_spread": max_spread}
    per_T = {float(T): kss_pairs(trajectory, pack, float(T), variants) for T in T_grid}
    samples, degenerate = [], 0
    stability = {}
    ok = True
    for v in variants:
        ratios = []
        for T, pairs in per_T.items():
            lhs, rhs = pairs[v]
            q = _ratio(lhs, rhs)
            if q is None:
                degenerate += 1
                continue
            samples.append({"variant": v, "T": T, "lhs": lhs, "rhs": rhs, "ratio": q})
            ratios.append(q)
        if ratios:
            spread = max(ratios) / min(ratios) if min(ratios) > 0 else math.inf
            stability[v] = {"ratios": ratios, "spread": spread}
            ok = ok and math.isfinite(spread) and spread <= max_spread
    m = _max(samples)
    ok = ok and bool(samples) and math.isfinite(m)
    rep = InequalityReport(id="kss", params=params, samples=samples, max_ratio=m,
                           quantiles=_quantiles(samples), stability=stability, passed=ok, degenerate=degenerate)
    if not samples:
        rep.reason = "all samples degenerate"
    return rep


# -- 2-D Strichartz ---------------------------------------------------------------------


def strichartz_pair(traj: Trajectory, q: float, T: float) -> tuple[float, float]:
    """``(||du||_{L^q_T L^inf_x}, ||du(0)||_{H^s-dot} + ||Box u||_{L^1_T H^s-dot})``, ``s = 1 - 1/q``."""
    grid = traj.grid
    if grid.n != 2:
        raise ValueError(f"the radial Strichartz harness is two-dimensional, got n={grid.n}")
    if traj.u is None or traj.forcing is None:
        raise ValueError("trajectory lacks recorded fields")
    s = 1.0 - 1.0 / q
    keep = traj.times <= T * (1 + 1e-12)
    t = traj.times[keep]
    sup = np.sqrt(traj.ut[keep] ** 2 + traj.ur[keep] ** 2).max(axis=1)
    lhs = float(np.trapezoid(sup**q, t)) ** (1.0 / q) if t.size > 1 else 0.0
    u0, u1 = RadialField(grid, traj.u[0]), RadialField(grid, traj.ut[0])
    data = math.hypot(sobolev_norm(u1, s) if np.any(u1.samples) else 0.0,
                      sobolev_norm(u0, s + 1.0) if np.any(u0.samples) else 0.0)
    f = traj.forcing[keep]
    fn = np.array([sobolev_norm(RadialField(grid, x), s, check=False) if np.any(x) else 0.0 for x in f])
    forcing = float(np.trapezoid(fn, t)) if t.size > 1 else 0.0
    return lhs, data + forcing


def test_strichartz_2d(
    q: float,
    trajectories: Sequence[Trajectory],
    T_big: float | None = None,
    tol: float = STABILITY_TOL,
) -> InequalityReport:
    """Ratios on ``[0, T_big]`` compared with ``[0, T_big / 2]`` (tail convergence)."""
    params = {"q": q, "s": 1.0 - 1.0 / q}
    if not q > 2:
        return refusal("strichartz_2d", params, f"q={q} must exceed 2")
    if any(tr.grid.n != 2 for tr in trajectories):
        raise ValueError("the radial Strichartz harness is two-dimensional")
    T_big = T_big if T_big is not None else min(tr.t_end for tr in trajectories)
    params["T_big"] = T_big
    full = [strichartz_pair(tr, q, T_big) for tr in trajectories]
    half = [strichartz_pair(tr, q, T_big / 2) for tr in trajectories]
    return summarize("strichartz_2d", params, full, half, labels=(f"T={T_big:g}", f"T={T_big / 2:g}"), tol=tol)


__all__ = [
    "FAMILIES",
    "Ensemble",
    "band_function",
    "InequalityReport",
    "refusal",
    "summarize",
    "lq_norm",
    "refined_sup",
    "trace_pair",
    "besov_trace_pair",
    "ensemble_pairs",
    "test_trace",
    "test_besov_trace",
    "ChainRuleCase",
    "check_hypotheses",
    "chain_rule_pair",
    "test_chain_rule",
    "KSS_VARIANTS",
    "kss_pairs",
    "test_kss",
    "strichartz_pair",
    "test_strichartz_2d",
]
