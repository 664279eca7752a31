"""End-to-end studies: lifespan scaling fits, local-energy uniformity,
chain-rule constants and 2-D long-time persistence.

Every study is a pure function of its config and seed. Each result can
write ``report.json``, ``summary.csv`` and SVG charts into a directory.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import linregress

from .inequalities import ChainRuleCase, Ensemble, InequalityReport, test_chain_rule, test_kss
from .lifespan import BumpProfile, LadderConfig, LifespanResult, estimate_lifespan
from .parallel import pmap
from .reporting import write_csv, write_json, write_text
from .solver import REACHED_T_MAX, CauchyData, NonlinearitySpec, SolverConfig, SpaceTimeBump, evolve
from .svgplot import Series, heatmap, plot
from .weights import CRITICAL, ExponentPack, WeightSpec, critical_exponents

# -- lifespan scaling -------------------------------------------------------------


@dataclass(frozen=True)
class ScalingTolerances:
    r2_min: float = 0.95
    slope_rel: float = 0.2
    min_points: int = 5
    min_span: float = 3.0


@dataclass
class ScalingFit:
    """Regression of ``ln T`` against ``eps^-(p-1)`` (critical) or ``ln eps``.

    Censored points are kept in ``points`` but excluded from the fit.
    """

    regime: str
    abscissa: str
    n: int
    p: float
    points: list[dict]
    slope: float
    intercept: float
    r2: float
    predicted_exponent: float | str
    passed: bool
    tolerances: ScalingTolerances
    monotone: bool
    reason: str = ""
    lifespans: list[LifespanResult] = field(default_factory=list, repr=False)

    def transform(self, eps: np.ndarray) -> np.ndarray:
        eps = np.asarray(eps, dtype=float)
        return eps ** (-(self.p - 1)) if self.regime == CRITICAL else np.log(eps)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime, "abscissa": self.abscissa, "n": self.n, "p": self.p,
            "points": self.points, "slope": self.slope, "intercept": self.intercept, "r2": self.r2,
            "predicted_exponent": self.predicted_exponent, "pass": self.passed,
            "tolerances": asdict(self.tolerances), "monotone": self.monotone, "reason": self.reason,
            "lifespans": [x.to_dict() for x in self.lifespans],
            "label": "numerical blow-up time",
        }

    def summary_rows(self) -> tuple[list[str], list[list]]:
        header = ["eps", "T_low", "T_high", "censored", "converged"]
        return header, [[p["eps"], p["T_low"], p["T"], p["censored"], p["converged"]] for p in self.points]

    def write(self, outdir: str | Path) -> None:
        out = Path(outdir)
        write_json(out / "report.json", self.to_dict())
        write_csv(out / "summary.csv", *self.summary_rows())
        eps = [p["eps"] for p in self.points]
        T = [p["T"] for p in self.points]
        cens = [p["censored"] for p in self.points]
        write_text(out / "T_vs_eps.svg", plot(
            [Series(eps, T, "T (hollow: censored)", lines=False, hollow=cens)],
            title=f"lifespan, n={self.n}, p={self.p:g}", xlabel="eps", ylabel="T", logx=True, logy=True))
        x = list(np.asarray(eps, dtype=float) ** (-(self.p - 1)))
        series = [Series(x, list(np.log(T)), "ln T", lines=False, hollow=cens)]
        if self.regime == CRITICAL and math.isfinite(self.slope):
            xs = [min(x), max(x)]
            series.append(Series(xs, [self.intercept + self.slope * v for v in xs], "fit", markers=False))
        write_text(out / "lnT_vs_eps_pow.svg", plot(
            series, title="ln T vs eps^-(p-1)", xlabel="eps^-(p-1)", ylabel="ln T"))


def _lifespan_task(eps: float, profile, nl: NonlinearitySpec, ladder: LadderConfig) -> LifespanResult:
    return estimate_lifespan(profile, eps, nl, ladder)


def fit_scaling(
    n: int,
    p: float,
    results: Sequence[LifespanResult],
    pack: ExponentPack,
    tol: ScalingTolerances = ScalingTolerances(),
) -> ScalingFit:
    """Regression and pass verdict for a set of lifespans."""
    critical = pack.regime == CRITICAL
    abscissa = "eps^-(p-1)" if critical else "ln eps"
    pts = sorted(results, key=lambda r: r.eps)
    points = [
        {"eps": r.eps, "T": r.T_high, "T_low": r.T_low, "censored": r.censored, "converged": r.converged}
        for r in pts
    ]
    # T nonincreasing in eps (ties allowed within 1e-9)
    Ts = [r.T_high for r in pts]
    monotone = all(b <= a * (1 + 1e-9) for a, b in zip(Ts, Ts[1:]))
    use = [r for r in pts if not r.censored and r.T_high > 0]
    fit = ScalingFit(
        regime=pack.regime, abscissa=abscissa, n=n, p=p, points=points, slope=math.nan,
        intercept=math.nan, r2=math.nan, predicted_exponent=pack.lifespan_exponent,
        passed=False, tolerances=tol, monotone=monotone, lifespans=list(pts),
    )
    if len(use) < tol.min_points:
        fit.reason = f"too many censored points: {len(use)} uncensored < {tol.min_points}"
        return fit
    eps = np.array([r.eps for r in use])
    x = fit.transform(eps)
    y = np.log([r.T_high for r in use])
    lr = linregress(x, y)
    fit.slope, fit.intercept, fit.r2 = float(lr.slope), float(lr.intercept), float(lr.rvalue**2)
    ok = fit.r2 >= tol.r2_min
    if critical:
        ok = ok and fit.slope > 0
        if not fit.slope > 0:
            fit.reason = "slope not positive"
    else:
        pred = float(pack.lifespan_exponent)
        err = abs(fit.slope - pred)
        ok = ok and err <= tol.slope_rel * abs(pred)
        if err > tol.slope_rel * abs(pred):
            fit.reason = f"slope {fit.slope:.3f} differs from {pred:.3f} by more than {tol.slope_rel:.0%}"
    if fit.r2 < tol.r2_min:
        fit.reason = (fit.reason + "; " if fit.reason else "") + f"R^2={fit.r2:.4f} below {tol.r2_min}"
    fit.passed = bool(ok)
    return fit


def lifespan_scaling(
    n: int,
    p: float,
    profile=None,
    eps_grid: Sequence[float] = (0.8, 0.75, 0.7, 0.65, 0.6),
    ladder: LadderConfig | None = None,
    nl: NonlinearitySpec | None = None,
    s: float = 1.75,
    tol: ScalingTolerances = ScalingTolerances(),
    jobs: int | None = 1,
) -> ScalingFit:
    """Lifespans over ``eps_grid`` (data ``u0 = 0``, ``u1 = eps * profile``) and their fit.

    The span requirement ``max eps / min eps >= tol.min_span`` applies to the
    power-law regimes; the critical law is exponential in ``1/eps`` and is
    probed over a narrow window by design.
    """
    profile = profile if profile is not None else BumpProfile()
    nl = nl or NonlinearitySpec(a=1.0, b=0.0, p=p)
    if nl.p != p:
        raise ValueError("nonlinearity power differs from p")
    ladder = ladder or LadderConfig(n=n, t_max=500.0)
    if ladder.n != n:
        raise ValueError("ladder dimension differs from n")
    pack = critical_exponents(n, p, s)
    eps = sorted(float(e) for e in eps_grid)
    if not eps or eps[0] <= 0:
        raise ValueError("eps grid must be positive")
    if pack.regime != CRITICAL and eps[-1] / eps[0] < tol.min_span * (1 - 1e-12):
        raise ValueError(f"eps grid spans a factor {eps[-1] / eps[0]:.2f} < {tol.min_span}")
    results = pmap(partial(_lifespan_task, profile=profile, nl=nl, ladder=ladder), eps, jobs=jobs)
    return fit_scaling(n, p, results, pack, tol)


# -- local energy uniformity ------------------------------------------------------------


@dataclass
class KSSStudy:
    pack: ExponentPack
    T_grid: list[float]
    reports: dict[str, InequalityReport]
    refined: dict[str, InequalityReport]
    max_spread: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "pack": self.pack.to_dict(), "T_grid": self.T_grid, "max_spread": self.max_spread,
            "T_span": max(self.T_grid) / min(self.T_grid),
            "pass": self.passed,
            "families": {k: r.to_dict() for k, r in self.reports.items()},
            "refined": {k: r.to_dict() for k, r in self.refined.items()},
        }

    def write(self, outdir: str | Path) -> None:
        out = Path(outdir)
        write_json(out / "report.json", self.to_dict())
        rows = []
        for fam, rep in self.reports.items():
            for v, st in rep.stability.items():
                rows.append([fam, v, max(st["ratios"]), min(st["ratios"]), st["spread"]])
        write_csv(out / "summary.csv", ["family", "variant", "max_ratio", "min_ratio", "spread"], rows)
        series = []
        for fam, rep in self.reports.items():
            for v in rep.params["variants"]:
                pts = [s for s in rep.samples if s["variant"] == v]
                series.append(Series([s["T"] for s in pts], [s["ratio"] for s in pts], f"{fam} {v}"))
        write_text(out / "kss_ratio_vs_T.svg", plot(series, title="local energy ratio vs T",
                                                    xlabel="T", ylabel="lhs/rhs", logx=True))


def kss_trajectory(family: str, n: int, dr: float, T_max: float, profile=None, source=None):
    """Free wave from ``u0 = profile`` or forced wave with zero data, recorded up to ``T_max``."""
    profile = profile if profile is not None else BumpProfile()
    source = source if source is not None else SpaceTimeBump()
    support = profile.support if family == "free" else source.support
    cfg = SolverConfig.for_spacing(n, dr, T_max + support + 2.0, T_max)
    g = cfg.grid
    zero = g.sample(lambda r: 0.0 * r)
    if family == "free":
        return evolve(CauchyData(g.sample(profile), zero), NonlinearitySpec(), cfg)
    if family == "forced":
        return evolve(CauchyData(zero, zero), NonlinearitySpec(), cfg, source=source)
    raise ValueError(f"unknown family {family!r}; use 'free' or 'forced'")


def _kss_task(job, pack, T_grid, max_spread, n):
    family, dr = job
    traj = kss_trajectory(family, n, dr, max(T_grid))
    return test_kss(pack, traj, T_grid, max_spread)


def kss_uniformity(
    pack: ExponentPack | None = None,
    T_grid: Sequence[float] = (1.0, 4.0, 16.0, 64.0),
    families: Sequence[str] = ("free", "forced"),
    dr: float = 0.0625,
    max_spread: float = 3.0,
    jobs: int | None = 1,
) -> KSSStudy:
    """Spread of the per-horizon constants for each family, plus a ``dr / 2`` rerun."""
    pack = pack or critical_exponents(3, 2.2, 1.9)
    jobs_list = [(f, dr) for f in families] + [(f, dr / 2) for f in families]
    reps = pmap(partial(_kss_task, pack=pack, T_grid=list(T_grid), max_spread=max_spread, n=pack.n),
                jobs_list, jobs=jobs)
    k = len(families)
    reports = dict(zip(families, reps[:k]))
    refined = dict(zip(families, reps[k:]))
    ok = all(r.passed for r in reports.values()) and all(r.passed for r in refined.values())
    return KSSStudy(pack, list(T_grid), reports, refined, max_spread, ok)


# -- 2-D persistence ------------------------------------------------------------------


@dataclass
class PersistenceRun:
    eps: float
    termination: str
    t_end: float
    norm: float

    @property
    def censored(self) -> bool:
        return self.termination == REACHED_T_MAX


@dataclass
class PersistenceReport:
    p: float
    t_max: float
    runs: list[PersistenceRun]
    linearity: float
    tolerance: float
    passed: bool
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "p": self.p, "t_max": self.t_max, "linearity": self.linearity, "tolerance": self.tolerance,
            "pass": self.passed, "reason": self.reason,
            "runs": [{**asdict(r), "censored": r.censored} for r in self.runs],
            "norm": "||du||_{L^{p-1}_t L^inf_x} on [0, t_end]",
        }

    def write(self, outdir: str | Path) -> None:
        out = Path(outdir)
        write_json(out / "report.json", self.to_dict())
        write_csv(out / "summary.csv", ["eps", "termination", "t_end", "norm"],
                  [[r.eps, r.termination, r.t_end, r.norm] for r in self.runs])
        write_text(out / "norm_vs_eps.svg", plot(
            [Series([r.eps for r in self.runs], [r.norm for r in self.runs], "norm", hollow=[not r.censored for r in self.runs])],
            title=f"persistence, n=2, p={self.p:g}", xlabel="eps", ylabel="norm", logx=True, logy=True))


def _persist_task(eps, p, nl_ab, t_max, dr, profile):
    a, b = nl_ab
    cfg = SolverConfig.for_spacing(2, dr, t_max + profile.support + 2.0, t_max,
                                   record_fields=False, active_window=True)
    g = cfg.grid
    data = CauchyData(g.sample(lambda r: 0.0 * r), g.sample(lambda r: eps * profile(r)))
    traj = evolve(data, NonlinearitySpec(a, b, p), cfg)
    q = p - 1
    norm = float(np.trapezoid(traj.sup_du**q, traj.step_times) ** (1 / q)) if traj.steps else 0.0
    return PersistenceRun(float(eps), traj.termination, float(traj.t_end), norm)


def global_persistence_2d(
    p: float = 4.0,
    eps: Sequence[float] = (0.05, 0.1),
    t_max: float = 100.0,
    dr: float = 0.05,
    a: float = 1.0,
    b: float = 0.0,
    profile=None,
    tolerance: float = 0.25,
    jobs: int | None = 1,
) -> PersistenceReport:
    """Runs censored at ``t_max`` count as persistence; the norm must scale like ``eps``.

    Linearity is ``max |(N_i / N_0) / (eps_i / eps_0) - 1|`` over the
    persisting runs with ``eps > 0``, at least two of which are required.
    Blow-up above every persisting ``eps`` is recorded but allowed; blow-up
    below a persisting ``eps`` is a failure.
    """
    if not p > 3:
        raise ValueError("the radial 2-D persistence study needs p > 3")
    profile = profile if profile is not None else BumpProfile()
    eps = sorted(float(e) for e in eps)
    runs = pmap(partial(_persist_task, p=p, nl_ab=(a, b), t_max=t_max, dr=dr, profile=profile), eps, jobs=jobs)
    reasons = []
    kept = [r for r in runs if r.censored and r.eps > 0]
    top = max((r.eps for r in kept), default=-math.inf)
    early = [r.eps for r in runs if not r.censored and r.eps < top]
    if early:
        reasons.append(f"no persistence at eps={early}")
    lin = math.inf
    if len(kept) < 2:
        reasons.append(f"{len(kept)} persisting run(s) with eps > 0; two are needed")
    elif kept[0].norm == 0:
        reasons.append("zero norm at the smallest eps")
    else:
        base = kept[0]
        lin = max(abs((r.norm / base.norm) / (r.eps / base.eps) - 1.0) for r in kept[1:])
        if lin > tolerance:
            reasons.append(f"norm ratio deviates {lin:.3f} from linear")
    ok = not reasons
    reason = "; ".join(reasons)
    return PersistenceReport(p, t_max, runs, lin, tolerance, ok, reason)


# -- chain-rule constants ---------------------------------------------------------------


@dataclass
class ChainRuleStudy:
    rows: list[dict]
    ensemble: Ensemble
    passed: bool

    def to_dict(self) -> dict:
        return {"ensemble": self.ensemble.to_dict(), "rows": self.rows, "pass": self.passed}

    def write(self, outdir: str | Path) -> None:
        out = Path(outdir)
        write_json(out / "report.json", self.to_dict())
        header = ["weight", "s", "p", "max_ratio", "change", "refused", "pass"]
        write_csv(out / "summary.csv", header, [[r[k] for k in header] for r in self.rows])
        weights = sorted({r["weight"] for r in self.rows}, key=[r["weight"] for r in self.rows].index)
        ss = sorted({r["s"] for r in self.rows})
        ps = sorted({r["p"] for r in self.rows})
        labels, values = [], []
        for w in weights:
            for s in ss:
                labels.append(f"{w} s={s:g}")
                row = []
                for p in ps:
                    hit = [r for r in self.rows if r["weight"] == w and r["s"] == s and r["p"] == p]
                    row.append(hit[0]["max_ratio"] if hit and not hit[0]["refused"] else math.nan)
                values.append(row)
        write_text(out / "chain_rule_heatmap.svg",
                   heatmap(values, labels, [f"p={p:g}" for p in ps], title="chain-rule max ratio"))


def default_weight_rows(n: int = 3) -> list[tuple[str, WeightSpec | None]]:
    """Identity row, delta weights from admissible packs, and one non-``A_1`` power."""
    rows: list[tuple[str, WeightSpec | None]] = [("identity", None)]
    for p, s in ((2.0, 1.75), (2.2, 1.9)) if n == 3 else ((3.0, 1.75), (4.0, 1.9)):
        pk = critical_exponents(n, p, s)
        if pk.admissible:
            rows.append((f"paper(d={pk.delta:.3g},d1={pk.delta1:.3g})", WeightSpec.paper(n, pk.delta, pk.delta1)))
    rows.append((f"r^{-(n + 0.2):g}", WeightSpec.power(n, -(n + 0.2))))
    return rows


def _case_for(n: int, s: float, p: float, w: WeightSpec | None) -> ChainRuleCase:
    if w is None:
        return ChainRuleCase.unweighted(n, s=s, p=p)
    return ChainRuleCase(n=n, s=s, p=p, q=2.0, q1=2.0, q2=math.inf, w1=w.pow(0.5), w2=w.pow(-1.0))


def chain_rule_constant_study(
    s_list: Sequence[float] = (0.25, 0.5, 0.75),
    p_list: Sequence[float] = (1.5, 2.0, 3.0),
    weights: Sequence[tuple[str, WeightSpec | None]] | None = None,
    ensemble: Ensemble | None = None,
    N: int = 1024,
    jobs: int | None = 1,
) -> ChainRuleStudy:
    """Max ratio per ``(weight, s, p)`` cell; weighted rows use the ``w^(1/2)``, ``w^(-1)``, ``q2 = inf`` form."""
    ensemble = ensemble or Ensemble(size=50)
    weights = weights if weights is not None else default_weight_rows(ensemble.n)
    rows = []
    ok = True
    for label, w in weights:
        for s in s_list:
            for p in p_list:
                rep = test_chain_rule(_case_for(ensemble.n, s, p, w), ensemble, N=N, jobs=jobs)
                rows.append({
                    "weight": label, "s": s, "p": p, "max_ratio": rep.max_ratio,
                    "change": rep.stability.get("change", math.nan), "refused": rep.refused,
                    "reason": rep.reason, "pass": rep.passed,
                })
                if not rep.refused:
                    ok = ok and rep.passed
    return ChainRuleStudy(rows, ensemble, ok)


__all__ = [
    "ScalingTolerances",
    "ScalingFit",
    "fit_scaling",
    "lifespan_scaling",
    "KSSStudy",
    "kss_trajectory",
    "kss_uniformity",
    "PersistenceRun",
    "PersistenceReport",
    "global_persistence_2d",
    "ChainRuleStudy",
    "default_weight_rows",
    "chain_rule_constant_study",
]
