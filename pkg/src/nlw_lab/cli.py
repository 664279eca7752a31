"""``nlw-lab`` command line: one subcommand per study.

Exit codes: 0 success, 1 a pass criterion was not met, 2 usage or config error.
Every run writes ``config-echo.json`` into its output directory; passing that
file back through ``--config`` reproduces the run.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .reporting import dumps, write_csv, write_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _strs(text) -> list[str]:
    if isinstance(text, (list, tuple)):
        return [str(x) for x in text]
    return [x.strip() for x in str(text).split(",") if x.strip()]


@dataclass
class RunConfig:
    """Resolved parameters of one run: defaults, then config file, then explicit flags."""

    subcommand: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"subcommand": self.subcommand, **self.params}

    @property
    def out(self) -> Path:
        return Path(self.params["out"])


# -- parser -------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, name: str) -> None:
    p.add_argument("--config", default=None, help="JSON file of parameters (keys = flag names with underscores)")
    p.add_argument("--out", default=f"nlw_out/{name}", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="ensemble seed")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $NLW_LAB_JOBS or all cores)")
    p.add_argument("--max-n", type=int, default=200_000, help="cap on grid nodes per run")
    p.add_argument("--max-wall-time", type=float, default=None, help="wall-time cap in seconds per solver run")


def _nl(p: argparse.ArgumentParser, pdef: float = 2.0) -> None:
    p.add_argument("--a", type=float, default=1.0, help="coefficient of |u_t|^p")
    p.add_argument("--b", type=float, default=0.0, help="coefficient of |u_r|^p")
    p.add_argument("--p", type=float, default=pdef, help="nonlinearity power")


def _profile(p: argparse.ArgumentParser) -> None:
    p.add_argument("--profile", choices=("bump", "constant"), default="bump", help="data profile for u_t(0)")
    p.add_argument("--radius", type=float, default=3.0, help="bump radius")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="nlw-lab", description=__doc__, formatter_class=fmt)
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        _common(p, name)
        return p

    p = add("exponents", "print the exponent pack for (n, p, s)")
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--p", type=float, default=2.0, help="nonlinearity power")
    p.add_argument("--s", type=float, default=1.75, help="regularity index")

    p = add("weight-check", "sampled A_p constant of r^a <r>^b (or the delta weight r^(-1+2 delta) <r>^(-2 delta-2 delta1))")
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--kind", choices=("paper", "product"), default="paper", help="weight family")
    p.add_argument("--delta", type=float, default=0.125, help="delta of the delta weight")
    p.add_argument("--delta1", type=float, default=0.0, help="delta1 of the delta weight")
    p.add_argument("--a", type=float, default=0.0, help="power of r (product weight)")
    p.add_argument("--b", type=float, default=0.0, help="power of <r> (product weight)")
    p.add_argument("--ap", type=float, default=1.0, help="A_p index (1 for A_1)")
    p.add_argument("--expect", choices=("bounded", "diverging"), default="bounded", help="verdict counted as pass")

    p = add("spectral-selftest", "exact-oracle identities of the spectral layer")
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--N", type=int, default=1024, help="grid nodes")
    p.add_argument("--R", type=float, default=20.0, help="domain radius")

    p = add("ineq-trace", "trace (or Besov trace) ratio study over an ensemble")
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--s", type=float, default=0.75, help="Sobolev index, in (1/2, n/2)")
    p.add_argument("--besov", action="store_true", help="test the Besov B^{1/2}_{2,1} trace form instead")
    _ensemble_flags(p)

    p = add("ineq-chain", "weighted fractional chain rule ratio study")
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--case", choices=("corollary", "unweighted", "study"), default="corollary",
                   help="corollary: w1=w^(1/2), w2=w^(-1), q2=inf; study: (s, p, weight) table")
    p.add_argument("--s", type=float, default=0.5, help="derivative order in (0, 1)")
    p.add_argument("--p", type=float, default=2.0, help="F(v) = |v|^p")
    p.add_argument("--q", type=float, default=2.0, help="lhs exponent (unweighted case)")
    p.add_argument("--q1", type=float, default=4.0, help="first rhs exponent (unweighted case)")
    p.add_argument("--q2", type=float, default=4.0, help="second rhs exponent (unweighted case)")
    p.add_argument("--delta", type=float, default=0.125, help="delta of the delta weight")
    p.add_argument("--delta1", type=float, default=0.0, help="delta1 of the delta weight")
    _ensemble_flags(p)

    p = add("ineq-kss", "local energy estimates: T-uniformity of the constants")
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--p", type=float, default=2.2, help="power fixing the exponent pack")
    p.add_argument("--s", type=float, default=1.9, help="regularity fixing the exponent pack")
    p.add_argument("--T-grid", default="1,4,16,64", help="comma-separated horizons")
    p.add_argument("--families", default="free,forced", help="comma-separated families")
    p.add_argument("--dr", type=float, default=0.0625, help="grid spacing (a dr/2 rerun is added)")
    p.add_argument("--max-spread", type=float, default=3.0, help="allowed max/min of the per-T constants")

    p = add("ineq-strichartz", "2-D radial Strichartz ratios with horizon stability")
    p.add_argument("--q", default="2.5,3,4,6", help="comma-separated time exponents (> 2)")
    p.add_argument("--T-big", type=float, default=16.0, help="horizon")
    p.add_argument("--dr", type=float, default=0.05, help="grid spacing")
    p.add_argument("--radius", type=float, default=3.0, help="bump radius")
    p.add_argument("--stability-tol", type=float, default=0.5, help="allowed change between T_big/2 and T_big")

    p = add("solve", "evolve one radial solution and export snapshots")
    p.add_argument("--n", type=int, default=3, help="dimension")
    _nl(p)
    _profile(p)
    p.add_argument("--eps", type=float, default=0.5, help="amplitude of u_t(0)")
    p.add_argument("--t-max", type=float, default=10.0, help="horizon")
    p.add_argument("--dr", type=float, default=0.05, help="grid spacing")
    p.add_argument("--cfl", type=float, default=0.5, help="Courant number")
    p.add_argument("--record-stride", type=int, default=4, help="store every k-th step")
    p.add_argument("--snapshots", type=int, default=5, help="field snapshots written")

    p = add("lifespan", "bracketed numerical blow-up time")
    p.add_argument("--n", type=int, default=3, help="dimension")
    _nl(p)
    _profile(p)
    p.add_argument("--eps", type=float, default=0.8, help="amplitude of u_t(0)")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="ODE case: constant profile with eps = 1/lambda; passes if T is within 2%% of lambda")
    p.add_argument("--t-max", type=float, default=500.0, help="horizon cap")
    p.add_argument("--dr-ladder", default="0.1,0.05,0.025,0.0125", help="refinement ladder")
    p.add_argument("--tol", type=float, default=0.01, help="convergence tolerance between levels")

    p = add("scaling", "lifespan scaling fit over an eps grid")
    p.add_argument("--n", type=int, default=3, help="dimension")
    _nl(p)
    _profile(p)
    p.add_argument("--s", type=float, default=1.75, help="regularity fixing the exponent pack")
    p.add_argument("--eps", default="0.8,0.75,0.7,0.65,0.6", help="comma-separated amplitudes")
    p.add_argument("--t-max", type=float, default=500.0, help="horizon cap")
    p.add_argument("--dr-ladder", default="0.1,0.05,0.025,0.0125", help="refinement ladder")
    p.add_argument("--r2-min", type=float, default=0.95, help="minimum R^2")
    p.add_argument("--slope-rel", type=float, default=0.2, help="relative slope tolerance (power-law regimes)")

    p = add("persist-2d", "2-D radial long-time persistence for p > 3")
    p.add_argument("--p", type=float, default=4.0, help="nonlinearity power")
    p.add_argument("--a", type=float, default=1.0, help="coefficient of |u_t|^p")
    p.add_argument("--b", type=float, default=0.0, help="coefficient of |u_r|^p")
    p.add_argument("--eps", default="0.05,0.1", help="comma-separated amplitudes")
    p.add_argument("--t-max", type=float, default=100.0, help="horizon")
    p.add_argument("--dr", type=float, default=0.05, help="grid spacing")
    p.add_argument("--radius", type=float, default=3.0, help="bump radius")
    p.add_argument("--linearity-tol", type=float, default=0.25, help="allowed deviation of norm ratios from eps ratios")

    p = add("report", "index every report.json under a directory")
    p.add_argument("--inputs", default="nlw_out", help="directory searched for report.json files")
    return parser


def _ensemble_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=("gaussian-bumps", "dyadic-band-limited", "wave-packets"),
                   default="gaussian-bumps", help="ensemble family")
    p.add_argument("--size", type=int, default=200, help="ensemble size")
    p.add_argument("--N", type=int, default=1024, help="base grid nodes (a 2N rerun is added)")
    p.add_argument("--R", type=float, default=25.0, help="domain radius")
    p.add_argument("--stability-tol", type=float, default=0.5, help="allowed max-ratio change under N -> 2N")


# -- config resolution ----------------------------------------------------------------


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _explicit(argv: Sequence[str], name: str) -> set[str]:
    # dests given on the command line: reparse with every default suppressed
    shadow = build_parser()
    sp = _subparser(shadow, name)
    for action in sp._actions:
        action.default = argparse.SUPPRESS
    ns = shadow.parse_args(list(argv))
    return set(vars(ns)) - {"subcommand"}


def resolve(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(list(argv))
    name = ns.subcommand
    params = {k: v for k, v in vars(ns).items() if k != "subcommand"}
    explicit = _explicit(argv, name)
    if ns.config:
        try:
            data = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        sub = data.pop("subcommand", name)
        if sub != name:
            raise ConfigError(f"config is for subcommand {sub!r}, not {name!r}")
        unknown = set(data) - set(params)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for k, v in data.items():
            if k not in explicit:
                params[k] = v
    params.pop("config", None)
    return RunConfig(name, params)


# -- commands ---------------------------------------------------------------------------


def _finish(cfg: RunConfig, report: dict, passed: bool, csv: tuple | None = None) -> int:
    report = {**report, "pass": bool(passed)}
    write_json(cfg.out / "report.json", report)
    if csv is not None:
        write_csv(cfg.out / "summary.csv", *csv)
    print(dumps({"pass": passed, "out": str(cfg.out)}), end="")
    return EXIT_OK if passed else EXIT_FAIL


def _check_nodes(cfg: RunConfig, R: float, dr: float) -> None:
    N = math.ceil(R / dr - 1e-9)
    if N > cfg.params["max_n"]:
        raise ConfigError(f"grid needs N={N} nodes, above --max-n={cfg.params['max_n']}")


def cmd_exponents(cfg: RunConfig) -> int:
    from .weights import critical_exponents

    P = cfg.params
    pack = critical_exponents(P["n"], P["p"], P["s"])
    write_json(cfg.out / "report.json", pack.to_dict())
    print(dumps(pack.to_dict()), end="")
    return EXIT_OK


def cmd_weight_check(cfg: RunConfig) -> int:
    from .weights import WeightSpec, estimate_Ap_constant

    P = cfg.params
    if P["kind"] == "paper":
        spec = WeightSpec.paper(P["n"], P["delta"], P["delta1"])
    else:
        spec = WeightSpec.product(P["n"], P["a"], P["b"])
    rep = estimate_Ap_constant(spec, P["ap"], jobs=P["jobs"])
    return _finish(cfg, rep.to_dict(), rep.verdict == P["expect"])


def cmd_spectral_selftest(cfg: RunConfig) -> int:
    from .selftest import spectral_selftest

    P = cfg.params
    checks = spectral_selftest(P["n"], P["N"], P["R"])
    ok = all(c.passed for c in checks)
    rows = [[c.name, c.error, c.tolerance, c.passed] for c in checks]
    return _finish(cfg, {"checks": [c.to_dict() for c in checks], "pass": ok}, ok,
                   (["check", "error", "tolerance", "pass"], rows))


def _ensemble(P: dict):
    from .inequalities import Ensemble

    return Ensemble(seed=P["seed"], size=P["size"], family=P["family"], n=P["n"], R=P["R"])


def _ineq_finish(cfg: RunConfig, rep) -> int:
    rep.write_csv(cfg.out / "summary.csv")
    rep.write_svg(cfg.out / "ratios.svg")
    return _finish(cfg, rep.to_dict(), rep.passed)


def cmd_ineq_trace(cfg: RunConfig) -> int:
    from . import inequalities as iq

    P = cfg.params
    ens = _ensemble(P)
    if P["besov"]:
        rep = iq.test_besov_trace(P["n"], ens, N=P["N"], jobs=P["jobs"])
    else:
        rep = iq.test_trace(P["n"], P["s"], ens, N=P["N"], jobs=P["jobs"])
    _apply_tol(rep, P["stability_tol"])
    return _ineq_finish(cfg, rep)


def _apply_tol(rep, tol: float) -> None:
    if rep.stability and not rep.refused:
        rep.stability["tolerance"] = tol
        rep.passed = bool(rep.samples) and math.isfinite(rep.max_ratio) and rep.stability["change"] <= tol


def cmd_ineq_chain(cfg: RunConfig) -> int:
    from . import experiments as ex
    from . import inequalities as iq

    P = cfg.params
    ens = _ensemble(P)
    if P["case"] == "study":
        study = ex.chain_rule_constant_study(ensemble=ens, N=P["N"], jobs=P["jobs"])
        study.write(cfg.out)
        print(dumps({"pass": study.passed, "out": str(cfg.out)}), end="")
        return EXIT_OK if study.passed else EXIT_FAIL
    if P["case"] == "corollary":
        case = iq.ChainRuleCase.corollary(P["n"], P["delta"], P["delta1"], s=P["s"], p=P["p"])
    else:
        case = iq.ChainRuleCase.unweighted(P["n"], s=P["s"], p=P["p"], q=P["q"], q1=P["q1"], q2=P["q2"])
    rep = iq.test_chain_rule(case, ens, N=P["N"], jobs=P["jobs"])
    _apply_tol(rep, P["stability_tol"])
    return _ineq_finish(cfg, rep)


def cmd_ineq_kss(cfg: RunConfig) -> int:
    from .experiments import kss_uniformity
    from .weights import critical_exponents

    P = cfg.params
    T_grid = _floats(P["T_grid"])
    _check_nodes(cfg, max(T_grid) + 5.0, P["dr"] / 2)
    pack = critical_exponents(P["n"], P["p"], P["s"])
    study = kss_uniformity(pack, T_grid, _strs(P["families"]), P["dr"], P["max_spread"], jobs=P["jobs"])
    study.write(cfg.out)
    print(dumps({"pass": study.passed, "out": str(cfg.out)}), end="")
    return EXIT_OK if study.passed else EXIT_FAIL


def cmd_ineq_strichartz(cfg: RunConfig) -> int:
    from .inequalities import test_strichartz_2d
    from .lifespan import BumpProfile
    from .solver import CauchyData, NonlinearitySpec, SolverConfig, SpaceTimeBump, evolve

    P = cfg.params
    T = P["T_big"]
    prof = BumpProfile(radius=P["radius"])
    R = T + max(P["radius"], SpaceTimeBump().support) + 2.0
    _check_nodes(cfg, R, P["dr"])
    scfg = SolverConfig.for_spacing(2, P["dr"], R, T, max_wall_time=P["max_wall_time"])
    g = scfg.grid
    zero = g.sample(lambda r: 0.0 * r)
    free = NonlinearitySpec()
    trajs = [
        evolve(CauchyData(g.sample(prof), zero), free, scfg),
        evolve(CauchyData(zero, g.sample(prof)), free, scfg),
        evolve(CauchyData(zero, zero), free, scfg, source=SpaceTimeBump()),
    ]
    reports = [test_strichartz_2d(q, trajs, T, tol=P["stability_tol"]) for q in _floats(P["q"])]
    ok = all(r.passed for r in reports)
    rows = [[r.params["q"], r.max_ratio, r.stability.get("change", math.nan), r.refused, r.passed] for r in reports]
    return _finish(cfg, {"reports": [r.to_dict() for r in reports], "pass": ok}, ok,
                   (["q", "max_ratio", "change", "refused", "pass"], rows))


def _make_profile(P: dict):
    from .lifespan import BumpProfile, ConstantProfile

    return ConstantProfile() if P["profile"] == "constant" else BumpProfile(radius=P["radius"])


def cmd_solve(cfg: RunConfig) -> int:
    from .solver import INSTABILITY, CauchyData, NonlinearitySpec, SolverConfig, evolve
    from .spectral.io import write_field

    P = cfg.params
    prof = _make_profile(P)
    support = prof.support if math.isfinite(prof.support) else 0.0
    R = P["t_max"] + support + 2.0
    _check_nodes(cfg, R, P["dr"])
    scfg = SolverConfig.for_spacing(P["n"], P["dr"], R, P["t_max"], cfl=P["cfl"],
                                    record_stride=P["record_stride"], max_wall_time=P["max_wall_time"])
    g = scfg.grid
    eps = P["eps"]
    data = CauchyData(g.sample(lambda r: 0.0 * r), g.sample(lambda r: eps * prof(r)))
    traj = evolve(data, NonlinearitySpec(P["a"], P["b"], P["p"]), scfg)
    man = traj.manifest()
    picks = np.unique(np.linspace(0, len(traj.times) - 1, max(P["snapshots"], 1)).round().astype(int))
    snaps = []
    for m in picks:
        u, ut = traj.field_at(int(m))
        write_field(cfg.out / f"u_{m:05d}.bin", u)
        write_field(cfg.out / f"ut_{m:05d}.bin", ut)
        snaps.append({"index": int(m), "t": float(traj.times[m]), "u": f"u_{m:05d}.bin", "ut": f"ut_{m:05d}.bin"})
    man["snapshots"] = snaps
    write_json(cfg.out / "manifest.json", man)
    rows = [[float(t), float(s)] for t, s in zip(traj.step_times, traj.sup_du)]
    return _finish(cfg, man, traj.termination != INSTABILITY, (["t", "sup_du"], rows))


def cmd_lifespan(cfg: RunConfig) -> int:
    from .lifespan import ConstantProfile, LadderConfig, estimate_lifespan
    from .solver import NonlinearitySpec

    P = cfg.params
    ladder_dr = tuple(_floats(P["dr_ladder"]))
    if P["lam"] is not None:
        if not P["lam"] > 0:
            raise ConfigError("--lambda must be positive")
        prof, eps = ConstantProfile(), 1.0 / P["lam"]
    else:
        prof, eps = _make_profile(P), P["eps"]
    support = prof.support if math.isfinite(prof.support) else 0.0
    t_max = P["t_max"] if P["lam"] is None else min(P["t_max"], 3.0 * P["lam"])
    _check_nodes(cfg, t_max + support + 2.0, min(ladder_dr))
    ladder = LadderConfig(n=P["n"], t_max=t_max, dr_ladder=ladder_dr, tol=P["tol"], max_wall_time=P["max_wall_time"])
    res = estimate_lifespan(prof, eps, NonlinearitySpec(P["a"], P["b"], P["p"]), ladder)
    out = res.to_dict()
    ok = True
    if P["lam"] is not None:
        ok = abs(res.T_high - P["lam"]) <= 0.02 * P["lam"]
        out["ode_oracle"] = {"lambda": P["lam"], "T": res.T_high, "tolerance": 0.02, "pass": ok}
    rows = [[h["level"], h["dr"], h["N"], h["bracket"][0], h["bracket"][1], h["termination"]]
            for h in res.refinement_history]
    return _finish(cfg, out, ok, (["level", "dr", "N", "T_early", "T_blowup", "termination"], rows))


def cmd_scaling(cfg: RunConfig) -> int:
    from .experiments import ScalingTolerances, lifespan_scaling
    from .lifespan import LadderConfig
    from .solver import NonlinearitySpec

    P = cfg.params
    ladder_dr = tuple(_floats(P["dr_ladder"]))
    prof = _make_profile(P)
    support = prof.support if math.isfinite(prof.support) else 0.0
    _check_nodes(cfg, P["t_max"] + support + 2.0, min(ladder_dr))
    ladder = LadderConfig(n=P["n"], t_max=P["t_max"], dr_ladder=ladder_dr, max_wall_time=P["max_wall_time"])
    tol = ScalingTolerances(r2_min=P["r2_min"], slope_rel=P["slope_rel"])
    fit = lifespan_scaling(P["n"], P["p"], prof, _floats(P["eps"]), ladder,
                           NonlinearitySpec(P["a"], P["b"], P["p"]), s=P["s"], tol=tol, jobs=P["jobs"])
    fit.write(cfg.out)
    print(dumps({"pass": fit.passed, "slope": fit.slope, "r2": fit.r2, "out": str(cfg.out)}), end="")
    return EXIT_OK if fit.passed else EXIT_FAIL


def cmd_persist_2d(cfg: RunConfig) -> int:
    from .experiments import global_persistence_2d
    from .lifespan import BumpProfile

    P = cfg.params
    _check_nodes(cfg, P["t_max"] + P["radius"] + 2.0, P["dr"])
    rep = global_persistence_2d(P["p"], _floats(P["eps"]), P["t_max"], P["dr"], P["a"], P["b"],
                                BumpProfile(radius=P["radius"]), P["linearity_tol"], jobs=P["jobs"])
    rep.write(cfg.out)
    print(dumps({"pass": rep.passed, "out": str(cfg.out)}), end="")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_report(cfg: RunConfig) -> int:
    root = Path(cfg.params["inputs"])
    if not root.is_dir():
        raise ConfigError(f"no such directory: {root}")
    own = (cfg.out / "report.json").resolve()
    rows, entries = [], []
    for path in sorted(root.rglob("report.json")):
        if path.resolve() == own:
            continue
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError:
            continue
        passed = data.get("pass") if isinstance(data, dict) else None
        rel = str(path.parent.relative_to(root))
        entries.append({"run": rel, "pass": passed})
        rows.append([rel, passed])
    ok = all(e["pass"] is not False for e in entries)
    return _finish(cfg, {"runs": entries, "pass": ok}, ok, (["run", "pass"], rows))


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "exponents": cmd_exponents,
    "weight-check": cmd_weight_check,
    "spectral-selftest": cmd_spectral_selftest,
    "ineq-trace": cmd_ineq_trace,
    "ineq-chain": cmd_ineq_chain,
    "ineq-kss": cmd_ineq_kss,
    "ineq-strichartz": cmd_ineq_strichartz,
    "solve": cmd_solve,
    "lifespan": cmd_lifespan,
    "scaling": cmd_scaling,
    "persist-2d": cmd_persist_2d,
    "report": cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = resolve(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except ConfigError as exc:
        print(f"nlw-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        from .parallel import resolve_jobs

        cfg.params["jobs"] = resolve_jobs(cfg.params.get("jobs"))
        cfg.out.mkdir(parents=True, exist_ok=True)
        # jobs only affects scheduling, never results, so the echo omits it
        echo = {k: v for k, v in cfg.to_dict().items() if k != "jobs"}
        write_json(cfg.out / "config-echo.json", echo)
        return COMMANDS[cfg.subcommand](cfg)
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"nlw-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
