import json
import math

import numpy as np
import pytest

import nlw_lab.experiments as ex
from nlw_lab.inequalities import Ensemble
from nlw_lab.lifespan import (
    BumpProfile,
    ConstantProfile,
    LadderConfig,
    LifespanResult,
    estimate_lifespan,
    profile_from_dict,
)
from nlw_lab.reporting import dumps
from nlw_lab.solver import BLOW_UP, NonlinearitySpec
from nlw_lab.weights import critical_exponents

GLASSEY = NonlinearitySpec(1.0, 0.0, 2.0)


# -- profiles and lifespans -----------------------------------------------------------------


def test_profiles():
    b = BumpProfile(radius=2.0, peak=3.0)
    assert b(np.array([0.0]))[0] == pytest.approx(3.0)
    assert b(np.array([2.0, 5.0])).tolist() == [0.0, 0.0]
    assert profile_from_dict(b.to_dict()) == b
    c = ConstantProfile(0.5)
    assert math.isinf(c.support) and profile_from_dict(c.to_dict()) == c
    with pytest.raises(ValueError):
        profile_from_dict({"kind": "spline"})


@pytest.mark.parametrize("lam", [1.0, 2.0])
def test_ode_lifespan_and_shrinking_brackets(lam):
    ladder = LadderConfig(n=3, t_max=3 * lam)
    res = estimate_lifespan(ConstantProfile(), 1 / lam, GLASSEY, ladder)
    assert res.termination == BLOW_UP and not res.censored
    assert abs(res.T - lam) <= 0.02 * lam
    assert res.T_low <= res.T_high
    first = res.refinement_history[0]["bracket"]
    assert res.T_high - res.T_low <= first[1] - first[0]
    # sup |du| = 1/(lam - t) crosses the threshold exactly at lam - 1/threshold
    exact = lam - 1.0 / ladder.blowup_threshold
    errs = [abs(h["bracket"][1] - exact) for h in res.refinement_history]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    d = res.to_dict()
    assert d["label"] == "numerical blow-up time"


def test_doubling_eps_shortens_lifespan():
    ladder = LadderConfig(n=3, t_max=60.0, dr_ladder=(0.1, 0.05))
    t1 = estimate_lifespan(BumpProfile(), 1.0, GLASSEY, ladder).T
    t2 = estimate_lifespan(BumpProfile(), 2.0, GLASSEY, ladder).T
    assert t2 < t1 < 60.0


def test_supercritical_small_data_is_censored():
    ladder = LadderConfig(n=3, t_max=20.0, dr_ladder=(0.1, 0.05))
    res = estimate_lifespan(BumpProfile(), 0.05, NonlinearitySpec(1.0, 0.0, 2.5), ladder)
    assert res.censored and res.T_low == res.T_high == pytest.approx(20.0)


def test_lifespan_rejects_negative_eps():
    with pytest.raises(ValueError):
        estimate_lifespan(BumpProfile(), -1.0, GLASSEY)


def test_ladder_radius():
    lad = LadderConfig(t_max=10.0, margin=2.0)
    assert lad.radius_for(BumpProfile(radius=3.0)) == 15.0
    assert lad.radius_for(ConstantProfile()) == 12.0


# -- scaling fits ----------------------------------------------------------------------------


def synthetic(eps, T, censored=False):
    return LifespanResult(eps, T, T, [], True, censored, "blow_up")


def test_fit_self_consistency_critical():
    pack = critical_exponents(3, 2.0, 1.75)
    eps = np.array([0.8, 0.75, 0.7, 0.65, 0.6])
    T = np.exp(0.3 + 2.5 / eps)
    fit = ex.fit_scaling(3, 2.0, [synthetic(e, t) for e, t in zip(eps, T)], pack)
    assert fit.passed and abs(fit.slope - 2.5) <= 1e-12 and fit.r2 == pytest.approx(1.0)
    assert fit.monotone


def test_fit_self_consistency_subcritical():
    pack = critical_exponents(3, 1.5, 1.75)
    eps = np.geomspace(0.03, 0.2, 5)
    T = 4.0 * eps**-1.0
    fit = ex.fit_scaling(3, 1.5, [synthetic(e, t) for e, t in zip(eps, T)], pack)
    assert fit.passed and abs(fit.slope + 1.0) <= 1e-12


def test_fit_excludes_censored_and_reports():
    pack = critical_exponents(3, 2.0, 1.75)
    pts = [synthetic(e, 10.0 / e) for e in (0.8, 0.7, 0.6)] + [synthetic(0.5, 500.0, True)]
    fit = ex.fit_scaling(3, 2.0, pts, pack)
    assert not fit.passed and "censored" in fit.reason
    assert len(fit.points) == 4


def test_fit_detects_non_monotone_lifespans():
    pack = critical_exponents(3, 2.0, 1.75)
    pts = [synthetic(e, t) for e, t in zip((0.6, 0.7, 0.8), (10.0, 20.0, 5.0))]
    assert not ex.fit_scaling(3, 2.0, pts, pack).monotone


def test_scaling_requires_eps_span_for_power_laws():
    with pytest.raises(ValueError):
        ex.lifespan_scaling(3, 1.5, eps_grid=(0.2, 0.15, 0.1))


def test_scaling_accepts_span_equal_to_minimum():
    # 0.3 / 0.1 rounds below 3 in binary floating point
    ladder = LadderConfig(n=2, t_max=0.5, dr_ladder=(0.2, 0.1))
    fit = ex.lifespan_scaling(2, 2.0, eps_grid=(0.3, 0.2, 0.1), ladder=ladder, s=1.6)
    assert not fit.passed and "censored" in fit.reason


def test_real_sweep_is_monotone_and_deterministic():
    ladder = LadderConfig(n=3, t_max=60.0, dr_ladder=(0.1, 0.05))
    runs = [ex.lifespan_scaling(3, 1.5, eps_grid=(0.9, 0.6, 0.45, 0.3), ladder=ladder,
                                tol=ex.ScalingTolerances(min_points=4), jobs=j) for j in (1, 2)]
    assert runs[0].monotone
    assert dumps(runs[0].to_dict()) == dumps(runs[1].to_dict())


def test_scaling_fit_writes_outputs(tmp_path):
    pack = critical_exponents(3, 2.0, 1.75)
    eps = [0.8, 0.75, 0.7, 0.65, 0.6]
    fit = ex.fit_scaling(3, 2.0, [synthetic(e, math.exp(1 / e)) for e in eps], pack)
    fit.write(tmp_path)
    assert json.loads((tmp_path / "report.json").read_text())["pass"] is True
    for name in ("summary.csv", "T_vs_eps.svg", "lnT_vs_eps_pow.svg"):
        assert (tmp_path / name).exists()


# -- local energy uniformity -------------------------------------------------------------------


def test_kss_uniformity_small(tmp_path):
    study = ex.kss_uniformity(T_grid=(1.0, 4.0), dr=0.125)
    assert study.passed
    assert set(study.reports) == set(study.refined) == {"free", "forced"}
    study.write(tmp_path)
    d = json.loads((tmp_path / "report.json").read_text())
    assert d["T_span"] == 4.0
    assert (tmp_path / "kss_ratio_vs_T.svg").exists()


def test_kss_trajectory_rejects_unknown_family():
    with pytest.raises(ValueError):
        ex.kss_trajectory("damped", 3, 0.1, 1.0)


# -- persistence -------------------------------------------------------------------------------


def test_persistence_zero_data_is_trivial():
    rep = ex.global_persistence_2d(eps=(0.0, 0.05), t_max=5.0, dr=0.1)
    assert rep.runs[0].censored and rep.runs[0].norm == 0.0


def test_persistence_large_data_blowup_recorded():
    rep = ex.global_persistence_2d(eps=(0.05, 0.1, 3.0), t_max=5.0, dr=0.05)
    run = rep.runs[-1]
    assert run.termination == BLOW_UP and run.t_end < 5.0
    assert rep.passed and rep.linearity <= 0.25


def test_persistence_blowup_below_persisting_eps_fails(monkeypatch):
    fates = {0.05: ("blow_up", 1.0), 0.1: ("reached_t_max", 5.0), 0.2: ("reached_t_max", 5.0)}

    def fake(eps, p, nl_ab, t_max, dr, profile):
        term, t_end = fates[eps]
        return ex.PersistenceRun(eps, term, t_end, eps)

    monkeypatch.setattr(ex, "_persist_task", fake)
    rep = ex.global_persistence_2d(eps=tuple(fates), t_max=5.0)
    assert not rep.passed and "no persistence at eps=[0.05]" in rep.reason
    assert rep.linearity == pytest.approx(0.0)


def test_persistence_needs_two_persisting_runs():
    rep = ex.global_persistence_2d(eps=(0.05, 3.0), t_max=5.0, dr=0.05)
    assert not rep.passed and "two are needed" in rep.reason


def test_persistence_needs_p_above_three():
    with pytest.raises(ValueError):
        ex.global_persistence_2d(p=3.0)


def test_persistence_short_horizon(tmp_path):
    rep = ex.global_persistence_2d(eps=(0.05, 0.1), t_max=10.0, dr=0.1)
    assert rep.passed and rep.linearity <= 0.25
    rep.write(tmp_path)
    assert (tmp_path / "norm_vs_eps.svg").exists()


# -- chain-rule constants ----------------------------------------------------------------------


def test_chain_rule_study_rows(tmp_path):
    ens = Ensemble(size=6)
    study = ex.chain_rule_constant_study(s_list=(0.5,), p_list=(2.0,), ensemble=ens, N=512)
    labels = [r["weight"] for r in study.rows]
    assert labels[0] == "identity" and any(r["refused"] for r in study.rows)
    assert all(not r["refused"] for r in study.rows if r["weight"].startswith("paper"))
    from nlw_lab.inequalities import ChainRuleCase, test_chain_rule as run_chain

    ref = run_chain(ChainRuleCase.unweighted(3, s=0.5, p=2.0), ens, N=512)
    assert study.rows[0]["max_ratio"] == ref.max_ratio
    study.write(tmp_path)
    assert (tmp_path / "chain_rule_heatmap.svg").read_text().startswith("<svg")


def test_default_weight_rows():
    rows = ex.default_weight_rows(3)
    assert rows[0] == ("identity", None) and len(rows) >= 3
