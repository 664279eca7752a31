
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlw_lab.lifespan import BumpProfile
from nlw_lab.propagator import duhamel, linear_propagator, picard_iterate, simpson_weights, x_norm
from nlw_lab.solver import (
    BLOW_UP,
    INSTABILITY,
    REACHED_T_MAX,
    WALL_TIME,
    CauchyData,
    NonlinearitySpec,
    SolverConfig,
    SpaceTimeBump,
    discrete_energy,
    evolve,
)
from nlw_lab.spectral.grid import RadialField, RadialGrid
from nlw_lab.spectral.operators import l2_norm, radial_derivative
from nlw_lab.spectral.transforms import forward_samples, inverse_samples
from nlw_lab.weights import critical_exponents


def gauss(a=1.0, w=1.0):
    return lambda r: a * np.exp(-((r / w) ** 2))


def zero(r):
    return 0.0 * r


def energy(u, ut):
    return l2_norm(ut) ** 2 + l2_norm(radial_derivative(u)) ** 2


# -- nonlinearity and config -------------------------------------------------------


def test_nonlinearity_values():
    nl = NonlinearitySpec(1.0, 2.0, 1.5)
    ut, ur = np.array([0.0, -4.0]), np.array([1.0, 0.0])
    assert np.allclose(nl(ut, ur), [2.0, 8.0])
    assert NonlinearitySpec().is_linear
    with pytest.raises(ValueError):
        NonlinearitySpec(p=1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.01, 5.0), st.floats(-10, 10))
def test_nonlinearity_even_and_zero_at_origin(p, v):
    nl = NonlinearitySpec(1.0, 1.0, p)
    x = np.array([v])
    assert nl(x, x)[0] == nl(-x, -x)[0] >= 0
    assert nl(np.zeros(1), np.zeros(1))[0] == 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(R=10, N=100, t_max=1, cfl=1.5)
    with pytest.raises(ValueError):
        SolverConfig(R=10, N=100, t_max=0)
    with pytest.raises(ValueError):
        SolverConfig(R=10, N=100, t_max=1, blowup_threshold=1.0, early_threshold=10.0)
    cfg = SolverConfig.for_spacing(3, 0.05, 10.0, 1.0)
    assert cfg.N == 200 and cfg.dr == pytest.approx(0.05)


def test_grid_mismatch_rejected():
    cfg = SolverConfig.for_spacing(3, 0.1, 10.0, 1.0)
    g = RadialGrid(3, 50, 10.0)
    with pytest.raises(ValueError):
        evolve(CauchyData.from_functions(g, zero, gauss()), NonlinearitySpec(), cfg)


def test_space_time_bump_support():
    src = SpaceTimeBump(t0=0.5, tau=0.5, radius=2.0)
    r = np.linspace(0, 3, 31)
    assert not np.any(src(1.0, r)) and not np.any(src(0.0, r))
    assert np.all(src(0.5, r)[r >= 2.0] == 0) and src(0.5, np.array([0.0]))[0] > 0
    assert src.support == 2.0


# -- spectral propagator ---------------------------------------------------------------


G = RadialGrid(3, 1024, 20.0)


def test_propagator_identity_at_zero():
    d = CauchyData.from_functions(G, gauss(1, 1.2), gauss(0.5, 0.8))
    out = linear_propagator(d, 0.0)
    assert np.max(np.abs(out.u0.samples - d.u0.samples)) <= 1e-12
    assert np.max(np.abs(out.u1.samples - d.u1.samples)) <= 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_propagator_conserves_energy(n):
    g = RadialGrid(n, 1024, 30.0)
    d = CauchyData.from_functions(g, gauss(1, 1.0), gauss(0.5, 0.7))
    e0 = energy(d.u0, d.u1)
    for t in np.linspace(0, 15.0, 7):
        out = linear_propagator(d, t, check=False)
        assert abs(energy(out.u0, out.u1) - e0) <= 1e-8 * e0


def test_propagator_matches_dalembert_in_3d():
    # u0 = 0, u1 = exp(-r^2): r u = (exp(-(r-t)^2) - exp(-(r+t)^2)) / 4
    d = CauchyData.from_functions(G, zero, gauss())
    r = G.r
    for t in (0.5, 2.0, 6.0):
        out = linear_propagator(d, t)
        u = (np.exp(-((r - t) ** 2)) - np.exp(-((r + t) ** 2))) / (4 * r)
        ut = ((r - t) * np.exp(-((r - t) ** 2)) + (r + t) * np.exp(-((r + t) ** 2))) / (2 * r)
        assert np.max(np.abs(out.u0.samples - u)) <= 1e-6
        assert np.max(np.abs(out.u1.samples - ut)) <= 1e-6


# -- Duhamel -----------------------------------------------------------------------------


def test_simpson_weights_integrate_cubics():
    for m in (1, 2, 3, 5, 8):
        x = np.arange(m + 1.0)
        w = simpson_weights(m)
        assert w.sum() == pytest.approx(m)
        if m >= 2:
            assert w @ x**3 == pytest.approx(m**4 / 4)


def test_duhamel_zero_forcing():
    times = np.arange(0, 11) * G.dr / 2
    out = duhamel(G, times, np.zeros((11, G.N)))
    assert not np.any(out.u0.samples) and not np.any(out.u1.samples)


def test_duhamel_rejects_coarse_forcing():
    times = np.arange(0, 11) * G.dr
    with pytest.raises(ValueError):
        duhamel(G, times, np.ones((11, G.N)))


@pytest.mark.parametrize("omega_shift", [0.0, 0.7])
def test_duhamel_single_mode_closed_form(omega_shift):
    g = RadialGrid(3, 256, 10.0)
    k = 20
    rho = g.rho[k]
    e = np.zeros(g.N)
    e[k] = 1.0
    mode = inverse_samples(g, e)
    omega = rho + omega_shift
    T = 3.0
    M = int(np.ceil(T / (g.dr / 4)))
    times = np.linspace(0, T, M + 1)
    forcing = np.cos(omega * times)[:, None] * mode[None, :]
    out = duhamel(g, times, forcing)
    U, Ut = forward_samples(g, out.u0.samples), forward_samples(g, out.u1.samples)
    if omega_shift == 0:
        exact = T * np.sin(rho * T) / (2 * rho)
        exact_t = (np.sin(rho * T) + rho * T * np.cos(rho * T)) / (2 * rho)
    else:
        exact = (np.cos(omega * T) - np.cos(rho * T)) / (rho**2 - omega**2)
        exact_t = (-omega * np.sin(omega * T) + rho * np.sin(rho * T)) / (rho**2 - omega**2)
    assert abs(U[k] - exact) <= 1e-6 and abs(Ut[k] - exact_t) <= 1e-6
    others = np.delete(np.arange(g.N), k)
    assert np.max(np.abs(U[others])) <= 1e-10


def test_duhamel_wave_residual():
    # (u(t+h) - 2u(t) + u(t-h)) / h^2 + D^2 u(t) = F(t) up to O(h^2)
    g = RadialGrid(3, 512, 20.0)
    h = g.dr / 2
    times = np.arange(0, 401) * h
    r = g.r
    forcing = np.array([np.exp(-r * r) * (1 + np.sin(2 * t)) for t in times])
    j = 300
    us = [forward_samples(g, duhamel(g, times, forcing, t=times[i]).u0.samples) for i in (j - 1, j, j + 1)]
    lhs = (us[2] - 2 * us[1] + us[0]) / h**2 + g.rho**2 * us[1]
    Fj = forward_samples(g, forcing[j])
    assert np.max(np.abs(lhs - Fj)) <= 1e-3 * np.max(np.abs(Fj))


# -- Picard -------------------------------------------------------------------------------


PG = RadialGrid(3, 160, 10.0)


def test_picard_linear_fixed_point():
    d = CauchyData.from_functions(PG, zero, gauss(0.3))
    res = picard_iterate(d, NonlinearitySpec(), 0.5, 3)
    assert np.array_equal(res.iterates[1].u, res.iterates[0].u)
    assert res.increments[0] == 0.0


def test_picard_contracts_and_matches_time_stepper():
    d = CauchyData.from_functions(PG, zero, gauss(0.5))
    nl = NonlinearitySpec(1.0, 0.0, 2.0)
    res = picard_iterate(d, nl, 0.5, 6)
    inc = res.increments
    assert not res.diverged
    assert all(b < 0.5 * a for a, b in zip(inc, inc[1:]))
    final = res.iterates[-1]
    u_pic = final.u[-1]
    runs = []
    for dr in (PG.dr, PG.dr / 2):
        cfg = SolverConfig.for_spacing(3, dr, PG.R, 0.5)
        runs.append(evolve(CauchyData.from_functions(cfg.grid, zero, gauss(0.5)), nl, cfg))
    u_fd = runs[0].u[-1]
    fine = runs[1].u[-1]
    # restriction of the dr/2 field to the coarse nodes (cell averages)
    fine_on_coarse = 0.5 * (fine[0::2] + fine[1::2])
    fd_err = 4.0 / 3.0 * np.max(np.abs(u_fd - fine_on_coarse))
    gap = np.max(np.abs(u_pic - u_fd))
    assert gap <= 2 * (inc[-1] + fd_err)


def test_picard_flags_divergence():
    d = CauchyData.from_functions(PG, zero, gauss(20.0))
    res = picard_iterate(d, NonlinearitySpec(1.0, 0.0, 2.0), 2.0, 8)
    assert res.diverged


# -- X-norm ---------------------------------------------------------------------------------


PACK = critical_exponents(3, 2.0, 1.75)


def test_x_norm_zero_and_monotone():
    cfg = SolverConfig.for_spacing(3, 0.05, 12.0, 6.0, record_stride=2)
    z = evolve(CauchyData.from_functions(cfg.grid, zero, zero), NonlinearitySpec(), cfg)
    assert x_norm(z, 0.0, PACK, 6.0) == 0.0
    free = evolve(CauchyData.from_functions(cfg.grid, gauss(), zero), NonlinearitySpec(), cfg)
    vals = [x_norm(free, nu, PACK, T) for nu in (0.0, 0.5) for T in (1.0, 2.0, 4.0, 6.0)]
    assert all(b >= a for a, b in zip(vals[:4], vals[1:4]))
    assert all(b >= a for a, b in zip(vals[4:], vals[5:]))
    with pytest.raises(ValueError):
        x_norm(free, 1.0, PACK, 1.0)


def test_x_norm_quadrature_rules_agree_on_forced_wave():
    cfg = SolverConfig.for_spacing(3, 0.05, 10.0, 4.0, record_stride=1)
    tr = evolve(CauchyData.from_functions(cfg.grid, zero, zero), NonlinearitySpec(), cfg, source=SpaceTimeBump())
    a = x_norm(tr, 0.0, PACK, 4.0, rule="trapezoid")
    b = x_norm(tr, 0.0, PACK, 4.0, rule="simpson")
    assert a > 0 and abs(a - b) <= 0.01 * b


# -- finite-difference time stepper -----------------------------------------------------------


def test_linear_evolve_matches_propagator():
    cfg = SolverConfig.for_spacing(3, 0.0025, 8.0, 1.0)
    d = CauchyData.from_functions(cfg.grid, gauss(1.0, 1.0), gauss(0.5, 0.8))
    tr = evolve(d, NonlinearitySpec(), cfg)
    ref = linear_propagator(d, 1.0)
    assert tr.termination == REACHED_T_MAX and tr.t_end == pytest.approx(1.0)
    assert l2_norm(RadialField(cfg.grid, tr.u[-1]) - ref.u0) <= 1e-5


@pytest.mark.parametrize("n", [2, 3])
def test_discrete_energy_conserved(n):
    cfg = SolverConfig.for_spacing(n, 0.05, 20.0, 10.0, record_stride=50)
    d = CauchyData.from_functions(cfg.grid, gauss(1.0), gauss(0.3))
    tr = evolve(d, NonlinearitySpec(), cfg)
    e = [discrete_energy(u, ut, cfg.grid) for u, ut in zip(tr.u, tr.ut)]
    assert max(abs(x - e[0]) for x in e) <= 1e-6 * e[0]


def test_active_window_does_not_change_linear_solution():
    base = dict(record_stride=10)
    cfg_a = SolverConfig.for_spacing(3, 0.05, 20.0, 5.0, active_window=True, **base)
    cfg_b = SolverConfig.for_spacing(3, 0.05, 20.0, 5.0, active_window=False, **base)
    d = CauchyData.from_functions(cfg_a.grid, zero, gauss())
    a = evolve(d, NonlinearitySpec(), cfg_a)
    b = evolve(d, NonlinearitySpec(), cfg_b)
    assert np.max(np.abs(a.u[-1] - b.u[-1])) <= 1e-12


def test_ode_blowup_oracle():
    lam = 1.0
    cfg = SolverConfig.for_spacing(3, 0.05, lam + 3.0, 2 * lam, record_fields=False)
    g = cfg.grid
    d = CauchyData(g.sample(zero), g.sample(lambda r: 0 * r + 1 / lam))
    tr = evolve(d, NonlinearitySpec(1.0, 0.0, 2.0), cfg)
    assert tr.termination == BLOW_UP
    assert abs(tr.blowup_time - lam) <= 0.02 * lam
    t = tr.step_times
    keep = t <= 0.9 * lam
    assert np.max(np.abs(tr.probe[keep] + np.log(1 - t[keep] / lam))) <= 1e-3


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_overflow_reports_instability():
    cfg = SolverConfig.for_spacing(3, 0.1, 6.0, 1.0, blowup_threshold=np.inf, growth_limit=1e300)
    g = cfg.grid
    d = CauchyData(g.sample(zero), g.sample(lambda r: 1e150 * np.exp(-r * r)))
    tr = evolve(d, NonlinearitySpec(1.0, 0.0, 2.0), cfg)
    assert tr.termination == INSTABILITY
    assert np.all(np.isfinite(tr.sup_du))


def test_wall_time_cap():
    cfg = SolverConfig.for_spacing(3, 0.01, 30.0, 20.0, max_wall_time=0.01)
    tr = evolve(CauchyData.from_functions(cfg.grid, zero, gauss()), NonlinearitySpec(), cfg)
    assert tr.termination == WALL_TIME and tr.t_end < 20.0


def test_small_bump_persists_and_disperses():
    nl = NonlinearitySpec(1.0, 1.0, 2.0)
    runs = []
    for dr in (0.05, 0.025):
        cfg = SolverConfig.for_spacing(3, dr, 16.0, 12.0, record_stride=int(round(0.2 / (0.5 * dr))))
        runs.append(evolve(CauchyData.from_functions(cfg.grid, zero, gauss(0.1)), nl, cfg))
    coarse, fine = runs
    assert coarse.termination == fine.termination == REACHED_T_MAX
    sup = fine.sup_du
    t = fine.step_times
    after = sup[t >= 3.0]
    assert np.all(np.diff(after) <= 1e-12 * after[0])
    uc = coarse.u[-1]
    uf = fine.u[-1]
    uf_c = 0.5 * (uf[0::2] + uf[1::2])
    gc = coarse.grid
    diff = l2_norm(RadialField(gc, uc - uf_c))
    assert diff <= 0.01 * l2_norm(RadialField(gc, uf_c))


def test_trajectory_manifest_and_fields():
    cfg = SolverConfig.for_spacing(3, 0.1, 6.0, 1.0, record_stride=2)
    tr = evolve(CauchyData.from_functions(cfg.grid, zero, BumpProfile(radius=2.0)), NonlinearitySpec(), cfg)
    man = tr.manifest()
    assert man["termination"] == REACHED_T_MAX and man["causal"]
    assert len(man["times"]) == len(tr.times)
    u, ut = tr.field_at(0)
    assert np.array_equal(ut.samples, cfg.grid.sample(BumpProfile(radius=2.0)).samples)
    lean = evolve(CauchyData.from_functions(cfg.grid, zero, BumpProfile(radius=2.0)), NonlinearitySpec(),
                  SolverConfig.for_spacing(3, 0.1, 6.0, 1.0, record_fields=False))
    with pytest.raises(ValueError):
        lean.field_at(0)


def test_causality_flag():
    cfg = SolverConfig.for_spacing(3, 0.1, 4.0, 3.0)
    tr = evolve(CauchyData.from_functions(cfg.grid, zero, lambda r: np.where(r < 2, 1.0, 0.0)), NonlinearitySpec(), cfg)
    assert not tr.causal
