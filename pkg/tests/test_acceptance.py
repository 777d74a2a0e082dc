"""Reproduction and property criteria.

Each test prints one ``[PASS]``/``[FAIL]`` line; the terminal summary repeats
them. Reference values are the temporal errors at T = 9 for the plane wave
``exp(i(x + y [+ z]))`` on [0, 2pi]^d with 32 nodes per axis.
"""
import numpy as np
import pytest

from esavnls import (
    InvariantSeries,
    ModelParams,
    SolverConfig,
    build_grid,
    esav_rk_step,
    gauss_tableau,
    initial_state,
    lawson_reference_step,
    record,
)
from esavnls.config import RunConfig
from esavnls.experiments import integrate, run_convergence, run_single

from conftest import random_field, smooth_field

TWO_PI = 2 * np.pi


def within_factor(value, reference, factor):
    return reference / factor <= value <= reference * factor


def fmt(xs):
    return "(" + ", ".join(f"{x:.3g}" for x in xs) + ")"


def table_cfg(dims, stages, beta=5.0):
    return RunConfig(dims=dims, nodes=(32,) * dims, beta=beta, stages=str(stages), t_final=9.0)


def conservation_cfg(stages, tau=0.01, **kw):
    return RunConfig(dims=2, nodes=(32, 32), beta=5.0, stages=str(stages), tau=tau,
                     t_final=20.0, tol=1e-13, **kw)


@pytest.fixture(scope="module")
def conservation_runs():
    runs = {}
    for stages in ("2", "3"):
        runs[stages] = integrate(conservation_cfg(stages))[1]
    runs["2-half"] = integrate(conservation_cfg("2", tau=0.005))[1]
    return runs


def test_c1_table_2d_rk4(report):
    ladder = [0.03, 0.02, 0.015, 0.01]
    paper = [3.16e-05, 6.25e-06, 1.98e-06, 3.91e-07]
    t = run_convergence(table_cfg(2, 2), ladder, write=False)
    ok_err = all(within_factor(e, p, 1.5) for e, p in zip(t.errors, paper))
    ok_rate = all(3.85 <= r <= 4.15 for r in t.rates[1:])
    report("C1 Table 1 2D ESAV-RK4 beta=5", ok_err and ok_rate,
           f"errors {fmt(t.errors)} vs {fmt(paper)} (x1.5), rates {fmt(t.rates[1:])} in [3.85, 4.15]")
    assert ok_err and ok_rate


def test_c2_table_2d_rk6(report):
    ladder = [0.03, 0.02, 0.015, 0.01]
    paper = [5.08e-09, 4.46e-10, 7.95e-11]
    t = run_convergence(table_cfg(2, 3), ladder, write=False)
    ok_err = all(within_factor(e, p, 2.0) for e, p in zip(t.errors[:3], paper))
    ok_rate = all(5.8 <= r <= 6.2 for r in t.rates[1:3])
    ok_last = t.errors[3] <= 5e-11
    report("C2 Table 1 2D ESAV-RK6 beta=5", ok_err and ok_rate and ok_last,
           f"errors {fmt(t.errors)} vs {fmt(paper)} (x2) and tau=0.01 <= 5e-11, "
           f"rates {fmt(t.rates[1:3])} in [5.8, 6.2]")
    assert ok_err and ok_rate and ok_last


def test_c3_table_3d_rk4(report):
    ladder = [0.05, 0.025]
    paper = [2.43e-04, 1.52e-05]
    t = run_convergence(table_cfg(3, 2), ladder, write=False)
    ok_err = all(within_factor(e, p, 1.5) for e, p in zip(t.errors, paper))
    ok_rate = 3.85 <= t.rates[1] <= 4.15
    report("C3 Table 1 3D ESAV-RK4 beta=5 (32^3)", ok_err and ok_rate,
           f"errors {fmt(t.errors)} vs {fmt(paper)} (x1.5), rate {t.rates[1]:.3f} in [3.85, 4.15]")
    assert ok_err and ok_rate


def test_c3_supplement_16cubed_rate_only(report):
    cfg = RunConfig(dims=3, nodes=(16, 16, 16), beta=5.0, stages="2", t_final=9.0)
    t = run_convergence(cfg, [0.05, 0.025], write=False)
    ok = 3.85 <= t.rates[1] <= 4.15
    report("C3-supplement 3D ESAV-RK4 on 16^3, rate only", ok,
           f"errors {fmt(t.errors)}, rate {t.rates[1]:.3f} in [3.85, 4.15]")
    assert ok


@pytest.mark.parametrize("stages", ["2", "3"])
def test_c4_figure_conservation(conservation_runs, report, stages):
    series = conservation_runs[stages]
    rm, re = series.rel_mass.max(), series.rel_energy.max()
    ok = rm <= 1e-10 and re <= 1e-10
    report(f"C4 Figure 1 conservation s={stages}", ok, f"max RM {rm:.2e}, max RE {re:.2e} (<= 1e-10)")
    assert ok


def test_c5_hamiltonian_drift_order(conservation_runs, report):
    full, half = conservation_runs["2"], conservation_runs["2-half"]
    rh, re = full.rel_hamiltonian.max(), full.rel_energy.max()
    ratio = rh / half.rel_hamiltonian.max()
    ok = rh >= 10 * re and 10 <= ratio <= 26
    report("C5 Hamiltonian drift (plane wave)", ok,
           f"max RH {rh:.2e} vs 10 x max RE {10 * re:.2e}; RH(tau)/RH(tau/2) = {ratio:.2f} in [10, 26]")
    assert ok


def test_c5_supplement_two_mode(report):
    """Same protocol on a non-single-mode initial state, where H is not slaved to M."""
    grid = build_grid(2, (TWO_PI, TWO_PI), (32, 32))
    x, y = grid.coordinates()
    psi0 = np.exp(1j * (x + y)) + 0.5 * np.exp(1j * (2 * y - x))
    p = ModelParams(5.0)
    maxima = []
    for tau, stages in ((0.01, 2), (0.005, 2)):
        cfg = SolverConfig(gauss_tableau(stages))
        state = initial_state(grid, psi0, p)
        series = record(grid, state, p, InvariantSeries())
        for n in range(int(round(20 / tau))):
            state = esav_rk_step(grid, state, tau, p, cfg)
            record(grid, state, p, series)
        maxima.append((series.rel_hamiltonian.max(), series.rel_energy.max()))
    ratio = maxima[0][0] / maxima[1][0]
    ok = maxima[0][0] >= 10 * maxima[0][1] and 10 <= ratio <= 26
    report("C5-supplement Hamiltonian drift (two-mode state)", ok,
           f"max RH {maxima[0][0]:.2e} vs max RE {maxima[0][1]:.2e}; RH(tau)/RH(tau/2) = {ratio:.2f}")
    assert ok


def test_c6_negative_control_euler(report):
    series = integrate(conservation_cfg("euler"))[1]
    rm = series.rel_mass.max()
    ok = rm >= 1e-6
    report("C6 explicit Euler negative control", ok, f"max RM {rm:.2e} (>= 1e-6)")
    assert ok


def test_c7_lawson_equivalence(report, rng):
    grid = build_grid(2, (TWO_PI, TWO_PI), (8, 8))
    worst = 0.0
    for n in range(20):
        p = ModelParams(1.0 if n % 2 else 5.0)
        cfg = SolverConfig(gauss_tableau(1 + n % 3))
        state = initial_state(grid, smooth_field(grid, rng, amplitude=1 + rng.random()), p)
        a = esav_rk_step(grid, state, 0.005, p, cfg)
        b = lawson_reference_step(grid, state, 0.0, 0.005, p, cfg)
        worst = max(worst, float(np.max(np.abs(a.psi - b.psi))))
    ok = worst <= 1e-11
    report("C7 ESAV-RK vs Lawson-variable oracle", ok, f"max difference {worst:.2e} (<= 1e-11) over 20 states")
    assert ok


def test_c8_operator_algebra(report, rng):
    grids = [build_grid(2, (TWO_PI, TWO_PI), (16, 16)), build_grid(3, (TWO_PI, 3.0, 5.0), (8, 8, 8))]
    worst = {"self-adjoint": 0.0, "commute": 0.0, "adjoint": 0.0, "unitary": 0.0, "group": 0.0}
    for n in range(100):
        g = grids[n % 2]
        f, h = random_field(g, rng), random_field(g, rng)
        s, t = rng.uniform(-10, 10, size=2)
        ip, nrm, L, E = g.inner_product, g.norm, g.apply_linear_op, g.exp_propagate
        fh = nrm(f) * nrm(h)
        worst["self-adjoint"] = max(worst["self-adjoint"], abs(ip(L(f), h) - ip(f, L(h))) / fh)
        worst["commute"] = max(worst["commute"], nrm(L(E(f, t)) - E(L(f), t)) / nrm(L(f)))
        worst["adjoint"] = max(worst["adjoint"], abs(ip(E(f, t), h) - ip(f, E(h, -t))) / fh)
        worst["unitary"] = max(worst["unitary"], abs(nrm(E(f, t)) - nrm(f)) / nrm(f))
        worst["group"] = max(worst["group"], nrm(E(E(f, s), t) - E(f, s + t)) / nrm(f))
    ok = all(v <= 1e-12 for v in worst.values())
    report("C8 operator algebra (100 random fields)", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + " (each <= 1e-12)")
    assert ok


@pytest.mark.parametrize("stages", ["1", "2", "3"])
def test_c9_linear_exactness(report, stages):
    cfg = RunConfig(nodes=(32, 32), beta=0.0, stages=stages, tau=0.01, t_final=5.0)
    res = run_single(cfg, write=False)
    ok = cfg.steps == 500 and res.linf_error <= 1e-12
    report(f"C9 beta=0 exactness s={stages}", ok, f"L-inf error after 500 steps {res.linf_error:.2e} (<= 1e-12)")
    assert ok
