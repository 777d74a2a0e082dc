"""Plane-wave experiments: single runs, temporal convergence, conservation."""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import plotting
from .config import RunConfig, serialize
from .diagnostics import InvariantSeries, convergence_rate, linf_error, record
from .grid import PeriodicGrid, build_grid
from .integrator import NonConvergence, SolverConfig, esav_rk_step
from .sav import ModelParams, SavState, initial_state
from .tableau import tableau_by_name

log = logging.getLogger(__name__)

# errors at or below this are treated as roundoff and get no rate
ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True)
class PlaneWaveSpec:
    k: tuple[int, ...]
    omega: float


def plane_wave_spec(grid: PeriodicGrid, k, beta: float) -> PlaneWaveSpec:
    k = tuple(int(m) for m in k)
    if len(k) != grid.dims:
        raise ValueError(f"need {grid.dims} wave indices, got {k}")
    for m, n in zip(k, grid.nodes):
        if not abs(m) < n / 2:
            raise ValueError(f"wave index {m} is not resolvable with {n} nodes")
    kappa = [2 * np.pi * m / l for m, l in zip(k, grid.lengths)]
    return PlaneWaveSpec(k, 0.5 * sum(x * x for x in kappa) + beta)


def plane_wave(grid: PeriodicGrid, spec: PlaneWaveSpec, t: float) -> np.ndarray:
    """``exp(i (kappa . x - omega t))`` sampled on the grid."""
    X = grid.coordinates()
    phase = sum(2 * np.pi * m / l * x for m, l, x in zip(spec.k, grid.lengths, X))
    return np.exp(1j * (phase - spec.omega * t))


@dataclass
class Problem:
    grid: PeriodicGrid
    params: ModelParams
    solver: SolverConfig
    psi0: np.ndarray
    wave: PlaneWaveSpec | None

    def exact(self, t: float) -> np.ndarray | None:
        return None if self.wave is None else plane_wave(self.grid, self.wave, t)


def setup(cfg: RunConfig) -> Problem:
    grid = build_grid(cfg.dims, cfg.lengths, cfg.nodes)
    params = ModelParams(cfg.beta, cfg.c0)
    solver = SolverConfig(tableau_by_name(cfg.stages), cfg.tol, cfg.max_iters)
    if cfg.ic == "plane_wave":
        wave = plane_wave_spec(grid, cfg.wave_indices, cfg.beta)
        psi0 = plane_wave(grid, wave, 0.0)
    else:
        wave = None
        psi0 = np.load(cfg.ic).astype(complex)
        grid.check(psi0)
    return Problem(grid, params, solver, psi0, wave)


def integrate(cfg: RunConfig, tau: float | None = None, problem: Problem | None = None,
              track: bool = True):
    """Advance to ``t_final``; returns ``(final state, series or None)``."""
    tau = cfg.tau if tau is None else tau
    pb = problem or setup(cfg)
    n_steps = cfg.steps_for(tau)
    state = initial_state(pb.grid, pb.psi0, pb.params)
    series = InvariantSeries() if track else None
    if track:
        record(pb.grid, state, pb.params, series)
    for n in range(1, n_steps + 1):
        try:
            state = esav_rk_step(pb.grid, state, tau, pb.params, pb.solver)
        except NonConvergence as exc:
            exc.step = n
            exc.args = (f"step {n}: {exc.args[0]}",)
            raise
        state = replace(state, time=n * tau)
        if track and (n % cfg.stride == 0 or n == n_steps):
            record(pb.grid, state, pb.params, series)
    return state, series


# output ----------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_invariants(series: InvariantSeries, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "M", "E", "H", "RM", "RE", "RH"])
        for row in series.rows():
            w.writerow([_fmt(x) for x in row])
    return path


def _prepare(cfg: RunConfig) -> Path:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(serialize(cfg))
    return out


def _invariant_report(cfg: RunConfig, series: InvariantSeries, out: Path) -> None:
    write_invariants(series, out / "invariants.csv")
    plotting.plot_invariants(
        series.times, series.rel_mass, series.rel_energy, series.rel_hamiltonian,
        out / "invariants.png",
        title=f"{cfg.dims}D, stages={cfg.stages}, beta={cfg.beta:g}, tau={cfg.tau:g}",
    )
    plotting.write_plot_script("invariants", out, "invariants.csv", "invariants.png")


@dataclass
class SingleResult:
    state: SavState
    series: InvariantSeries
    linf_error: float | None


def run_single(cfg: RunConfig, write: bool = True) -> SingleResult:
    pb = setup(cfg)
    state, series = integrate(cfg, problem=pb)
    exact = pb.exact(state.time)
    err = None if exact is None else linf_error(state.psi, exact)
    if write:
        out = _prepare(cfg)
        _invariant_report(cfg, series, out)
        if err is not None:
            (out / "final_error.txt").write_text(f"t,linf_error\n{_fmt(state.time)},{_fmt(err)}\n")
    return SingleResult(state, series, err)


def run_conservation(cfg: RunConfig, write: bool = True) -> InvariantSeries:
    _, series = integrate(cfg)
    if write:
        _invariant_report(cfg, series, _prepare(cfg))
    return series


@dataclass
class ConvergenceTable:
    taus: np.ndarray
    errors: np.ndarray
    rates: np.ndarray
    at_floor: np.ndarray

    def rows(self):
        for tau, err, rate, floor in zip(self.taus, self.errors, self.rates, self.at_floor):
            if np.isnan(rate):
                shown = "*"
            elif floor:
                shown = "floor"
            else:
                shown = _fmt(rate)
            yield _fmt(tau), _fmt(err), shown


def _final_error(args) -> float:
    cfg, tau = args
    pb = setup(cfg)
    state, _ = integrate(cfg, tau=tau, problem=pb, track=False)
    return linf_error(state.psi, pb.exact(state.time))


def run_convergence(cfg: RunConfig, tau_ladder=None, jobs: int = 1, write: bool = True) -> ConvergenceTable:
    taus = np.asarray(cfg.taus if tau_ladder is None else tau_ladder, dtype=float)
    if taus.size < 2:
        raise ValueError("a convergence study needs at least two step sizes")
    if np.any(np.diff(taus) >= 0):
        raise ValueError("tau ladder must be sorted strictly descending")
    if cfg.ic != "plane_wave":
        raise ValueError("convergence study needs the exact plane-wave solution")

    work = [(cfg, float(t)) for t in taus]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            errors = np.array(list(pool.map(_final_error, work)))
    else:
        errors = np.array([_final_error(w) for w in work])

    floor = errors <= ROUNDOFF_FLOOR
    rates = convergence_rate(np.maximum(errors, np.finfo(float).tiny), taus)
    pair_floor = floor.copy()
    pair_floor[1:] |= floor[:-1]
    table = ConvergenceTable(taus, errors, rates, pair_floor)

    if write:
        out = _prepare(replace(cfg, taus=tuple(taus)))
        with (out / "convergence.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tau", "linf_error", "rate"])
            w.writerows(table.rows())
        tab = tableau_by_name(cfg.stages)
        plotting.plot_convergence(
            taus, errors, out / "convergence.png", order=2 * tab.s if tab.name.startswith("gauss") else None,
            title=f"{cfg.dims}D, stages={cfg.stages}, beta={cfg.beta:g}",
        )
        plotting.write_plot_script("convergence", out, "convergence.csv", "convergence.png")
    return table
