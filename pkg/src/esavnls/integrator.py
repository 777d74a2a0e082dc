"""Exponential SAV Runge–Kutta (ESAV-RK) time stepping.

One step advances ``(psi, q)`` by ``tau``. Implicit stage equations are solved
by Picard iteration in Fourier space::

    Psi_i = e^{-iL c_i tau} psi + tau sum_j a_ij e^{iL (c_j - c_i) tau} k_j
    Q_i   = q + tau sum_j a_ij l_j
    psi'  = e^{-iL tau} psi + tau sum_i b_i e^{-iL (1 - c_i) tau} k_i
    q'    = q + tau sum_i b_i l_i

``lawson_reference_step`` integrates the same scheme in the integrating-factor
variable ``u = e^{iLt} psi`` and is kept as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .grid import PeriodicGrid
from .sav import ModelParams, SavState, stage_k, stage_l
from .tableau import GaussTableau


class NonConvergence(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int, step: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.step = step


@dataclass(frozen=True)
class SolverConfig:
    tableau: GaussTableau
    tol: float = 1e-13
    max_iters: int = 200

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class StageSet:
    Psi: list[np.ndarray]
    Q: np.ndarray
    k: list[np.ndarray]
    l: np.ndarray
    iterations: int
    residual: float
    k_hat: list[np.ndarray] = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class _Phases:
    start: list[np.ndarray]  # e^{-iL c_i tau}
    couple: list[list[np.ndarray | None]]  # a_ij e^{iL (c_j - c_i) tau}
    final: np.ndarray  # e^{-iL tau}
    out: list[np.ndarray]  # b_i e^{-iL (1 - c_i) tau}


@lru_cache(maxsize=16)
def _phases(grid: PeriodicGrid, tableau: GaussTableau, tau: float) -> _Phases:
    A, b, c = tableau.A, tableau.b, tableau.c
    s = tableau.s
    start = [grid.phases(-c[i] * tau) for i in range(s)]
    couple = [
        [a * grid.phases((c[j] - c[i]) * tau) if (a := A[i, j]) != 0 else None for j in range(s)]
        for i in range(s)
    ]
    out = [b[i] * grid.phases(-(1 - c[i]) * tau) for i in range(s)]
    return _Phases(start, couple, grid.phases(-tau), out)


def _slopes(grid, Psi_hat, Psi, Q, params):
    k, l = [], np.empty(len(Psi))
    for i, (ph, p) in enumerate(zip(Psi_hat, Psi)):
        lpsi = grid.ifft(grid.symbol * ph)
        k.append(stage_k(grid, p, Q[i], params))
        l[i] = stage_l(grid, p, params, lpsi=lpsi)
    return k, l


def _rel_change(new, old) -> float:
    return float(np.max(np.abs(new - old)) / (1.0 + np.max(np.abs(new))))


def solve_stages(
    grid: PeriodicGrid,
    state: SavState,
    tau: float,
    params: ModelParams,
    cfg: SolverConfig,
) -> StageSet:
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    tab = cfg.tableau
    s = tab.s
    ph = _phases(grid, tab, float(tau))

    psi_hat = grid.fft(state.psi)
    free = [ph.start[i] * psi_hat for i in range(s)]
    Psi_hat = list(free)
    Psi = [grid.ifft(x) for x in Psi_hat]
    Q = np.full(s, state.q)
    with np.errstate(over="ignore", invalid="ignore"):
        return _picard(grid, state, tau, params, cfg, ph, free, Psi_hat, Psi, Q)


def _picard(grid, state, tau, params, cfg, ph, free, Psi_hat, Psi, Q) -> StageSet:
    tab = cfg.tableau
    s = tab.s
    residual = np.inf
    for it in range(1, cfg.max_iters + 1):
        k, l = _slopes(grid, Psi_hat, Psi, Q, params)
        k_hat = [grid.fft(x) for x in k]
        new_hat = []
        for i in range(s):
            acc = free[i].copy()
            for j in range(s):
                if ph.couple[i][j] is not None:
                    acc += tau * ph.couple[i][j] * k_hat[j]
            new_hat.append(acc)
        new_Psi = [grid.ifft(x) for x in new_hat]
        new_Q = state.q + tau * (tab.A @ l)

        residual = max(
            max(_rel_change(n, o) for n, o in zip(new_Psi, Psi)),
            float(np.max(np.abs(new_Q - Q) / (1.0 + np.abs(new_Q)))),
        )
        if not np.isfinite(residual):
            raise NonConvergence(
                f"stage iteration diverged after {it} sweeps (tau={tau})", residual, it
            )
        Psi_hat, Psi, Q = new_hat, new_Psi, new_Q
        if residual <= cfg.tol:
            k, l = _slopes(grid, Psi_hat, Psi, Q, params)
            return StageSet(Psi, Q, k, l, it, residual, [grid.fft(x) for x in k])

    raise NonConvergence(
        f"stage iteration did not reach tol={cfg.tol:g} in {cfg.max_iters} sweeps "
        f"(tau={tau}, residual={residual:.3e})",
        residual,
        cfg.max_iters,
    )


def esav_rk_step(
    grid: PeriodicGrid,
    state: SavState,
    tau: float,
    params: ModelParams,
    cfg: SolverConfig,
) -> SavState:
    st = solve_stages(grid, state, tau, params, cfg)
    ph = _phases(grid, cfg.tableau, float(tau))
    acc = ph.final * grid.fft(state.psi)
    for i in range(cfg.tableau.s):
        acc += tau * ph.out[i] * st.k_hat[i]
    q = state.q + tau * float(cfg.tableau.b @ st.l)
    return SavState(grid.ifft(acc), q, state.time + tau)


def lawson_reference_step(
    grid: PeriodicGrid,
    state: SavState,
    t_n: float,
    tau: float,
    params: ModelParams,
    cfg: SolverConfig,
) -> SavState:
    """Same step computed on ``u = e^{iL t} psi`` with physical-space propagations."""
    tab = cfg.tableau
    s = tab.s
    u = grid.exp_propagate(state.psi, t_n)
    q = state.q
    times = [t_n + tab.c[i] * tau for i in range(s)]

    def slopes(U, Q):
        kt, l = [], np.empty(s)
        for i in range(s):
            Psi = grid.exp_propagate(U[i], -times[i])
            lpsi = grid.exp_propagate(grid.apply_linear_op(U[i]), -times[i])
            kt.append(grid.exp_propagate(stage_k(grid, Psi, Q[i], params), times[i]))
            l[i] = stage_l(grid, Psi, params, lpsi=lpsi)
        return kt, l

    U = [u.copy() for _ in range(s)]
    Q = np.full(s, q)
    residual = np.inf
    for it in range(1, cfg.max_iters + 1):
        kt, l = slopes(U, Q)
        new_U = [u + tau * sum(tab.A[i, j] * kt[j] for j in range(s)) for i in range(s)]
        new_Q = q + tau * (tab.A @ l)
        residual = max(
            max(_rel_change(n, o) for n, o in zip(new_U, U)),
            float(np.max(np.abs(new_Q - Q) / (1.0 + np.abs(new_Q)))),
        )
        if not np.isfinite(residual):
            raise NonConvergence("reference stage iteration diverged", residual, it)
        U, Q = new_U, new_Q
        if residual <= cfg.tol:
            break
    else:
        raise NonConvergence(
            f"reference stage iteration did not reach tol={cfg.tol:g}", residual, cfg.max_iters
        )

    kt, l = slopes(U, Q)
    u_new = u + tau * sum(tab.b[i] * kt[i] for i in range(s))
    q_new = q + tau * float(tab.b @ l)
    return SavState(grid.exp_propagate(u_new, -(t_n + tau)), q_new, state.time + tau)
