"""SAV reformulation of the cubic NLS equation.

The auxiliary scalar ``q = sqrt(int |psi|^4 + C0)`` turns the energy into the
quadratic form ``(L psi, psi) + beta/2 q^2 - beta/2 C0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PeriodicGrid

IMAG_RTOL = 1e-12


class ImaginaryResidueError(ArithmeticError):
    """A quantity that must be real carried a non-negligible imaginary part."""


@dataclass(frozen=True)
class ModelParams:
    beta: float
    c0: float = 1.0

    def __post_init__(self):
        if not self.c0 > 0:
            raise ValueError(f"c0 must be strictly positive, got {self.c0}")


@dataclass(frozen=True)
class SavState:
    psi: np.ndarray
    q: float
    time: float = 0.0


def _real(z: complex, scale: float, what: str) -> float:
    if abs(z.imag) > IMAG_RTOL * max(scale, np.finfo(float).tiny):
        raise ImaginaryResidueError(
            f"{what}: imaginary residue {z.imag:.3e} exceeds {IMAG_RTOL:g} x {scale:.3e}"
        )
    return z.real


def quartic(grid: PeriodicGrid, psi: np.ndarray) -> float:
    """``(psi^2, psi^2)``, evaluated as ``int |psi|^4``."""
    grid.check(psi)
    a2 = psi.real**2 + psi.imag**2
    return float(grid.quad_weight * np.sum(a2 * a2))


def sav_denominator(grid: PeriodicGrid, psi: np.ndarray, params: ModelParams) -> float:
    return float(np.sqrt(quartic(grid, psi) + params.c0))


def init_q(grid: PeriodicGrid, psi0: np.ndarray, params: ModelParams) -> float:
    radicand = quartic(grid, psi0) + params.c0
    if radicand <= 0:
        raise ArithmeticError(f"negative SAV radicand {radicand}")
    return float(np.sqrt(radicand))


def initial_state(grid: PeriodicGrid, psi0: np.ndarray, params: ModelParams, time: float = 0.0) -> SavState:
    psi0 = np.asarray(psi0, dtype=complex)
    if not np.all(np.isfinite(psi0)):
        raise ValueError("initial field contains non-finite values")
    return SavState(psi0, init_q(grid, psi0, params), time)


def stage_k(grid: PeriodicGrid, Psi: np.ndarray, Q: float, params: ModelParams) -> np.ndarray:
    """Nonlinear slope ``-i beta |Psi|^2 Psi Q / sqrt((Psi^2, Psi^2) + C0)``."""
    den = sav_denominator(grid, Psi, params)
    a2 = Psi.real**2 + Psi.imag**2
    return (-1j * params.beta * Q / den) * (a2 * Psi)


def stage_l(
    grid: PeriodicGrid,
    Psi: np.ndarray,
    params: ModelParams,
    lpsi: np.ndarray | None = None,
) -> float:
    """Slope of the auxiliary variable, ``2 Re(-i L Psi, |Psi|^2 Psi) / den``.

    ``lpsi`` may carry a precomputed ``L Psi`` to save a transform pair.
    """
    if lpsi is None:
        lpsi = grid.apply_linear_op(Psi)
    den = sav_denominator(grid, Psi, params)
    a2 = Psi.real**2 + Psi.imag**2
    bracket = grid.inner_product(-1j * lpsi, a2 * Psi)
    return 2.0 * bracket.real / den


def mass(grid: PeriodicGrid, psi: np.ndarray) -> float:
    grid.check(psi)
    return grid.norm(psi) ** 2


def quadratic_energy(grid: PeriodicGrid, psi: np.ndarray) -> float:
    """Real part of ``(L psi, psi)`` after checking its imaginary residue."""
    lpsi = grid.apply_linear_op(psi)
    z = grid.inner_product(lpsi, psi)
    return _real(z, grid.norm(lpsi) * grid.norm(psi), "(L psi, psi)")


def modified_energy(grid: PeriodicGrid, state: SavState, params: ModelParams) -> float:
    kinetic = quadratic_energy(grid, state.psi)
    return kinetic + 0.5 * params.beta * state.q**2 - 0.5 * params.beta * params.c0


def hamiltonian_energy(grid: PeriodicGrid, psi: np.ndarray, params: ModelParams) -> float:
    return quadratic_energy(grid, psi) + 0.5 * params.beta * quartic(grid, psi)
