"""Invariant tracking, error norms and observed convergence rates."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .grid import GridMismatchError, PeriodicGrid
from .sav import ModelParams, SavState, hamiltonian_energy, mass, modified_energy

log = logging.getLogger(__name__)

QUANTITIES = ("mass", "modified_energy", "hamiltonian")


@dataclass
class InvariantSeries:
    """Mass M, modified energy E and Hamiltonian H sampled along a trajectory.

    Drifts are relative to the first sample, ``|(X^n - X^0) / X^0|``. A quantity
    whose baseline is exactly zero is tracked as absolute drift ``|X^n - X^0|``
    instead and listed in ``absolute``.
    """

    times: list[float] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    modified_energy: list[float] = field(default_factory=list)
    hamiltonian: list[float] = field(default_factory=list)
    absolute: set[str] = field(default_factory=set)

    def __len__(self):
        return len(self.times)

    def _drift(self, name: str) -> np.ndarray:
        x = np.asarray(getattr(self, name), dtype=float)
        if x.size == 0:
            return x
        d = np.abs(x - x[0])
        return d if name in self.absolute else d / abs(x[0])

    @property
    def rel_mass(self) -> np.ndarray:
        return self._drift("mass")

    @property
    def rel_energy(self) -> np.ndarray:
        return self._drift("modified_energy")

    @property
    def rel_hamiltonian(self) -> np.ndarray:
        return self._drift("hamiltonian")

    def rows(self):
        """Yield ``(t, M, E, H, RM, RE, RH)`` tuples."""
        yield from zip(
            self.times, self.mass, self.modified_energy, self.hamiltonian,
            self.rel_mass, self.rel_energy, self.rel_hamiltonian,
        )


def record(
    grid: PeriodicGrid,
    state: SavState,
    params: ModelParams,
    series: InvariantSeries,
) -> InvariantSeries:
    values = {
        "mass": mass(grid, state.psi),
        "modified_energy": modified_energy(grid, state, params),
        "hamiltonian": hamiltonian_energy(grid, state.psi, params),
    }
    if not series.times:
        for name, v in values.items():
            if v == 0:
                log.warning("%s baseline is zero; tracking absolute drift", name)
                series.absolute.add(name)
    series.times.append(float(state.time))
    for name, v in values.items():
        getattr(series, name).append(v)
    return series


def linf_error(psi: np.ndarray, exact: np.ndarray) -> float:
    if np.shape(psi) != np.shape(exact):
        raise GridMismatchError(f"shape {np.shape(psi)} vs {np.shape(exact)}")
    return float(np.max(np.abs(psi - exact)))


def convergence_rate(errors, steps) -> np.ndarray:
    """Observed orders ``ln(e_j / e_{j+1}) / ln(d_j / d_{j+1})``.

    Slot 0 has no predecessor and is NaN.
    """
    e = np.asarray(errors, dtype=float)
    d = np.asarray(steps, dtype=float)
    if e.shape != d.shape or e.ndim != 1 or e.size < 2:
        raise ValueError("errors and steps must be 1-D of equal length >= 2")
    if np.any(e <= 0) or np.any(d <= 0):
        raise ValueError("errors and step sizes must be positive")
    rates = np.full(e.size, np.nan)
    rates[1:] = np.log(e[:-1] / e[1:]) / np.log(d[:-1] / d[1:])
    return rates
