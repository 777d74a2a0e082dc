"""Periodic tensor-product grids and Fourier-diagonal linear operators.

Fields are plain complex ``numpy`` arrays shaped like ``grid.shape`` (row-major
axis order). The linear operator is ``L = -1/2 * Laplacian`` with symbol
``lam_K = 1/2 * |k_K|^2``; the propagator ``exp(i L t)`` multiplies mode ``K``
by ``exp(i * lam_K * t)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as sfft


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PeriodicGrid:
    """Uniform periodic grid on ``[0, l_1] x ... x [0, l_d]``.

    ``wavenumbers[a]`` holds ``2*pi*m / l_a`` in FFT storage order, i.e. the
    set ``{-N/2, ..., N/2 - 1}`` scaled by ``2*pi / l_a``.
    """

    dims: int
    lengths: tuple[float, ...]
    nodes: tuple[int, ...]
    wavenumbers: tuple[np.ndarray, ...] = field(repr=False)
    quad_weight: float

    @property
    def shape(self) -> tuple[int, ...]:
        return self.nodes

    @property
    def size(self) -> int:
        return int(np.prod(self.nodes))

    @cached_property
    def symbol(self) -> np.ndarray:
        """Eigenvalues of L, one per mode, broadcast to ``shape``."""
        lam = np.zeros(self.shape)
        for axis, k in enumerate(self.wavenumbers):
            view = [1] * self.dims
            view[axis] = -1
            lam = lam + 0.5 * (k**2).reshape(view)
        lam.setflags(write=False)
        return lam

    def coordinates(self) -> tuple[np.ndarray, ...]:
        axes = [np.arange(n) * (l / n) for l, n in zip(self.lengths, self.nodes)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape, dtype=complex)

    def check(self, *fields: np.ndarray) -> None:
        for f in fields:
            if np.shape(f) != self.shape:
                raise GridMismatchError(
                    f"field of shape {np.shape(f)} does not live on grid {self.shape}"
                )

    # spectral transforms -------------------------------------------------

    def fft(self, f: np.ndarray) -> np.ndarray:
        return sfft.fftn(f)

    def ifft(self, fhat: np.ndarray) -> np.ndarray:
        return sfft.ifftn(fhat)

    def phases(self, t: float) -> np.ndarray:
        """Symbol of ``exp(i L t)``."""
        return np.exp(1j * t * self.symbol)

    # discrete calculus ---------------------------------------------------

    def inner_product(self, f: np.ndarray, g: np.ndarray) -> complex:
        self.check(f, g)
        return complex(self.quad_weight * np.vdot(g, f))

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(self.quad_weight) * np.linalg.norm(f))

    def apply_linear_op(self, f: np.ndarray) -> np.ndarray:
        self.check(f)
        return self.ifft(self.symbol * self.fft(f))

    def exp_propagate(self, f: np.ndarray, t: float) -> np.ndarray:
        """Apply ``exp(i L t)``; ``exp(-i L t)`` is ``exp_propagate(f, -t)``."""
        self.check(f)
        if t == 0:
            return np.array(f, dtype=complex, copy=True)
        return self.ifft(self.phases(t) * self.fft(f))


def build_grid(dims: int, lengths, nodes) -> PeriodicGrid:
    if dims not in (2, 3):
        raise ValueError(f"dims must be 2 or 3, got {dims}")
    lengths = tuple(float(l) for l in lengths)
    nodes = tuple(int(n) for n in nodes)
    if len(lengths) != dims or len(nodes) != dims:
        raise ValueError(f"need {dims} lengths and {dims} node counts")
    if any(not np.isfinite(l) or l <= 0 for l in lengths):
        raise ValueError(f"domain lengths must be positive, got {lengths}")
    if any(n < 4 or n % 2 for n in nodes):
        raise ValueError(f"node counts must be even and >= 4, got {nodes}")

    wavenumbers = []
    for l, n in zip(lengths, nodes):
        k = 2 * np.pi * np.fft.fftfreq(n, d=1.0 / n) / l
        k.setflags(write=False)
        wavenumbers.append(k)
    quad_weight = float(np.prod([l / n for l, n in zip(lengths, nodes)]))
    return PeriodicGrid(dims, lengths, nodes, tuple(wavenumbers), quad_weight)
