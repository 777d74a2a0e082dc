"""Butcher tableaus: Gauss collocation (orders 2, 4, 6) and a non-symplectic control."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GaussTableau:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    name: str = ""

    @property
    def s(self) -> int:
        return len(self.b)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if A.shape != (b.size, b.size) or c.shape != b.shape:
            raise ValueError(f"inconsistent tableau shapes A{A.shape}, b{b.shape}, c{c.shape}")
        for name, arr in (("A", A), ("b", b), ("c", c)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def gauss_tableau(s: int) -> GaussTableau:
    """The ``s``-stage Gauss–Legendre method (order ``2s``)."""
    if s == 1:
        A = [[0.5]]
        b = [1.0]
    elif s == 2:
        r = np.sqrt(3.0) / 6.0
        A = [[0.25, 0.25 - r], [0.25 + r, 0.25]]
        b = [0.5, 0.5]
    elif s == 3:
        r = np.sqrt(15.0)
        A = [
            [5 / 36, 2 / 9 - r / 15, 5 / 36 - r / 30],
            [5 / 36 + r / 24, 2 / 9, 5 / 36 - r / 24],
            [5 / 36 + r / 30, 2 / 9 + r / 15, 5 / 36],
        ]
        b = [5 / 18, 4 / 9, 5 / 18]
    else:
        raise ValueError(f"Gauss tableau available for s in (1, 2, 3), got {s}")
    A = np.array(A)
    # closed-form abscissae, not row sums, so rounding in A does not leak into c
    c = {1: [0.5],
         2: [0.5 - np.sqrt(3.0) / 6, 0.5 + np.sqrt(3.0) / 6],
         3: [0.5 - np.sqrt(15.0) / 10, 0.5, 0.5 + np.sqrt(15.0) / 10]}[s]
    return GaussTableau(A, np.array(b), np.array(c), name=f"gauss{s}")


def explicit_euler_tableau() -> GaussTableau:
    """Forward Euler; violates the symplectic condition (negative control only)."""
    return GaussTableau(np.zeros((1, 1)), np.ones(1), np.zeros(1), name="euler")


def tableau_by_name(stages) -> GaussTableau:
    if str(stages).strip().lower() == "euler":
        return explicit_euler_tableau()
    return gauss_tableau(int(stages))


def check_symplectic(t: GaussTableau) -> float:
    """max_ij |b_i a_ij + b_j a_ji - b_i b_j|"""
    M = t.b[:, None] * t.A
    return float(np.max(np.abs(M + M.T - np.outer(t.b, t.b))))


def row_sum_defect(t: GaussTableau) -> float:
    return float(np.max(np.abs(t.A.sum(axis=1) - t.c)))
