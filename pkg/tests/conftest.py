import numpy as np
import pytest

from esavnls import build_grid

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20201016)


@pytest.fixture(scope="session")
def grid32():
    return build_grid(2, (2 * np.pi, 2 * np.pi), (32, 32))


@pytest.fixture(scope="session")
def grid8():
    return build_grid(2, (2 * np.pi, 2 * np.pi), (8, 8))


def random_field(grid, rng, scale=1.0):
    return scale * (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


def smooth_field(grid, rng, modes=2, amplitude=1.0):
    """Random trigonometric polynomial with |m_a| <= modes on every axis."""
    X = grid.coordinates()
    out = grid.zeros()
    ranges = [range(-modes, modes + 1)] * grid.dims
    for m in np.array(np.meshgrid(*ranges, indexing="ij")).reshape(grid.dims, -1).T:
        coef = complex(rng.standard_normal(), rng.standard_normal()) / (1 + np.dot(m, m))
        phase = sum(2 * np.pi * mi / l * x for mi, l, x in zip(m, grid.lengths, X))
        out += coef * np.exp(1j * phase)
    return amplitude * out / np.max(np.abs(out))


@pytest.fixture
def report():
    def _report(label, ok, detail=""):
        _ACCEPTANCE.append((label, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
