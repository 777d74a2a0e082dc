"""Mass- and energy-preserving exponential SAV Runge–Kutta solvers for the cubic NLS equation."""
from .diagnostics import InvariantSeries, convergence_rate, linf_error, record
from .grid import GridMismatchError, PeriodicGrid, build_grid
from .integrator import (
    NonConvergence,
    SolverConfig,
    StageSet,
    esav_rk_step,
    lawson_reference_step,
    solve_stages,
)
from .sav import (
    ImaginaryResidueError,
    ModelParams,
    SavState,
    hamiltonian_energy,
    init_q,
    initial_state,
    mass,
    modified_energy,
    stage_k,
    stage_l,
)
from .tableau import GaussTableau, check_symplectic, explicit_euler_tableau, gauss_tableau

__version__ = "0.1.0"
