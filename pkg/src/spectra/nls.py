"""Stationary states of the nonlinear Schrödinger equation with gain/loss.

Solves  (-d^2/dx^2 + U(x) + c |psi|^2 + i f(x)) psi = E psi  by
self-consistent field iteration: assemble the effective linear operator
for the current density, take its lowest-Re eigenpair by inverse
iteration seeded at the previous energy, renormalize, and mix densities.
Density mixing is used instead of imaginary-time propagation because
imaginary time is ill-posed once E acquires an imaginary part.

At a fixed point the discrete reality identity applies with U^I = f
(the nonlinear term c |psi|^2 is real), so Im E = <f> up to the
eigenpair residual: a balanced gain/loss profile pins the energy to the
real axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigen import SolverOptions, inverse_iteration
from .errors import NonConvergenceError, ParameterError
from .expr import PotentialSpec, evaluate_on_grid
from .grids import (
    DIRICHLET,
    ComplexMatrix,
    Grid,
    GridFunction,
    assemble_1d,
    norm,
    normalize,
)

__all__ = ["NlsProblem", "NlsSolution", "solve_stationary", "nls_residual"]

DEFAULT_MIXING = 0.5
DEFAULT_MAX_ITERATIONS = 200
DEFAULT_TOL = 1e-10
_DIVERGENCE_NORM = 1e12


@dataclass(frozen=True)
class NlsProblem:
    """Base potential U, nonlinearity strength c, and real gain profile f."""

    potential: PotentialSpec
    nonlinearity: float
    gain: PotentialSpec
    grid: Grid
    target_norm: float = 1.0

    def __post_init__(self):
        if self.target_norm <= 0:
            raise ParameterError("target norm must be positive")


@dataclass(frozen=True)
class NlsSolution:
    """Converged (or best-effort, flagged) stationary state."""

    psi: GridFunction = field(repr=False)
    energy: complex
    iterations: int
    residual: float
    exp_gain: float
    converged: bool
    history: tuple[tuple[int, complex, float], ...] = field(default=(), repr=False)


def _sampled_gain(problem: NlsProblem) -> np.ndarray:
    f = evaluate_on_grid(problem.gain, problem.grid)
    if np.any(f.values.imag != 0.0):
        raise ParameterError("gain profile f must evaluate real on the grid")
    return f.values.real


def _effective_hamiltonian(
    base: np.ndarray, c: float, density: np.ndarray, f: np.ndarray, grid: Grid
) -> ComplexMatrix:
    u_eff = base + c * density + 1j * f
    return assemble_1d(GridFunction(grid, u_eff), DIRICHLET)


def _rescale(psi: GridFunction, target: float) -> GridFunction:
    unit = normalize(psi)
    return GridFunction(psi.grid, unit.values * target)


def _mean_gain(psi: GridFunction, f: np.ndarray) -> float:
    density = np.abs(psi.values) ** 2
    total = density.sum()
    return float(np.dot(density, f) / total) if total else 0.0


def default_initial_state(grid: Grid) -> GridFunction:
    """Deterministic Gaussian initial guess exp(-x^2/2)."""
    return GridFunction(grid, np.exp(-0.5 * grid.nodes**2).astype(np.complex128))


def solve_stationary(
    problem: NlsProblem,
    init: GridFunction | None = None,
    mixing: float = DEFAULT_MIXING,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tol: float = DEFAULT_TOL,
    opts: SolverOptions | None = None,
) -> NlsSolution:
    """Self-consistent stationary state on the lowest-Re energy branch.

    Convergence requires both ||psi_new - psi_old|| <= tol and
    |Delta E| <= tol.  A non-converged run returns the best iterate with
    ``converged=False``; a diverging density raises
    :class:`NonConvergenceError`.
    """
    if not 0.0 < mixing <= 1.0:
        raise ParameterError("mixing parameter must lie in (0, 1]")
    opts = opts or SolverOptions()
    grid = problem.grid
    base = evaluate_on_grid(problem.potential, grid).values
    f = _sampled_gain(problem)
    c = problem.nonlinearity

    psi = _rescale(init if init is not None else default_initial_state(grid), problem.target_norm)
    if not np.all(np.isfinite(c * np.abs(psi.values) ** 2)):
        raise ParameterError("c |init|^2 must be finite")
    density = np.abs(psi.values) ** 2

    energy: complex | None = None
    history: list[tuple[int, complex, float]] = []
    converged = False
    iterations = 0

    for iteration in range(1, max_iterations + 1):
        iterations = iteration
        H_eff = _effective_hamiltonian(base, c, density, f, grid)
        if energy is not None:
            shift = energy
        else:
            shift = complex(np.min((base + c * density).real) - 1.0)
        pair = inverse_iteration(H_eff, shift, opts, start=psi.values)
        psi_new = _rescale(GridFunction(grid, pair.vector), problem.target_norm)
        density_new = np.abs(psi_new.values) ** 2

        if not np.all(np.isfinite(density_new)) or norm(psi_new) > _DIVERGENCE_NORM:
            raise NonConvergenceError("self-consistent iteration diverged")

        delta_psi = norm(GridFunction(grid, psi_new.values - psi.values))
        delta_e = abs(pair.value - energy) if energy is not None else np.inf
        history.append((iteration, complex(pair.value), float(delta_psi)))

        psi = psi_new
        energy = complex(pair.value)
        if delta_psi <= tol and delta_e <= tol:
            converged = True
            density = density_new
            break
        density = (1.0 - mixing) * density + mixing * density_new

    assert energy is not None
    residual = _self_consistent_residual(base, c, f, grid, psi, energy)
    return NlsSolution(
        psi=psi,
        energy=energy,
        iterations=iterations,
        residual=residual,
        exp_gain=_mean_gain(psi, f),
        converged=converged,
        history=tuple(history),
    )


def _self_consistent_residual(
    base: np.ndarray,
    c: float,
    f: np.ndarray,
    grid: Grid,
    psi: GridFunction,
    energy: complex,
) -> float:
    H = _effective_hamiltonian(base, c, np.abs(psi.values) ** 2, f, grid)
    r = H.matvec(psi.values) - energy * psi.values
    return norm(GridFunction(grid, r)) / norm(psi)


def nls_residual(problem: NlsProblem, solution: NlsSolution) -> float:
    """Residual of the full nonlinear equation, rebuilt from scratch."""
    base = evaluate_on_grid(problem.potential, problem.grid).values
    f = _sampled_gain(problem)
    return _self_consistent_residual(
        base, problem.nonlinearity, f, problem.grid, solution.psi, solution.energy
    )
