import numpy as np
import pytest
from scipy.optimize import minimize

from spectra import (
    NlsProblem,
    NlsSolution,
    ParameterError,
    PotentialSpec,
    assemble_1d,
    eigen_decompose,
    evaluate_on_grid,
    inner_product,
    make_grid,
    nls_residual,
    parse,
    solve_stationary,
)
from spectra.grids import GridFunction


def problem(grid, c=0.0, gain="0", potential="x^2", target_norm=1.0):
    return NlsProblem(
        potential=PotentialSpec(parse(potential), {}),
        nonlinearity=c,
        gain=PotentialSpec(parse(gain), {}),
        grid=grid,
        target_norm=target_norm,
    )


def gp_chemical_potential_by_minimization(grid, c, seed=0):
    """Independent oracle: minimize the discrete energy functional

        E[psi] = <psi|H0|psi> + (c/2) h sum |psi|^4,   ||psi||_h = 1,

    over real vectors with L-BFGS, then report mu = <H0> + c h sum psi^4.
    """
    U = evaluate_on_grid(PotentialSpec(parse("x^2"), {}), grid)
    H0 = assemble_1d(U).data.real
    h = grid.h

    def split(v):
        s = h * np.dot(v, v)
        kinetic = h * np.dot(v, H0 @ v)
        quartic = h * np.sum(v**4)
        return s, kinetic, quartic

    def objective(v):
        s, kinetic, quartic = split(v)
        return kinetic / s + 0.5 * c * quartic / s**2

    def gradient(v):
        s, kinetic, quartic = split(v)
        grad = (2 * h / s) * (H0 @ v) - (kinetic / s**2) * (2 * h * v)
        grad += 0.5 * c * ((4 * h / s**2) * v**3 - (quartic / s**3) * 2 * (2 * h * v))
        return grad

    start = np.exp(-0.5 * grid.nodes**2) + 0.01
    result = minimize(objective, start, jac=gradient, method="L-BFGS-B",
                      options={"maxiter": 2000, "gtol": 1e-12, "ftol": 1e-15})
    v = result.x
    s, kinetic, quartic = split(v)
    return kinetic / s + c * quartic / s**2


class TestLinearLimit:
    def test_reduces_to_ground_eigenpair(self):
        grid = make_grid(-8.0, 8.0, 200)
        solution = solve_stationary(problem(grid))
        spectrum = eigen_decompose(assemble_1d(
            evaluate_on_grid(PotentialSpec(parse("x^2"), {}), grid)))
        ground = spectrum.values[0]
        assert solution.converged
        assert abs(solution.energy - ground) <= 1e-8
        assert solution.energy.real == pytest.approx(1.0, abs=2e-2)

    def test_residual_matches_linear_eigenresidual(self):
        grid = make_grid(-8.0, 8.0, 200)
        solution = solve_stationary(problem(grid))
        recomputed = nls_residual(problem(grid), solution)
        assert recomputed <= 2.0 * max(solution.residual, 1e-15)


class TestRepulsiveShift:
    def test_energy_rises_and_matches_functional_minimum(self):
        grid = make_grid(-6.0, 6.0, 81)
        linear = solve_stationary(problem(grid, c=0.0))
        nonlinear = solve_stationary(problem(grid, c=1.0))
        assert abs(nonlinear.energy.imag) <= 1e-10
        assert nonlinear.energy.real > linear.energy.real
        mu = gp_chemical_potential_by_minimization(grid, c=1.0)
        assert nonlinear.energy.real == pytest.approx(mu, abs=1e-5)


class TestGainBalance:
    def test_odd_gain_keeps_energy_real(self):
        grid = make_grid(-8.0, 8.0, 400)
        p = problem(grid, c=1.0, gain="0.1*x")
        solution = solve_stationary(p)
        assert solution.converged
        assert abs(solution.energy.imag) <= 1e-6
        assert abs(solution.exp_gain) <= 1e-6

    def test_balance_identity_at_fixed_point(self):
        grid = make_grid(-8.0, 8.0, 400)
        p = problem(grid, c=1.0, gain="0.1*x")
        solution = solve_stationary(p)
        U = evaluate_on_grid(p.potential, grid)
        f = evaluate_on_grid(p.gain, grid).values.real
        effective = GridFunction(
            grid, U.values + np.abs(solution.psi.values) ** 2 + 1j * f
        )
        H_eff = assemble_1d(effective)
        bound = 10.0 * solution.residual * H_eff.frobenius_norm
        assert abs(solution.energy.imag - solution.exp_gain) <= max(bound, 1e-12)

    def test_norm_conserved(self):
        grid = make_grid(-8.0, 8.0, 300)
        for target in (1.0, 2.5):
            p = problem(grid, c=0.8, gain="0.1*x", target_norm=target)
            solution = solve_stationary(p)
            measured = np.sqrt(inner_product(solution.psi, solution.psi).real)
            assert measured == pytest.approx(target, abs=1e-12)


class TestFailureModes:
    def test_mixing_validated(self):
        grid = make_grid(-5.0, 5.0, 50)
        with pytest.raises(ParameterError):
            solve_stationary(problem(grid), mixing=0.0)

    def test_gain_must_be_real(self):
        grid = make_grid(-5.0, 5.0, 50)
        with pytest.raises(ParameterError):
            solve_stationary(problem(grid, gain="i*x"))

    def test_unconverged_run_is_flagged_not_dropped(self):
        grid = make_grid(-6.0, 6.0, 120)
        solution = solve_stationary(problem(grid, c=3.0), max_iterations=1)
        assert isinstance(solution, NlsSolution)
        assert not solution.converged
        assert solution.iterations == 1

    def test_history_records_each_iteration(self):
        grid = make_grid(-6.0, 6.0, 120)
        solution = solve_stationary(problem(grid, c=1.0))
        assert len(solution.history) == solution.iterations
        assert solution.history[0][0] == 1

    def test_zero_initial_state_rejected(self):
        from spectra import ZeroFunctionError

        grid = make_grid(-5.0, 5.0, 50)
        zero = GridFunction(grid, np.zeros(50, dtype=complex))
        with pytest.raises(ZeroFunctionError):
            solve_stationary(problem(grid), init=zero)
