"""Gain/loss balance in the nonlinear Schrödinger equation.

Stationary states of  (-d^2/dx^2 + x^2 + c |psi|^2 + i f(x)) psi = E psi
with an odd gain profile f(x) = g x: particles are injected on one side
and removed symmetrically on the other, so at a balanced fixed point the
net gain <f> vanishes and the energy stays real even though the operator
is non-Hermitian.  The mean-field term only shifts the (real) energy.
"""

import numpy as np

from spectra import NlsProblem, PotentialSpec, make_grid, parse, solve_stationary


def main():
    grid = make_grid(-8.0, 8.0, 400)
    trap = PotentialSpec(parse("x^2"), {})

    print(f"{'c':>5} {'gain':>8} {'Re E':>12} {'Im E':>12} {'<f>':>12} "
          f"{'iters':>6} {'residual':>10}")
    for c in (0.0, 0.5, 1.0, 2.0):
        for g in (0.0, 0.1, 0.3):
            problem = NlsProblem(
                potential=trap,
                nonlinearity=c,
                gain=PotentialSpec(parse(f"{g}*x"), {}),
                grid=grid,
            )
            sol = solve_stationary(problem)
            print(
                f"{c:>5.1f} {g:>8.2f} {sol.energy.real:>12.8f} "
                f"{sol.energy.imag:>12.2e} {sol.exp_gain:>12.2e} "
                f"{sol.iterations:>6} {sol.residual:>10.2e}"
            )
    print("\nIm E tracks <f> identically (the discrete reality criterion with")
    print("U^I = f); the odd profile keeps both pinned at zero while the")
    print("repulsive mean field pushes Re E upward.")


if __name__ == "__main__":
    main()
