"""Band structure from Bloch boundary conditions.

The Bloch wrap identifies psi_{j+n} with exp(i theta) psi_j, turning the
finite-difference line into a ring threaded by the phase theta.  For a
free particle the bands are the circulant dispersion
(2/h^2)(1 - cos((theta + 2 pi m)/n)); adding a real periodic potential
opens gaps but keeps every band energy real (the wrapped matrix stays
Hermitian), which is the discrete version of real band structure in a
crystal.
"""

import numpy as np

from spectra import (
    PotentialSpec,
    assemble_1d,
    bloch,
    eigen_decompose,
    evaluate_on_grid,
    make_grid,
    parse,
)


def bands(source, grid, thetas, count):
    spec = PotentialSpec(parse(source), {})
    U = evaluate_on_grid(spec, grid)
    rows = []
    for theta in thetas:
        spectrum = eigen_decompose(assemble_1d(U, bloch(theta)))
        rows.append(spectrum.values[:count])
    return np.array(rows)


def main():
    n = 40
    grid = make_grid(0.0, 2.0, n)
    thetas = np.linspace(0.0, 2 * np.pi, 9, endpoint=False)

    free = bands("0", grid, thetas, 3)
    print("free particle on a ring (lowest 3 bands):")
    print(f"{'theta':>8} {'E0':>12} {'E1':>12} {'E2':>12}   analytic E0")
    for theta, row in zip(thetas, free):
        branches = (2.0 / grid.h**2) * (
            1.0 - np.cos((theta + 2 * np.pi * np.arange(-1, 2)) / n)
        )
        print(f"{theta:>8.3f} {row[0].real:>12.6f} {row[1].real:>12.6f} "
              f"{row[2].real:>12.6f}   {branches.min():>12.6f}")

    lattice = bands("cos(3.14159265358979*x)", grid, thetas, 3)
    print("\ncosine lattice (lowest 3 bands): all energies stay real")
    print(f"{'theta':>8} {'E0':>12} {'E1':>12} {'E2':>12} {'max |Im E|':>12}")
    for theta, row in zip(thetas, lattice):
        print(f"{theta:>8.3f} {row[0].real:>12.6f} {row[1].real:>12.6f} "
              f"{row[2].real:>12.6f} {np.abs(row.imag).max():>12.2e}")


if __name__ == "__main__":
    main()
