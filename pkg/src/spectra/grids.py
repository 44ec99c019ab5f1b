"""Uniform grids, finite-difference Hamiltonians, and discrete quadrature.

Conventions (fixed across the package):

* Schrödinger equation in units with hbar^2/2m = 1:  -psi'' + U psi = E psi.
* A grid over (a, b) holds only interior nodes x_j = a + j*h, j = 1..n,
  with spacing h = (b - a)/(n + 1).  Dirichlet values at a and b are
  implied zeros and never stored.
* Second-order central differences: the discrete Hamiltonian has
  diagonal 2/h^2 + U(x_j) and off-diagonals -1/h^2.
* Quadrature is the rectangle rule h * sum_j f(x_j), which coincides
  with the trapezoid rule for functions vanishing at both endpoints and
  keeps the discrete eigenproblem and the inner product consistent.

All types are immutable values; assembly and quadrature are pure
functions and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    GridMismatchError,
    InvalidExtentError,
    ZeroFunctionError,
)

__all__ = [
    "Grid",
    "GridFunction",
    "BoundaryCondition",
    "DIRICHLET",
    "bloch",
    "ComplexMatrix",
    "make_grid",
    "assemble_1d",
    "assemble_radial",
    "inner_product",
    "norm",
    "normalize",
    "export_matrix_csv",
]

STRUCTURE_GENERAL = "general"
STRUCTURE_TRIDIAGONAL = "tridiagonal"
STRUCTURE_TRIDIAGONAL_CORNERS = "tridiagonal-plus-corners"


@dataclass(frozen=True, eq=True)
class Grid:
    """Uniform interior-node grid over (a, b)."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (self.b > self.a):
            raise InvalidExtentError(f"need b > a, got a={self.a}, b={self.b}")
        if self.n < 2:
            raise InvalidExtentError(f"need at least 2 interior nodes, got {self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.n + 1)

    @property
    def symmetric(self) -> bool:
        """True iff a == -b; then nodes come in +/- pairs (0 present iff n odd)."""
        return self.a == -self.b


def make_grid(a: float, b: float, n: int) -> Grid:
    """Uniform grid with ``n`` interior nodes on (a, b)."""
    return Grid(float(a), float(b), int(n))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on the interior nodes of a grid (Dirichlet semantics)."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n,):
            raise GridMismatchError(
                f"value count {values.shape} does not match grid size {self.grid.n}"
            )
        object.__setattr__(self, "values", values)

    def map_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values)


@dataclass(frozen=True)
class BoundaryCondition:
    """Either plain Dirichlet walls or Bloch-periodic wrap with phase theta.

    Bloch mode identifies node j+n with exp(i*theta) times node j; it is
    only meaningful when the sampled potential is periodic over the n
    nodes (discrete ring of circumference n*h).
    """

    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "bloch"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "bloch" and not 0.0 <= self.theta < 2.0 * np.pi:
            raise ValueError("bloch phase must lie in [0, 2*pi)")


DIRICHLET = BoundaryCondition("dirichlet")


def bloch(theta: float) -> BoundaryCondition:
    return BoundaryCondition("bloch", float(theta))


@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex square matrix with a truthful structure tag."""

    data: np.ndarray = field(repr=False)
    structure: str = STRUCTURE_GENERAL

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.complex128)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {data.shape}")
        object.__setattr__(self, "data", data)
        if self.structure not in (
            STRUCTURE_GENERAL,
            STRUCTURE_TRIDIAGONAL,
            STRUCTURE_TRIDIAGONAL_CORNERS,
        ):
            raise ValueError(f"unknown structure tag {self.structure!r}")
        if self.structure != STRUCTURE_GENERAL:
            # off-structure entries must be exactly zero
            n = data.shape[0]
            allowed = (
                np.count_nonzero(np.diagonal(data))
                + np.count_nonzero(np.diagonal(data, 1))
                + np.count_nonzero(np.diagonal(data, -1))
            )
            if self.structure == STRUCTURE_TRIDIAGONAL_CORNERS and n > 2:
                allowed += np.count_nonzero([data[0, n - 1], data[n - 1, 0]])
            if np.count_nonzero(data) != allowed:
                raise ValueError(
                    f"structure tag {self.structure!r} is not truthful"
                )

    @property
    def dimension(self) -> int:
        return self.data.shape[0]

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Matrix-vector product, O(n) on tagged tridiagonal structure."""
        v = np.asarray(v, dtype=np.complex128)
        if v.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"vector length {v.shape} vs dimension {self.dimension}"
            )
        if self.structure == STRUCTURE_GENERAL:
            return self.data @ v
        d = np.diagonal(self.data)
        up = np.diagonal(self.data, 1)
        lo = np.diagonal(self.data, -1)
        out = d * v
        out[:-1] += up * v[1:]
        out[1:] += lo * v[:-1]
        if self.structure == STRUCTURE_TRIDIAGONAL_CORNERS:
            out[0] += self.data[0, -1] * v[-1]
            out[-1] += self.data[-1, 0] * v[0]
        return out

    def diagonals(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(sub, main, super) diagonals; valid for tridiagonal structure."""
        return (
            np.diagonal(self.data, -1).copy(),
            np.diagonal(self.data).copy(),
            np.diagonal(self.data, 1).copy(),
        )


def _empty_hamiltonian(n: int) -> np.ndarray:
    return np.zeros((n, n), dtype=np.complex128)


def assemble_1d(U: GridFunction, bc: BoundaryCondition = DIRICHLET) -> ComplexMatrix:
    """Discretize -d^2/dx^2 + U(x) with central differences.

    Dirichlet walls give a tridiagonal matrix; Bloch wrap adds corner
    entries -exp(-i*theta)/h^2 (top right) and -exp(+i*theta)/h^2
    (bottom left), so psi_{j+n} = exp(i*theta) psi_j.
    """
    n = U.grid.n
    h = U.grid.h
    inv_h2 = 1.0 / (h * h)
    H = _empty_hamiltonian(n)
    idx = np.arange(n)
    H[idx, idx] = 2.0 * inv_h2 + U.values
    H[idx[:-1], idx[:-1] + 1] = -inv_h2
    H[idx[1:], idx[1:] - 1] = -inv_h2
    if bc.kind == "bloch":
        H[0, n - 1] += -np.exp(-1j * bc.theta) * inv_h2
        H[n - 1, 0] += -np.exp(1j * bc.theta) * inv_h2
        return ComplexMatrix(H, STRUCTURE_TRIDIAGONAL_CORNERS)
    return ComplexMatrix(H, STRUCTURE_TRIDIAGONAL)


def assemble_radial(V: GridFunction, l: int) -> ComplexMatrix:
    """Reduced radial problem -u'' + [l(l+1)/r^2 + V(r)] u = E u on (0, R].

    The grid must start at a = 0 so r = 0 is excluded (u(0) = 0 is the
    implied Dirichlet value for the reduced wavefunction u = r R).
    """
    if V.grid.a != 0.0:
        raise InvalidExtentError("radial grid must span (0, R] with a = 0")
    if l < 0:
        raise ValueError("angular momentum l must be a nonnegative integer")
    r = V.grid.nodes
    centrifugal = l * (l + 1) / (r * r)
    effective = GridFunction(V.grid, V.values + centrifugal)
    return assemble_1d(effective, DIRICHLET)


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """Discrete L2 inner product  h * sum_j conj(f_j) g_j."""
    if f.grid != g.grid:
        raise GridMismatchError("inner product of functions on different grids")
    return complex(f.grid.h * np.vdot(f.values, g.values))


def norm(f: GridFunction) -> float:
    return float(np.sqrt(inner_product(f, f).real))


def normalize(f: GridFunction) -> GridFunction:
    """Scale to unit discrete norm; phase fixed so the largest-modulus
    entry is real positive."""
    size = norm(f)
    if size == 0.0:
        raise ZeroFunctionError("cannot normalize the zero function")
    values = f.values / size
    pivot = int(np.argmax(np.abs(values)))
    phase = values[pivot]
    if phase != 0:
        values = values * (abs(phase) / phase)
    return GridFunction(f.grid, values)


def export_matrix_csv(M: ComplexMatrix, path) -> None:
    """Write the nonzero entries as ``row,col,re,im`` lines (debug aid)."""
    rows, cols = np.nonzero(M.data)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("row,col,re,im\n")
        for i, j in zip(rows.tolist(), cols.tolist()):
            z = complex(M.data[i, j])
            fh.write(f"{i},{j},{z.real!r},{z.imag!r}\n")
