"""Per-state observables and verification of the reality criterion.

The central identity is discrete and exact: for H = K + diag(U) with a
real symmetric kinetic part K,

    Im(psi^* H psi) = psi^* diag(Im U) psi,

so for any eigenpair (E, psi) the theorem residual |Im E - <U^I>| is
bounded by the eigenpair residual.  A real energy therefore forces the
expectation of the imaginary potential to vanish, and vice versa --
state by state, with no appeal to symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import EigenPair, Spectrum
from .errors import GridMismatchError, SpectraError, ZeroFunctionError
from .grids import ComplexMatrix, GridFunction, norm, normalize

__all__ = [
    "DiagnosticsReport",
    "SpectrumPartition",
    "TheoremIdentityError",
    "REALITY_TOL_DEFAULT",
    "CSV_HEADER",
    "expectation_imag_potential",
    "rayleigh_quotient",
    "probability_current",
    "classify_spectrum",
    "verify_reality_theorem",
    "report_csv_row",
]

REALITY_TOL_DEFAULT = 1e-8
FLUX_PREFACTOR = 2.0  # hbar/m with hbar = 1, m = 1/2 (units hbar^2/2m = 1)


class TheoremIdentityError(SpectraError):
    """A converged eigenpair violated the discrete reality identity.

    This cannot happen for a correctly assembled H = K + diag(U); it
    indicates an implementation bug, not a physics result.
    """

    code = "theorem-identity"


@dataclass(frozen=True)
class DiagnosticsReport:
    """Observables for one eigenstate."""

    index: int
    energy: complex
    norm: float
    exp_imag_potential: float
    theorem_residual: float
    eig_residual: float
    max_flux: float
    density_parity_deviation: float | None  # None off symmetric grids
    classification: str  # "real" | "complex"


@dataclass(frozen=True)
class SpectrumPartition:
    """Spectrum split into real values, conjugate pairs, and leftovers."""

    real: tuple[EigenPair, ...]
    conjugate_pairs: tuple[tuple[EigenPair, EigenPair], ...]
    unpaired: tuple[EigenPair, ...]


def expectation_imag_potential(psi: GridFunction, U: GridFunction) -> float:
    """<U^I> = h * sum_j |psi_j|^2 Im U_j  for a normalized state."""
    if psi.grid != U.grid:
        raise GridMismatchError("state and potential live on different grids")
    density = np.abs(psi.values) ** 2
    return float(psi.grid.h * np.dot(density, U.values.imag))


def rayleigh_quotient(H: ComplexMatrix, psi: GridFunction) -> complex:
    """(psi^* H psi) / (psi^* psi), using the plain vector inner product."""
    v = psi.values
    denom = np.vdot(v, v)
    if denom == 0:
        raise ZeroFunctionError("Rayleigh quotient of the zero vector")
    return complex(np.vdot(v, H.matvec(v)) / denom)


def probability_current(psi: GridFunction) -> GridFunction:
    """Probability current J = 2 Im(conj(psi) psi') with central differences.

    The derivative is centred at interior nodes; the first and last nodes
    are omitted (set to zero).  Output is real-valued, stored in the real
    part of a grid function.
    """
    v = psi.values
    h = psi.grid.h
    J = np.zeros(psi.grid.n, dtype=np.complex128)
    if psi.grid.n >= 3:
        dpsi = (v[2:] - v[:-2]) / (2.0 * h)
        J[1:-1] = FLUX_PREFACTOR * np.imag(np.conj(v[1:-1]) * dpsi)
    return GridFunction(psi.grid, J)


def _is_real(value: complex, reality_tol: float) -> bool:
    return abs(value.imag) <= reality_tol * max(1.0, abs(value.real))


def classify_spectrum(
    spectrum: Spectrum, reality_tol: float = REALITY_TOL_DEFAULT
) -> SpectrumPartition:
    """Partition eigenvalues into real / conjugate pairs / unpaired.

    Values with |Im E| <= tol * max(1, |Re E|) count as real; the rest are
    greedily matched into conjugate pairs within 10x the same tolerance.
    """
    if reality_tol <= 0:
        raise ValueError("reality tolerance must be positive")
    real: list[EigenPair] = []
    plus: list[EigenPair] = []
    minus: list[EigenPair] = []
    for pair in spectrum.pairs:
        if _is_real(pair.value, reality_tol):
            real.append(pair)
        elif pair.value.imag > 0:
            plus.append(pair)
        else:
            minus.append(pair)

    conjugate: list[tuple[EigenPair, EigenPair]] = []
    unused = list(minus)
    unpaired: list[EigenPair] = []
    for p in plus:
        target = p.value.conjugate()
        best = None
        best_gap = np.inf
        for m in unused:
            gap = abs(m.value - target)
            if gap < best_gap:
                best, best_gap = m, gap
        limit = 10.0 * reality_tol * max(1.0, abs(p.value))
        if best is not None and best_gap <= limit:
            conjugate.append((p, best))
            unused.remove(best)
        else:
            unpaired.append(p)
    unpaired.extend(unused)
    return SpectrumPartition(tuple(real), tuple(conjugate), tuple(unpaired))


def verify_reality_theorem(
    H: ComplexMatrix,
    spectrum: Spectrum,
    U: GridFunction,
    reality_tol: float = REALITY_TOL_DEFAULT,
) -> list[DiagnosticsReport]:
    """Per-state diagnostics with the theorem residual |Im E - <U^I>|.

    For converged pairs the discrete identity forces
    ``theorem_residual <= 10 * residual * ||H||_F``; a violation raises
    :class:`TheoremIdentityError` because it can only mean H was not
    assembled from U on this grid.
    """
    if U.grid.n != H.dimension:
        raise GridMismatchError("potential grid does not match matrix dimension")
    fnorm = H.frobenius_norm
    symmetric = U.grid.symmetric
    reports: list[DiagnosticsReport] = []
    for index, pair in enumerate(spectrum.pairs):
        state = GridFunction(U.grid, pair.vector)
        raw_norm = norm(state)
        psi = normalize(state)
        exp_ui = expectation_imag_potential(psi, U)
        theorem_residual = abs(pair.value.imag - exp_ui)
        bound = 10.0 * pair.residual * fnorm
        if pair.converged and theorem_residual > bound:
            raise TheoremIdentityError(
                f"state {index}: |Im E - <U^I>| = {theorem_residual:.3e} "
                f"exceeds 10*residual*||H||_F = {bound:.3e}"
            )
        flux = probability_current(psi)
        max_flux = float(np.max(np.abs(flux.values.real)))
        if symmetric:
            density = np.abs(psi.values) ** 2
            parity_dev = float(np.max(np.abs(density - density[::-1])))
        else:
            parity_dev = None
        classification = "real" if _is_real(pair.value, reality_tol) else "complex"
        reports.append(
            DiagnosticsReport(
                index=index,
                energy=pair.value,
                norm=raw_norm,
                exp_imag_potential=exp_ui,
                theorem_residual=theorem_residual,
                eig_residual=pair.residual,
                max_flux=max_flux,
                density_parity_deviation=parity_dev,
                classification=classification,
            )
        )
    return reports


CSV_HEADER = "index,re_E,im_E,exp_UI,theorem_residual,eig_residual,max_flux,parity_dev,class"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def report_csv_row(report: DiagnosticsReport) -> str:
    parity = "nan" if report.density_parity_deviation is None else _fmt(
        report.density_parity_deviation
    )
    return ",".join(
        [
            str(report.index),
            _fmt(report.energy.real),
            _fmt(report.energy.imag),
            _fmt(report.exp_imag_potential),
            _fmt(report.theorem_residual),
            _fmt(report.eig_residual),
            _fmt(report.max_flux),
            parity,
            report.classification,
        ]
    )
