"""Dense complex non-Hermitian eigensolver.

Eigenvalues come from balancing, Householder reduction to upper
Hessenberg form, and a single-shift complex QR iteration with Wilkinson
shifts and subdiagonal deflation.  Eigenvectors are computed separately
by shifted inverse iteration on the *original* matrix, so every residual
is independently meaningful.  Start vectors are seeded deterministically
and runs are reproducible bit for bit for a fixed configuration.

Linear solves inside inverse iteration go through LAPACK (via scipy):
banded O(n) solves for tridiagonal structure, a one-time LU
factorization otherwise.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, NonConvergenceError
from .grids import (
    STRUCTURE_TRIDIAGONAL,
    ComplexMatrix,
)

__all__ = [
    "SolverOptions",
    "EigenPair",
    "Spectrum",
    "schur_eigenvalues",
    "eigen_decompose",
    "inverse_iteration",
    "residual_norm",
]

MAX_INVERSE_ITERATIONS = 200
CONVERGED_RESIDUAL = 1e-10  # residual threshold for "converged" status


@dataclass(frozen=True)
class SolverOptions:
    """Tunables for the QR iteration and inverse iteration."""

    qr_max_sweeps: int = 60          # per eigenvalue, between deflations
    deflation_tol: float = 1e-13     # relative subdiagonal threshold
    inverse_tol: float = 1e-12       # relative residual stop for vectors
    seed: int = 1234                 # deterministic start vectors

    def __post_init__(self):
        if self.deflation_tol <= 0 or self.inverse_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its vector and recorded (never assumed) residual."""

    value: complex
    vector: np.ndarray = field(repr=False)
    residual: float
    converged: bool = True
    iterations: int = 0


@dataclass(frozen=True)
class Spectrum:
    """All eigenpairs, sorted by ascending Re, ties by ascending Im."""

    pairs: tuple[EigenPair, ...]
    qr_sweeps: int = 0
    deflations: int = 0

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs], dtype=np.complex128)


# --------------------------------------------------------------------------
# Balancing and Hessenberg reduction
# --------------------------------------------------------------------------

def _balance(A: np.ndarray) -> None:
    """Parlett-Reinsch diagonal scaling (radix 2, eigenvalues unchanged)."""
    n = A.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            col = np.abs(A[:, i]).sum() - abs(A[i, i])
            row = np.abs(A[i, :]).sum() - abs(A[i, i])
            if col == 0.0 or row == 0.0:
                continue
            f = 1.0
            s = col + row
            g = row / radix
            while col < g:
                f *= radix
                col *= sqrdx
            g = row * radix
            while col > g:
                f /= radix
                col /= sqrdx
            if (col + row) / f < 0.95 * s:
                converged = False
                A[i, :] *= 1.0 / f
                A[:, i] *= f


def _is_hessenberg(A: np.ndarray) -> bool:
    n = A.shape[0]
    if n <= 2:
        return True
    return not np.any(np.tril(A, -2))


def _hessenberg(A: np.ndarray) -> None:
    """In-place Householder reduction to upper Hessenberg form."""
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1 :, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        alpha = x[0]
        rho = -xnorm if alpha == 0 else -(alpha / abs(alpha)) * xnorm
        v = x.copy()
        v[0] -= rho
        vnorm = np.linalg.norm(v)
        if vnorm <= 1e-30 * xnorm:
            A[k + 2 :, k] = 0.0
            continue
        v /= vnorm
        # A <- P A P with P = I - 2 v v^H acting on the trailing block
        w = v.conj() @ A[k + 1 :, k:]
        A[k + 1 :, k:] -= 2.0 * np.outer(v, w)
        w2 = A[:, k + 1 :] @ v
        A[:, k + 1 :] -= 2.0 * np.outer(w2, v.conj())
        A[k + 1, k] = rho
        A[k + 2 :, k] = 0.0


# --------------------------------------------------------------------------
# Shifted QR iteration
# --------------------------------------------------------------------------

def _eig_2x2(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    mean = 0.5 * (a + d)
    delta = 0.5 * (a - d)
    sq = cmath.sqrt(delta * delta + b * c)
    lam1 = mean + sq if abs(mean + sq) >= abs(mean - sq) else mean - sq
    if lam1 == 0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    lam2 = (a * d - b * c) / lam1
    return lam1, lam2


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    """Eigenvalue of [[a, b], [c, d]] nearest to d."""
    delta = 0.5 * (a - d)
    sq = cmath.sqrt(delta * delta + b * c)
    t = delta + sq if abs(delta + sq) >= abs(delta - sq) else delta - sq
    if t == 0:
        return d
    return d - (b * c) / t


def _qr_step(H: np.ndarray, lo: int, hi: int, shift: complex) -> None:
    """One explicit single-shift QR sweep on the active window [lo, hi]."""
    idx = np.arange(lo, hi + 1)
    H[idx, idx] -= shift
    rotations: list[tuple[float, complex]] = []
    for j in range(lo, hi):
        a = H[j, j]
        b = H[j + 1, j]
        absb = abs(b)
        if absb == 0.0:
            rotations.append((1.0, 0.0 + 0.0j))
            continue
        absa = abs(a)
        t = np.hypot(absa, absb)
        if absa == 0.0:
            c, s = 0.0, b.conjugate() / t
        else:
            c = absa / t
            s = (a / absa) * b.conjugate() / t
        rotations.append((c, s))
        rj = H[j, j : hi + 1].copy()
        rj1 = H[j + 1, j : hi + 1]
        H[j, j : hi + 1] = c * rj + s * rj1
        H[j + 1, j : hi + 1] = -s.conjugate() * rj + c * rj1
        H[j + 1, j] = 0.0  # exact by construction of the rotation
    for j in range(lo, hi):
        c, s = rotations[j - lo]
        if c == 1.0 and s == 0.0:
            continue
        top = min(j + 2, hi) + 1
        cj = H[lo:top, j].copy()
        cj1 = H[lo:top, j + 1]
        H[lo:top, j] = c * cj + s.conjugate() * cj1
        H[lo:top, j + 1] = -s * cj + c * cj1
    H[idx, idx] += shift


def _hessenberg_eigenvalues(
    H: np.ndarray, opts: SolverOptions
) -> tuple[list[complex], int, int]:
    """Eigenvalues of an upper Hessenberg matrix by shifted QR."""
    n = H.shape[0]
    eigenvalues: list[complex] = []
    scale = max(float(np.linalg.norm(H)), np.finfo(float).tiny)
    hi = n - 1
    sweeps_in_block = 0
    total_sweeps = 0
    deflations = 0
    while hi >= 0:
        if hi == 0:
            eigenvalues.append(complex(H[0, 0]))
            hi -= 1
            deflations += 1
            sweeps_in_block = 0
            continue
        lo = hi
        while lo > 0:
            thresh = opts.deflation_tol * (
                abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            )
            if thresh == 0.0:
                # guard for a locally zero diagonal: fall back to the
                # global scale so deflation can still trigger
                thresh = opts.deflation_tol * scale
            if abs(H[lo, lo - 1]) <= thresh:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigenvalues.append(complex(H[hi, hi]))
            hi -= 1
            deflations += 1
            sweeps_in_block = 0
            continue
        if lo == hi - 1:
            lam1, lam2 = _eig_2x2(
                H[lo, lo], H[lo, hi], H[hi, lo], H[hi, hi]
            )
            eigenvalues.extend((lam1, lam2))
            hi -= 2
            deflations += 1
            sweeps_in_block = 0
            continue
        if sweeps_in_block >= opts.qr_max_sweeps:
            raise NonConvergenceError(
                f"QR failed to deflate subdiagonal ({hi}, {hi - 1}) "
                f"after {sweeps_in_block} sweeps",
                detail={"subdiagonal": hi, "sweeps": sweeps_in_block},
            )
        shift = _wilkinson_shift(
            H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]
        )
        if sweeps_in_block > 0 and sweeps_in_block % 12 == 0:
            # deterministic exceptional shift to break rare limit cycles
            shift = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        _qr_step(H, lo, hi, shift)
        sweeps_in_block += 1
        total_sweeps += 1
    return eigenvalues, total_sweeps, deflations


def schur_eigenvalues(M: ComplexMatrix, opts: SolverOptions | None = None) -> list[complex]:
    """All eigenvalues of a dense complex matrix (multiset, solver order).

    Raises :class:`NonConvergenceError` naming the subdiagonal that failed
    to deflate if a block exceeds its sweep budget.
    """
    opts = opts or SolverOptions()
    A = M.data.copy()
    if not np.all(np.isfinite(A.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    if A.shape[0] == 1:
        return [complex(A[0, 0])]
    _balance(A)
    if not _is_hessenberg(A):
        _hessenberg(A)
    values, _, _ = _hessenberg_eigenvalues(A, opts)
    return values


# --------------------------------------------------------------------------
# Shifted inverse iteration
# --------------------------------------------------------------------------

class _ShiftedSolver:
    """Solves (M - sigma I) w = v, exploiting tridiagonal structure."""

    def __init__(self, M: ComplexMatrix, sigma: complex):
        self.sigma = sigma
        self.tridiagonal = M.structure == STRUCTURE_TRIDIAGONAL
        if self.tridiagonal:
            lo, d, up = M.diagonals()
            n = M.dimension
            ab = np.zeros((3, n), dtype=np.complex128)
            ab[0, 1:] = up
            ab[1, :] = d - sigma
            ab[2, :-1] = lo
            self._ab = ab
        else:
            shifted = M.data.copy()
            idx = np.arange(M.dimension)
            shifted[idx, idx] -= sigma
            with warnings.catch_warnings():
                # an exactly singular factorization is expected when the
                # shift hits an eigenvalue; the caller perturbs and retries
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                self._lu = scipy.linalg.lu_factor(shifted, check_finite=False)

    def solve(self, v: np.ndarray) -> np.ndarray:
        if self.tridiagonal:
            return scipy.linalg.solve_banded(
                (1, 1), self._ab, v, check_finite=False
            )
        return scipy.linalg.lu_solve(self._lu, v, check_finite=False)


def _make_solver(M: ComplexMatrix, sigma: complex, attempt: int) -> _ShiftedSolver:
    # nudge the shift on retries so an exactly singular factorization
    # becomes merely ill-conditioned (which inverse iteration loves)
    if attempt > 0:
        bump = attempt * 1e-12 * max(1.0, abs(sigma))
        sigma = sigma + bump
    return _ShiftedSolver(M, sigma)


def _phase_align(v: np.ndarray) -> np.ndarray:
    pivot = v[int(np.argmax(np.abs(v)))]
    if pivot != 0:
        v = v * (abs(pivot) / pivot)
    return v


def _start_vector(n: int, seed_key) -> np.ndarray:
    # real-valued start: for real matrices (real shifts) the whole
    # iteration then stays exactly real, so eigenvectors of Hermitian
    # problems carry no spurious imaginary admixture even when levels
    # are nearly degenerate; complex problems pick up complexity from
    # the first solve anyway
    rng = np.random.default_rng(seed_key)
    v = rng.standard_normal(n).astype(np.complex128)
    return v / np.linalg.norm(v)


def inverse_iteration(
    M: ComplexMatrix,
    shift: complex,
    opts: SolverOptions | None = None,
    start: np.ndarray | None = None,
) -> EigenPair:
    """Eigenpair nearest ``shift`` by shifted inverse iteration.

    Runs fixed-shift iterations until the Rayleigh quotient settles
    (which identifies the eigenvalue nearest the shift even when the
    shift is far away), then switches to Rayleigh-quotient updates for
    fast final convergence.  A singular factorization is handled by a
    deterministic nudge of the shift.
    """
    opts = opts or SolverOptions()
    n = M.dimension
    if start is None:
        v = _start_vector(n, (opts.seed,))
    else:
        if start.shape != (n,):
            raise DimensionMismatchError("start vector has wrong length")
        v = start.astype(np.complex128) / np.linalg.norm(start)

    fnorm = max(M.frobenius_norm, np.finfo(float).tiny)
    sigma = complex(shift)
    attempt = 0
    solver = _make_solver(M, sigma, attempt)
    lam = sigma
    lam_prev: complex | None = None
    stable = 0
    rayleigh_mode = False
    best: tuple[float, complex, np.ndarray] | None = None

    for it in range(1, MAX_INVERSE_ITERATIONS + 1):
        try:
            w = solver.solve(v)
        except (scipy.linalg.LinAlgError, np.linalg.LinAlgError):
            w = None
        if w is None or not np.all(np.isfinite(w.view(np.float64))):
            attempt += 1
            solver = _make_solver(M, lam if rayleigh_mode else sigma, attempt)
            continue
        wnorm = np.linalg.norm(w)
        if wnorm == 0.0:
            attempt += 1
            solver = _make_solver(M, lam if rayleigh_mode else sigma, attempt)
            continue
        w = w / wnorm
        Hw = M.matvec(w)
        lam = complex(np.vdot(w, Hw))
        res = float(np.linalg.norm(Hw - lam * w)) / fnorm
        v = w
        if best is None or res < best[0]:
            best = (res, lam, w.copy())
        if res <= opts.inverse_tol:
            vec = _phase_align(w)
            return EigenPair(lam, vec, res, converged=True, iterations=it)
        if lam_prev is not None and abs(lam - lam_prev) <= 1e-3 * max(1.0, abs(lam)):
            stable += 1
        else:
            stable = 0
        lam_prev = lam
        if not rayleigh_mode and (stable >= 3 or it >= MAX_INVERSE_ITERATIONS // 2):
            rayleigh_mode = True
        if rayleigh_mode:
            attempt = 0
            solver = _make_solver(M, lam, attempt)

    res, lam, w = best if best is not None else (np.inf, sigma, v)
    raise NonConvergenceError(
        f"inverse iteration did not converge in {MAX_INVERSE_ITERATIONS} "
        f"iterations (best residual {res:.3e})",
        detail={
            "value": lam,
            "vector": _phase_align(w),
            "residual": res,
            "iterations": MAX_INVERSE_ITERATIONS,
        },
    )


def residual_norm(M: ComplexMatrix, pair: EigenPair) -> float:
    """Relative residual  ||M v - lambda v|| / (||M||_F ||v||)."""
    v = np.asarray(pair.vector, dtype=np.complex128)
    if v.shape != (M.dimension,):
        raise DimensionMismatchError(
            f"vector length {v.shape} vs matrix dimension {M.dimension}"
        )
    vnorm = np.linalg.norm(v)
    if vnorm == 0.0:
        raise DimensionMismatchError("residual of the zero vector is undefined")
    num = np.linalg.norm(M.matvec(v) - pair.value * v)
    return float(num / (max(M.frobenius_norm, np.finfo(float).tiny) * vnorm))


def eigen_decompose(M: ComplexMatrix, opts: SolverOptions | None = None) -> Spectrum:
    """Full spectrum: QR eigenvalues, then one inverse iteration per value.

    Exactly repeated eigenvalues get deterministically perturbed shifts
    and fresh start vectors, so degenerate directions still converge.
    Non-converged vectors are flagged on their pair, never dropped.
    """
    opts = opts or SolverOptions()
    A = M.data.copy()
    if not np.all(np.isfinite(A.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    if M.dimension == 1:
        lam = complex(A[0, 0])
        vec = np.ones(1, dtype=np.complex128)
        pair = EigenPair(lam, vec, 0.0, converged=True, iterations=0)
        return Spectrum((pair,), 0, 1)
    _balance(A)
    if not _is_hessenberg(A):
        _hessenberg(A)
    values, sweeps, deflations = _hessenberg_eigenvalues(A, opts)

    order = np.lexsort((np.array(values).imag, np.array(values).real))
    seen: dict[complex, int] = {}
    pairs: list[EigenPair] = []
    for idx in order.tolist():
        lam = values[idx]
        repeat = seen.get(lam, 0)
        seen[lam] = repeat + 1
        sigma = lam
        if repeat:
            step = repeat * 1e-8
            sigma = lam * (1.0 + step) if lam != 0 else complex(step)
        start = _start_vector(M.dimension, (opts.seed, idx))
        try:
            pair = inverse_iteration(M, sigma, opts, start=start)
        except NonConvergenceError as exc:
            pair = EigenPair(
                exc.detail["value"],
                exc.detail["vector"],
                exc.detail["residual"],
                converged=False,
                iterations=exc.detail["iterations"],
            )
        if pair.residual > CONVERGED_RESIDUAL:
            pair = EigenPair(
                pair.value, pair.vector, pair.residual, False, pair.iterations
            )
        pairs.append(pair)

    pairs.sort(key=lambda p: (p.value.real, p.value.imag))
    return Spectrum(tuple(pairs), sweeps, deflations)
