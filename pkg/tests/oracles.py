"""Independent reference computations for cross-checking the solvers.

Nothing here shares code paths with the package: the characteristic
polynomial is expanded by brute force over permutations, its roots come
from Durand-Kerner iteration (no eigensolver involved), and bound-state
energies of even potentials come from parity shooting with RK4.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linear_sum_assignment


def _permutation_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def charpoly_coefficients(M: np.ndarray) -> np.ndarray:
    """Coefficients of det(M - z I) in ascending powers of z (n <= 8).

    Leibniz expansion over all permutations; each diagonal entry
    contributes the degree-1 factor (M_ii - z).
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n > 8:
        raise ValueError("brute-force expansion limited to n <= 8")
    coeffs = np.zeros(n + 1, dtype=complex)
    for perm in itertools.permutations(range(n)):
        sign = _permutation_sign(perm)
        poly = np.array([1.0 + 0.0j])
        for i, j in enumerate(perm):
            if i == j:
                poly = np.convolve(poly, np.array([M[i, i], -1.0 + 0.0j]))
            else:
                poly = poly * M[i, j]
        coeffs[: len(poly)] += sign * poly
    return coeffs


def polynomial_roots(coeffs: np.ndarray, iterations: int = 600) -> np.ndarray:
    """All roots by Durand-Kerner iteration (deterministic start points)."""
    c = np.asarray(coeffs, dtype=complex)
    c = np.trim_zeros(c, "b")
    if len(c) < 2:
        raise ValueError("polynomial must have positive degree")
    c = c / c[-1]
    degree = len(c) - 1
    bound = 1.0 + float(np.max(np.abs(c[:-1])))
    k = np.arange(degree)
    start = bound * (0.6 + 0.4 * k / max(degree - 1, 1)) * np.exp(
        2j * np.pi * (k / degree + 0.137)
    )
    roots = start.astype(complex)
    powers = np.arange(len(c))
    for _ in range(iterations):
        values = np.array([np.sum(c * r**powers) for r in roots])
        updates = np.empty_like(roots)
        for i in range(degree):
            others = np.prod(roots[i] - np.delete(roots, i))
            updates[i] = values[i] / others
        roots = roots - updates
        if np.max(np.abs(updates)) <= 1e-14 * (1.0 + np.max(np.abs(roots))):
            break
    return roots


def eigenvalues_by_charpoly(M: np.ndarray) -> np.ndarray:
    return polynomial_roots(charpoly_coefficients(M))


def multiset_distance(a, b) -> float:
    """Optimal-matching max distance between two complex multisets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


# --------------------------------------------------------------------------
# Parity shooting for even real potentials on the line
# --------------------------------------------------------------------------

def _shoot_boundary(vfunc, energy: float, x_max: float, steps: int, even: bool) -> float:
    """RK4-integrate -psi'' + V psi = E psi from 0 to x_max.

    Returns psi(x_max), rescaled along the way to dodge overflow (only
    the sign structure matters for eigenvalue bracketing).
    """
    h = x_max / steps
    psi, dpsi = (1.0, 0.0) if even else (0.0, 1.0)
    x = 0.0

    def rhs(x, psi, dpsi):
        return dpsi, (vfunc(x) - energy) * psi

    for _ in range(steps):
        k1p, k1d = rhs(x, psi, dpsi)
        k2p, k2d = rhs(x + 0.5 * h, psi + 0.5 * h * k1p, dpsi + 0.5 * h * k1d)
        k3p, k3d = rhs(x + 0.5 * h, psi + 0.5 * h * k2p, dpsi + 0.5 * h * k2d)
        k4p, k4d = rhs(x + h, psi + h * k3p, dpsi + h * k3d)
        psi += h * (k1p + 2 * k2p + 2 * k3p + k4p) / 6.0
        dpsi += h * (k1d + 2 * k2d + 2 * k3d + k4d) / 6.0
        x += h
        scale = max(abs(psi), abs(dpsi))
        if scale > 1e100:
            psi /= scale
            dpsi /= scale
    return psi


def shooting_levels(
    vfunc,
    count: int,
    e_max: float,
    x_max: float = 8.0,
    steps: int = 4000,
    scan_points: int = 400,
) -> list[float]:
    """Lowest bound-state energies of -psi'' + V psi = E psi for even V.

    Even/odd parity shooting from the origin with sign-change bracketing
    and bisection on psi(x_max).
    """
    levels: list[float] = []
    energies = np.linspace(0.0, e_max, scan_points)
    for even in (True, False):
        values = [_shoot_boundary(vfunc, float(e), x_max, steps, even) for e in energies]
        for lo, hi, flo in (
            (energies[i], energies[i + 1], values[i])
            for i in range(len(energies) - 1)
            if np.sign(values[i]) != np.sign(values[i + 1])
        ):
            a, b, fa = float(lo), float(hi), float(flo)
            for _ in range(80):
                mid = 0.5 * (a + b)
                fm = _shoot_boundary(vfunc, mid, x_max, steps, even)
                if np.sign(fm) == np.sign(fa):
                    a, fa = mid, fm
                else:
                    b = mid
            levels.append(0.5 * (a + b))
    levels.sort()
    return levels[:count]
