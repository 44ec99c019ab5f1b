"""PT-symmetry breaking in the x^2 (ix)^eps family.

For eps >= 0 the low-lying spectrum is entirely real and positive; as
eps drops below zero, adjacent levels merge pairwise and move into the
complex plane as conjugate pairs.  The scan below prints the four lowest
levels against eps and marks where pairs have formed.
"""

import numpy as np

from spectra import (
    PotentialSpec,
    assemble_1d,
    classify_spectrum,
    eigen_decompose,
    evaluate_on_grid,
    make_grid,
    parse,
)

EPS_VALUES = (1.0, 0.5, 0.0, -0.3, -0.5, -0.7)


def main():
    grid = make_grid(-10.0, 10.0, 300)
    family = parse("x^2*(i*x)^eps")
    print(f"{'eps':>6} {'E0':>18} {'E1':>18} {'E2':>18} {'E3':>18}  pairs")
    for eps in EPS_VALUES:
        U = evaluate_on_grid(PotentialSpec(family, {"eps": eps}), grid)
        spectrum = eigen_decompose(assemble_1d(U))
        part = classify_spectrum(spectrum)
        lowest = sorted(spectrum.values, key=lambda v: v.real)[:4]
        cells = [
            f"{v.real:9.4f}{v.imag:+8.4f}i" if abs(v.imag) > 1e-8 else f"{v.real:13.4f}    "
            for v in lowest
        ]
        n_pairs = sum(1 for p, _ in part.conjugate_pairs if abs(p.value) < 50.0)
        print(f"{eps:>6.2f} " + " ".join(f"{c:>18}" for c in cells)
              + f"  {n_pairs} low-lying")
    print("\neps = 0 is the harmonic oscillator (1, 3, 5, 7, ...); below zero,")
    print("levels coalesce and split into conjugate pairs: broken PT symmetry.")


if __name__ == "__main__":
    main()
