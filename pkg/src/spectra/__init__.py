"""Numerical laboratory for Schrödinger problems with complex potentials.

Discretizes 1D and reduced radial Schrödinger operators with complex
(non-Hermitian) potentials, computes full complex spectra, and checks
the per-state reality criterion: an eigenvalue is real exactly when the
expectation value of the imaginary part of the potential vanishes.

Typical use::

    from spectra import (
        parse, PotentialSpec, evaluate_on_grid, make_grid,
        assemble_1d, eigen_decompose, verify_reality_theorem,
    )

    grid = make_grid(-10.0, 10.0, 800)
    spec = PotentialSpec(parse("x^2 + i*x"), {})
    U = evaluate_on_grid(spec, grid)
    H = assemble_1d(U)
    spectrum = eigen_decompose(H)
    reports = verify_reality_theorem(H, spectrum, U)
"""

from .errors import (
    ConfigError,
    DimensionMismatchError,
    EvaluationSingularityError,
    ExprSyntaxError,
    GridMismatchError,
    InvalidExtentError,
    NoClosedFormError,
    NonConvergenceError,
    ParameterError,
    SpectraError,
    UnboundSymbolError,
    UnknownEntryError,
    UnknownFunctionError,
    ZeroFunctionError,
)
from .expr import (
    PotentialSpec,
    SymmetryReport,
    analyze_symmetry,
    evaluate,
    evaluate_on_grid,
    parameter_names,
    parse,
    to_source,
)
from .grids import (
    DIRICHLET,
    BoundaryCondition,
    ComplexMatrix,
    Grid,
    GridFunction,
    assemble_1d,
    assemble_radial,
    bloch,
    export_matrix_csv,
    inner_product,
    make_grid,
    norm,
    normalize,
)
from .eigen import (
    EigenPair,
    SolverOptions,
    Spectrum,
    eigen_decompose,
    inverse_iteration,
    residual_norm,
    schur_eigenvalues,
)
from .diagnostics import (
    DiagnosticsReport,
    SpectrumPartition,
    TheoremIdentityError,
    classify_spectrum,
    expectation_imag_potential,
    probability_current,
    rayleigh_quotient,
    verify_reality_theorem,
)
from .catalog import (
    CatalogEntry,
    ValidationReport,
    exact_energy,
    exact_wavefunction,
    get_entry,
    laguerre,
    list_entries,
    potential_spec,
    validate_entry,
)
from .nls import NlsProblem, NlsSolution, nls_residual, solve_stationary

__version__ = "0.1.0"
