"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SpectraError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class ExprSyntaxError(SpectraError):
    """Malformed expression source; ``offset`` is the byte position."""

    code = "expr-syntax"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownFunctionError(SpectraError):
    """Call to a function name outside the supported set."""

    code = "unknown-function"

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown function {name!r} (offset {offset})")
        self.name = name
        self.offset = offset


class UnboundSymbolError(SpectraError):
    """Evaluation met a parameter or variable with no bound value."""

    code = "unbound-symbol"

    def __init__(self, name: str):
        super().__init__(f"no value bound for symbol {name!r}")
        self.name = name


class EvaluationSingularityError(SpectraError):
    """Division by zero, log of zero, or a non-finite result.

    ``coordinate`` is the grid point at which evaluation blew up;
    ``index`` is filled in when the failure happened inside a grid sweep.
    """

    code = "evaluation-singularity"

    def __init__(self, message: str, coordinate: float, index: int | None = None):
        at = f" at coordinate {coordinate!r}"
        if index is not None:
            at += f" (node index {index})"
        super().__init__(message + at)
        self.message = message
        self.coordinate = coordinate
        self.index = index


class InvalidExtentError(SpectraError):
    """Grid constructed with b <= a or too few nodes."""

    code = "invalid-extent"


class GridMismatchError(SpectraError):
    """Two grid functions living on different grids were combined."""

    code = "grid-mismatch"


class ZeroFunctionError(SpectraError):
    """Normalization of the zero function requested."""

    code = "zero-function"


class DimensionMismatchError(SpectraError):
    """Matrix/vector dimensions disagree."""

    code = "dimension-mismatch"


class NonConvergenceError(SpectraError):
    """An iterative solver ran out of its iteration budget.

    ``detail`` carries solver-specific context (e.g. which subdiagonal
    of the QR iteration failed to deflate).
    """

    code = "non-convergence"

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


class NoClosedFormError(SpectraError):
    """Catalog entry has no exact energies/wavefunctions."""

    code = "no-closed-form"


class UnknownEntryError(SpectraError):
    """Catalog id not present in the registry."""

    code = "unknown-entry"


class ParameterError(SpectraError):
    """Catalog or solver parameter outside its valid range."""

    code = "parameter-error"


class ConfigError(SpectraError):
    """Run configuration failed validation; ``field`` names the culprit."""

    code = "config-error"

    def __init__(self, message: str, field: str | None = None):
        prefix = f"{field}: " if field else ""
        super().__init__(prefix + message)
        self.field = field
