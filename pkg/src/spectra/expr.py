"""Complex-valued potential expressions: parsing, evaluation, symmetry.

The grammar is a small calculator language over one coordinate symbol
(``x`` or ``r``), named real parameters, and the imaginary unit ``i``::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | base ("^" factor)?
    base   := number | "i" | ident | ident "(" expr ")" | "(" expr ")"

``^`` is right-associative and binds tighter than unary minus, so
``-x^2`` means ``-(x^2)`` and ``x^-2`` means ``x^(-2)``.  Powers with an
integer exponent are computed by repeated multiplication (exact for real
inputs); non-integer exponents use the principal branch of the complex
logarithm.  Parsed trees are immutable and evaluation is pure, so trees
may be shared freely between threads.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import (
    EvaluationSingularityError,
    ExprSyntaxError,
    UnboundSymbolError,
    UnknownFunctionError,
)
from .grids import Grid, GridFunction

__all__ = [
    "ExprNode",
    "Constant",
    "Variable",
    "Parameter",
    "Neg",
    "BinaryOp",
    "Call",
    "PotentialSpec",
    "SymmetryReport",
    "parse",
    "evaluate",
    "evaluate_on_grid",
    "analyze_symmetry",
    "parameter_names",
    "to_source",
]

COORDINATE_SYMBOLS = ("x", "r")

_INT_EXPONENT_LIMIT = 4096  # beyond this, fall back to the principal branch


def _cot(z: complex) -> complex:
    return cmath.cos(z) / cmath.sin(z)


FUNCTIONS: dict[str, Callable[[complex], complex]] = {
    "sin": cmath.sin,
    "cos": cmath.cos,
    "tan": cmath.tan,
    "cot": _cot,
    "exp": cmath.exp,
    "log": cmath.log,
    "sqrt": cmath.sqrt,
    "abs": lambda z: complex(abs(z)),
}


# --------------------------------------------------------------------------
# Expression tree
# --------------------------------------------------------------------------

class ExprNode:
    """Base class for expression tree nodes (immutable)."""

    __slots__ = ()


@dataclass(frozen=True)
class Constant(ExprNode):
    value: complex


@dataclass(frozen=True)
class Variable(ExprNode):
    """The coordinate symbol, one of ``x`` or ``r``."""

    name: str


@dataclass(frozen=True)
class Parameter(ExprNode):
    """Named real parameter, resolved through the binding table."""

    name: str


@dataclass(frozen=True)
class Neg(ExprNode):
    operand: ExprNode


@dataclass(frozen=True)
class BinaryOp(ExprNode):
    op: str  # one of  + - * / ^
    left: ExprNode
    right: ExprNode


@dataclass(frozen=True)
class Call(ExprNode):
    func: str
    argument: ExprNode


@dataclass(frozen=True)
class PotentialSpec:
    """An expression plus its parameter bindings and coordinate kind.

    Real and imaginary parts of the potential are always derived from
    ``expression`` at evaluation time, never stored separately.
    """

    expression: ExprNode
    bindings: Mapping[str, float] = field(default_factory=dict)
    coordinate: str = "x"

    def __post_init__(self):
        if self.coordinate not in COORDINATE_SYMBOLS:
            raise ValueError(f"coordinate must be one of {COORDINATE_SYMBOLS}")

    def __call__(self, coord: float) -> complex:
        return evaluate(self.expression, self.bindings, coord, self.coordinate)

    def with_bindings(self, **updates: float) -> "PotentialSpec":
        merged = dict(self.bindings)
        merged.update(updates)
        return PotentialSpec(self.expression, merged, self.coordinate)


@dataclass(frozen=True)
class SymmetryReport:
    """Sampled symmetry classification of a potential.

    ``is_hermitian`` implies ``imag_part_odd`` (the zero function is odd);
    the implication is enforced rather than left to tolerance accidents.
    """

    is_hermitian: bool
    is_pt_symmetric: bool
    imag_part_odd: bool
    hermitian_deviation: float
    pt_deviation: float
    odd_imag_deviation: float
    skipped_probes: int = 0


# --------------------------------------------------------------------------
# Lexer / parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            # skip leading whitespace before reporting the offending byte
            stripped = pos + len(source[pos:]) - len(source[pos:].lstrip())
            if stripped >= len(source):
                break
            raise ExprSyntaxError(
                f"unexpected character {source[stripped]!r}", stripped
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, symbol: str):
        kind, text, offset = self.peek()
        if kind != "op" or text != symbol:
            raise ExprSyntaxError(f"expected {symbol!r}", offset)
        return self.advance()

    def parse(self) -> ExprNode:
        node = self.expr()
        kind, text, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {text!r}", offset)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinaryOp(text, node, self.term())
            else:
                return node

    def term(self) -> ExprNode:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinaryOp(text, node, self.factor())
            else:
                return node

    def factor(self) -> ExprNode:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.factor())
        node = self.base()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return BinaryOp("^", node, self.factor())
        return node

    def base(self) -> ExprNode:
        kind, text, offset = self.advance()
        if kind == "number":
            return Constant(complex(float(text)))
        if kind == "ident":
            nk, nt, _ = self.peek()
            if nk == "op" and nt == "(":
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(text, offset)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text == "i":
                return Constant(1j)
            if text in COORDINATE_SYMBOLS:
                return Variable(text)
            return Parameter(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected token {text!r}", offset)


def parse(source: str) -> ExprNode:
    """Parse expression source into an immutable tree.

    Raises :class:`ExprSyntaxError` (with byte offset) on malformed
    input and :class:`UnknownFunctionError` on unsupported calls.
    """
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _pow(base: complex, exponent: complex, coord: float) -> complex:
    er, ei = exponent.real, exponent.imag
    if ei == 0.0 and er == round(er) and abs(er) <= _INT_EXPONENT_LIMIT:
        k = int(round(er))
        if k < 0:
            if base == 0:
                raise EvaluationSingularityError("0 raised to negative power", coord)
            return 1.0 / _int_pow(base, -k)
        return _int_pow(base, k)
    if base == 0:
        raise EvaluationSingularityError("0 raised to non-integer power", coord)
    return cmath.exp(exponent * cmath.log(base))


def _int_pow(base: complex, k: int) -> complex:
    result = complex(1.0)
    while k:
        if k & 1:
            result *= base
        base *= base
        k >>= 1
    return result


def _eval(node: ExprNode, env: Mapping[str, complex], coord: float) -> complex:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, (Variable, Parameter)):
        try:
            return env[node.name]
        except KeyError:
            raise UnboundSymbolError(node.name) from None
    if isinstance(node, Neg):
        return -_eval(node.operand, env, coord)
    if isinstance(node, BinaryOp):
        left = _eval(node.left, env, coord)
        right = _eval(node.right, env, coord)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if right == 0:
                raise EvaluationSingularityError("division by zero", coord)
            return left / right
        return _pow(left, right, coord)
    if isinstance(node, Call):
        arg = _eval(node.argument, env, coord)
        try:
            value = FUNCTIONS[node.func](arg)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise EvaluationSingularityError(
                f"{node.func} singular ({exc})", coord
            ) from None
        return value
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(
    node: ExprNode,
    bindings: Mapping[str, float],
    coord: float,
    coordinate: str = "x",
) -> complex:
    """Evaluate ``node`` at a real coordinate with all parameters bound.

    Division by zero, singular function arguments, and non-finite results
    raise :class:`EvaluationSingularityError` tagged with the coordinate.
    """
    env: dict[str, complex] = {name: complex(v) for name, v in bindings.items()}
    env[coordinate] = complex(coord)
    try:
        value = _eval(node, env, coord)
    except ZeroDivisionError:
        raise EvaluationSingularityError("division by zero", coord) from None
    if not (cmath.isfinite(value)):
        raise EvaluationSingularityError("non-finite result", coord)
    return value


def evaluate_on_grid(spec: PotentialSpec, grid: Grid) -> GridFunction:
    """Pointwise evaluation of a potential on every grid node."""
    values = np.empty(grid.n, dtype=np.complex128)
    for j, coord in enumerate(grid.nodes):
        try:
            values[j] = evaluate(
                spec.expression, spec.bindings, float(coord), spec.coordinate
            )
        except EvaluationSingularityError as exc:
            raise EvaluationSingularityError(
                exc.message, float(coord), index=j
            ) from None
    return GridFunction(grid, values)


def parameter_names(node: ExprNode) -> frozenset[str]:
    """Names of all free parameters appearing in a tree."""
    names: set[str] = set()
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, Parameter):
            names.add(current.name)
        elif isinstance(current, Neg):
            stack.append(current.operand)
        elif isinstance(current, BinaryOp):
            stack.append(current.left)
            stack.append(current.right)
        elif isinstance(current, Call):
            stack.append(current.argument)
    return frozenset(names)


# --------------------------------------------------------------------------
# Symmetry analysis
# --------------------------------------------------------------------------

def analyze_symmetry(spec: PotentialSpec, probe: Grid, tol: float) -> SymmetryReport:
    """Classify a potential by sampling it on a symmetric probe grid.

    Checks, each as a max deviation over non-singular probe pairs:

    * Hermitian:        ``|Im U(x)|``
    * PT-symmetric:     ``|conj(U(-x)) - U(x)|``
    * odd imaginary:    ``|Im U(-x) + Im U(x)|``

    Singular probe points are skipped (never interpolated); more than 10%
    singular probes is an error.
    """
    if not probe.symmetric:
        raise ValueError("probe grid must be symmetric about 0")
    xs = probe.nodes
    half = [x for x in xs if x >= 0.0]

    herm_dev = 0.0
    pt_dev = 0.0
    odd_dev = 0.0
    skipped = 0
    probed = 0
    for x in half:
        try:
            u_plus = evaluate(spec.expression, spec.bindings, float(x), spec.coordinate)
            u_minus = evaluate(
                spec.expression, spec.bindings, float(-x), spec.coordinate
            )
        except EvaluationSingularityError:
            skipped += 1
            continue
        probed += 1
        herm_dev = max(herm_dev, abs(u_plus.imag), abs(u_minus.imag))
        pt_dev = max(pt_dev, abs(u_minus.conjugate() - u_plus))
        odd_dev = max(odd_dev, abs(u_minus.imag + u_plus.imag))

    if probed == 0 or skipped > 0.1 * (probed + skipped):
        raise EvaluationSingularityError(
            f"more than 10% of probes singular ({skipped} of {probed + skipped})",
            float(xs[0]),
        )

    is_hermitian = herm_dev <= tol
    return SymmetryReport(
        is_hermitian=is_hermitian,
        is_pt_symmetric=pt_dev <= tol,
        imag_part_odd=is_hermitian or odd_dev <= tol,
        hermitian_deviation=herm_dev,
        pt_deviation=pt_dev,
        odd_imag_deviation=odd_dev,
        skipped_probes=skipped,
    )


# --------------------------------------------------------------------------
# Pretty printing
# --------------------------------------------------------------------------

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(node: ExprNode) -> int:
    if isinstance(node, BinaryOp):
        if node.op in "+-":
            return _LEVEL_ADD
        if node.op in "*/":
            return _LEVEL_MUL
        return _LEVEL_POW
    if isinstance(node, Neg):
        return _LEVEL_NEG
    return _LEVEL_ATOM


def _fmt_complex(z: complex) -> str:
    if z == 1j:
        return "i"
    if z.imag == 0.0:
        r = z.real
        if r < 0:
            return f"(-{-r!r})"
        return repr(r)
    # general complex constants only arise from programmatic trees
    return f"({z.real!r}+{z.imag!r}*i)" if z.imag >= 0 else f"({z.real!r}-{-z.imag!r}*i)"


def to_source(node: ExprNode) -> str:
    """Render a tree back to parseable source (round-trip safe)."""
    if isinstance(node, Constant):
        return _fmt_complex(node.value)
    if isinstance(node, (Variable, Parameter)):
        return node.name
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        if _level(node.operand) < _LEVEL_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.argument)})"
    if isinstance(node, BinaryOp):
        lvl = _level(node)
        left = to_source(node.left)
        right = to_source(node.right)
        if node.op == "^":
            # '^' is right-associative and binds tighter than unary minus;
            # a bare '-' is allowed only at the start of the exponent.
            if _level(node.left) <= _LEVEL_POW:
                left = f"({left})"
            if _level(node.right) < _LEVEL_NEG:
                right = f"({right})"
            return f"{left}^{right}"
        if _level(node.left) < lvl:
            left = f"({left})"
        if _level(node.right) <= lvl:
            right = f"({right})"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")
