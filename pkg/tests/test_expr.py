import cmath
import math

import numpy as np
import pytest

from spectra import (
    EvaluationSingularityError,
    ExprSyntaxError,
    PotentialSpec,
    UnboundSymbolError,
    UnknownFunctionError,
    analyze_symmetry,
    evaluate,
    evaluate_on_grid,
    make_grid,
    parameter_names,
    parse,
    to_source,
)
from spectra.expr import BinaryOp, Call, Constant, Neg, Parameter, Variable

NONPT_SOURCE = "x^2 + 2*k*x - 4*k/x + 2/x^2 + (-4*k*x + 10 - 4*i)/(x^2 - i)"


class TestParse:
    def test_imaginary_times_variable(self):
        tree = parse("i*x")
        assert tree == BinaryOp("*", Constant(1j), Variable("x"))

    def test_power_family_parses(self):
        tree = parse("x^2*(i*x)^eps")
        assert isinstance(tree, BinaryOp) and tree.op == "*"
        assert parameter_names(tree) == frozenset({"eps"})

    def test_syntax_error_carries_offset(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("2+*3")
        assert err.value.offset == 2

    def test_unbalanced_parentheses(self):
        with pytest.raises(ExprSyntaxError):
            parse("(x+1")

    def test_unknown_function(self):
        with pytest.raises(UnknownFunctionError):
            parse("foo(x)")

    def test_power_binds_tighter_than_unary_minus(self):
        assert evaluate(parse("-x^2"), {}, 2.0) == -4.0
        assert evaluate(parse("x^-2"), {}, 2.0) == 0.25
        assert evaluate(parse("(-x)^2"), {}, 2.0) == 4.0

    def test_power_right_associative(self):
        assert evaluate(parse("2^3^2"), {}, 0.0) == 512.0

    def test_function_call_and_precedence(self):
        value = evaluate(parse("2+3*4^2"), {}, 0.0)
        assert value == 50.0


class TestEvaluate:
    def test_complex_square(self):
        value = evaluate(parse("(x - i*0.5)^2"), {}, 1.0)
        assert value == pytest.approx(0.75 - 1.0j, abs=1e-15)

    def test_cot(self):
        value = evaluate(parse("cot(2*x)"), {}, math.pi / 8)
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_integer_power_in_family(self):
        value = evaluate(parse("x^2*(i*x)^eps"), {"eps": 1.0}, 2.0)
        assert value == pytest.approx(8j, abs=1e-13)

    def test_principal_branch(self):
        # (i x)^eps on x > 0 equals |x|^eps exp(i eps pi / 2)
        tree = parse("(i*x)^eps")
        for eps in (0.25, 0.5, 1.3, 1.9):
            for x in (0.5, 1.0, 3.7):
                expected = x**eps * cmath.exp(1j * eps * math.pi / 2)
                assert evaluate(tree, {"eps": eps}, x) == pytest.approx(
                    expected, abs=1e-12 * max(1.0, abs(expected))
                )

    def test_integer_power_keeps_reals_exact(self):
        assert evaluate(parse("x^2"), {}, -3.0).imag == 0.0
        assert evaluate(parse("(0-2)^3"), {}, 0.0) == -8.0

    def test_division_by_zero_is_singularity(self):
        with pytest.raises(EvaluationSingularityError) as err:
            evaluate(parse("1/x"), {}, 0.0)
        assert err.value.coordinate == 0.0

    def test_cot_singularity_at_origin(self):
        with pytest.raises(EvaluationSingularityError):
            evaluate(parse("cot(x)"), {}, 0.0)

    def test_log_of_zero_is_singularity(self):
        with pytest.raises(EvaluationSingularityError):
            evaluate(parse("log(x)"), {}, 0.0)

    def test_unbound_parameter(self):
        with pytest.raises(UnboundSymbolError):
            evaluate(parse("a*x"), {}, 1.0)


class TestEvaluateOnGrid:
    def test_zero_potential(self):
        grid = make_grid(-3.0, 3.0, 11)
        U = evaluate_on_grid(PotentialSpec(parse("0"), {}), grid)
        assert np.all(U.values == 0)

    def test_square_on_three_nodes(self):
        grid = make_grid(-2.0, 2.0, 3)
        U = evaluate_on_grid(PotentialSpec(parse("x^2"), {}), grid)
        assert np.allclose(U.values, [1.0, 0.0, 1.0])

    def test_singular_node_reports_index(self):
        grid = make_grid(-2.0, 2.0, 3)  # nodes -1, 0, 1
        spec = PotentialSpec(parse(NONPT_SOURCE), {"k": 1.0})
        with pytest.raises(EvaluationSingularityError) as err:
            evaluate_on_grid(spec, grid)
        assert err.value.index == 1
        assert err.value.coordinate == 0.0


class TestSymmetry:
    def probe(self, n=401):
        return make_grid(-6.0, 6.0, n)

    def test_real_even_potential(self):
        report = analyze_symmetry(PotentialSpec(parse("x^2"), {}), self.probe(), 1e-10)
        assert report.is_hermitian and report.is_pt_symmetric and report.imag_part_odd

    def test_imaginary_linear(self):
        report = analyze_symmetry(PotentialSpec(parse("i*x"), {}), self.probe(), 1e-10)
        assert not report.is_hermitian
        assert report.is_pt_symmetric
        assert report.imag_part_odd

    def test_neither_hermitian_nor_pt(self):
        spec = PotentialSpec(parse(NONPT_SOURCE), {"k": 1.0})
        report = analyze_symmetry(spec, self.probe(), 1e-9)
        assert not report.is_hermitian
        assert not report.is_pt_symmetric
        # singular probe at x = 0 is skipped, not interpolated
        assert report.skipped_probes == 1

    def test_hermitian_implies_odd_imaginary(self):
        report = analyze_symmetry(PotentialSpec(parse("cos(x)"), {}), self.probe(), 1e-10)
        assert report.is_hermitian and report.imag_part_odd

    def test_requires_symmetric_probe(self):
        with pytest.raises(ValueError):
            analyze_symmetry(PotentialSpec(parse("x"), {}), make_grid(0.0, 1.0, 5), 1e-9)

    def test_too_many_singular_probes(self):
        spec = PotentialSpec(parse("1/sin(3.14159265358979*x)"), {})
        # integer nodes all land near multiples of pi in the sine argument
        probe = make_grid(-5.0, 5.0, 9)
        with pytest.raises(EvaluationSingularityError):
            analyze_symmetry(spec, probe, 1e-9)


class _TreeGenerator:
    """Random bounded expression trees for the round-trip property."""

    def __init__(self, seed: int):
        self.rng = np.random.default_rng(seed)

    def constant(self):
        if self.rng.random() < 0.2:
            return Constant(1j)
        return Constant(complex(round(float(self.rng.uniform(0, 4)), 3)))

    def tree(self, depth: int):
        if depth == 0:
            choice = self.rng.random()
            if choice < 0.4:
                return self.constant()
            if choice < 0.7:
                return Variable("x")
            return Parameter(self.rng.choice(["a", "b", "c"]))
        kind = self.rng.random()
        if kind < 0.12:
            return Neg(self.tree(depth - 1))
        if kind < 0.3:
            func = self.rng.choice(["sin", "cos", "exp", "sqrt", "abs"])
            return Call(str(func), self.tree(depth - 1))
        op = self.rng.choice(["+", "-", "*", "/", "^"])
        left = self.tree(depth - 1)
        right = self.tree(depth - 1)
        if op == "^":
            # keep exponents small constants so magnitudes stay sane
            right = Constant(complex(int(self.rng.integers(0, 3))))
        return BinaryOp(str(op), left, right)


def test_round_trip_preserves_evaluation():
    gen = _TreeGenerator(seed=42)
    bindings = {"a": 0.7, "b": -1.3, "c": 2.1}
    points = np.linspace(-3.0, 3.0, 25)
    checked = 0
    for _ in range(60):
        tree = gen.tree(depth=3)
        reparsed = parse(to_source(tree))
        for x in points:
            try:
                expected = evaluate(tree, bindings, float(x))
            except EvaluationSingularityError:
                with pytest.raises(EvaluationSingularityError):
                    evaluate(reparsed, bindings, float(x))
                continue
            value = evaluate(reparsed, bindings, float(x))
            assert abs(value - expected) <= 1e-12 * max(1.0, abs(expected))
            checked += 1
    assert checked >= 100


def test_round_trip_on_catalog_sources():
    from spectra import list_entries

    for entry in list_entries():
        tree = parse(entry.source)
        assert parse(to_source(tree)) is not None
        # structural identity: printing is parenthesized to preserve the tree
        assert parse(to_source(tree)) == tree
