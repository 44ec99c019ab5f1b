import numpy as np
import pytest

from spectra import (
    DIRICHLET,
    ComplexMatrix,
    GridFunction,
    GridMismatchError,
    InvalidExtentError,
    PotentialSpec,
    ZeroFunctionError,
    assemble_1d,
    assemble_radial,
    bloch,
    evaluate_on_grid,
    export_matrix_csv,
    inner_product,
    make_grid,
    normalize,
    parse,
)


def zero_potential(grid):
    return GridFunction(grid, np.zeros(grid.n, dtype=complex))


class TestMakeGrid:
    def test_simple(self):
        grid = make_grid(0.0, 4.0, 3)
        assert grid.h == 1.0
        assert np.allclose(grid.nodes, [1.0, 2.0, 3.0])

    def test_symmetric_with_zero_node(self):
        grid = make_grid(-8.0, 8.0, 1599)
        assert grid.h == pytest.approx(0.01)
        assert grid.symmetric
        assert grid.nodes[799] == pytest.approx(0.0, abs=1e-14)

    def test_radial_style_excludes_origin(self):
        grid = make_grid(0.0, 10.0, 999)
        assert grid.h == pytest.approx(0.01)
        assert grid.nodes.min() == pytest.approx(0.01)

    def test_invalid_extent(self):
        with pytest.raises(InvalidExtentError):
            make_grid(1.0, 1.0, 10)
        with pytest.raises(InvalidExtentError):
            make_grid(0.0, 1.0, 1)

    def test_nodes_mirror_in_pairs(self):
        grid = make_grid(-5.0, 5.0, 10)  # even count: no zero node
        assert np.allclose(grid.nodes, -grid.nodes[::-1])
        assert not np.any(grid.nodes == 0.0)


class TestAssemble1d:
    def test_free_laplacian_matrix_and_spectrum(self):
        H = assemble_1d(zero_potential(make_grid(0.0, 4.0, 3)))
        expected = np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], dtype=complex)
        assert np.array_equal(H.data, expected)
        eigs = np.sort(np.linalg.eigvalsh(H.data.real))
        assert np.allclose(eigs, [2 - np.sqrt(2), 2.0, 2 + np.sqrt(2)])

    def test_fd_laplacian_dispersion(self):
        grid = make_grid(0.0, 1.0, 40)
        H = assemble_1d(zero_potential(grid))
        j = np.arange(1, 41)
        exact = (2.0 / grid.h**2) * (1.0 - np.cos(j * np.pi / 41))
        eigs = np.sort(np.linalg.eigvalsh(H.data.real))
        assert np.allclose(eigs, np.sort(exact), rtol=1e-10)

    def test_bloch_zero_phase_is_circulant(self):
        grid = make_grid(0.0, 5.0, 4)  # h = 1
        H = assemble_1d(zero_potential(grid), bloch(0.0))
        assert H.structure == "tridiagonal-plus-corners"
        eigs = np.sort(np.linalg.eigvals(H.data).real)
        assert np.allclose(eigs, [0.0, 2.0, 2.0, 4.0], atol=1e-12)

    def test_bloch_phase_dispersion(self):
        grid = make_grid(0.0, 2.0, 16)
        theta = 0.7
        H = assemble_1d(zero_potential(grid), bloch(theta))
        n, h = grid.n, grid.h
        m = np.arange(n)
        exact = (2.0 / h**2) * (1.0 - np.cos((theta + 2 * np.pi * m) / n))
        eigs = np.linalg.eigvals(H.data)
        assert np.max(np.abs(np.sort(eigs.real) - np.sort(exact))) < 1e-9
        assert np.max(np.abs(eigs.imag)) < 1e-9  # Hermitian wrap for real U

    def test_real_potential_gives_real_symmetric_matrix(self):
        grid = make_grid(-4.0, 4.0, 25)
        U = evaluate_on_grid(PotentialSpec(parse("x^2 + cos(x)"), {}), grid)
        H = assemble_1d(U)
        assert np.array_equal(H.data, H.data.T)
        assert np.all(H.data.imag == 0.0)

    def test_structure_tag_is_truthful(self):
        grid = make_grid(0.0, 4.0, 3)
        H = assemble_1d(zero_potential(grid))
        assert H.structure == "tridiagonal"
        with pytest.raises(ValueError):
            ComplexMatrix(np.ones((3, 3)), "tridiagonal")


class TestAssembleRadial:
    def test_zero_potential_matches_1d(self):
        grid = make_grid(0.0, 10.0, 50)
        radial = assemble_radial(zero_potential(grid), l=0)
        flat = assemble_1d(zero_potential(grid))
        assert np.array_equal(radial.data, flat.data)

    def test_radial_oscillator_ground_state(self):
        grid = make_grid(0.0, 10.0, 1000)
        V = evaluate_on_grid(PotentialSpec(parse("r^2"), {}, coordinate="r"), grid)
        H = assemble_radial(V, l=0)
        lowest = np.linalg.eigvalsh(H.data.real).min()
        assert lowest == pytest.approx(3.0, abs=1e-2)

    def test_centrifugal_term_on_diagonal(self):
        grid = make_grid(0.0, 1.5, 2)  # h = 0.5, nodes 0.5 and 1.0
        H = assemble_radial(zero_potential(grid), l=1)
        assert H.data[0, 0] == pytest.approx(2.0 / 0.25 + 2.0 / 0.25)
        assert H.data[1, 1] == pytest.approx(2.0 / 0.25 + 2.0 / 1.0)

    def test_requires_origin_anchored_grid(self):
        with pytest.raises(InvalidExtentError):
            assemble_radial(zero_potential(make_grid(1.0, 2.0, 5)), l=0)


class TestDiscreteTheoremIdentity:
    def test_imaginary_quadratic_form_identity(self):
        # Im(v* H v) = v* diag(Im U) v holds exactly for H = K + diag(U)
        rng = np.random.default_rng(3)
        grid = make_grid(-5.0, 5.0, 40)  # moderate h keeps rounding small
        U = evaluate_on_grid(
            PotentialSpec(parse("x^2 + i*(x + 0.3*x^3) + 2*i"), {}), grid
        )
        H = assemble_1d(U)
        for _ in range(20):
            v = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
            v /= np.linalg.norm(v)
            quad = np.vdot(v, H.data @ v)
            diag = np.vdot(v, U.values.imag * v)
            assert abs(quad.imag - diag.real) <= 1e-13


class TestQuadrature:
    def test_all_ones(self):
        grid = make_grid(0.0, 4.0, 3)
        f = GridFunction(grid, np.ones(3, dtype=complex))
        assert inner_product(f, f) == pytest.approx(3.0)

    def test_conjugation_side(self):
        grid = make_grid(0.0, 3.0, 2)  # h = 1
        f = GridFunction(grid, np.array([1.0, 1j]))
        g = GridFunction(grid, np.array([1j, 1.0]))
        assert inner_product(f, g) == pytest.approx(0.0, abs=1e-15)

    def test_eigenvector_orthogonality(self):
        grid = make_grid(0.0, 1.0, 30)
        H = assemble_1d(zero_potential(grid))
        _, vecs = np.linalg.eigh(H.data.real)
        f = GridFunction(grid, vecs[:, 0].astype(complex))
        g = GridFunction(grid, vecs[:, 5].astype(complex))
        assert abs(inner_product(f, g)) <= 1e-12

    def test_grid_mismatch(self):
        f = GridFunction(make_grid(0.0, 1.0, 4), np.ones(4, dtype=complex))
        g = GridFunction(make_grid(0.0, 2.0, 4), np.ones(4, dtype=complex))
        with pytest.raises(GridMismatchError):
            inner_product(f, g)


class TestNormalize:
    def test_simple_scaling(self):
        grid = make_grid(0.0, 4.0, 3)
        f = GridFunction(grid, np.array([2.0, 0.0, 0.0], dtype=complex))
        out = normalize(f)
        assert np.allclose(out.values, [1.0, 0.0, 0.0])
        assert inner_product(out, out) == pytest.approx(1.0)

    def test_phase_alignment(self):
        grid = make_grid(0.0, 3.0, 2)
        f = GridFunction(grid, np.array([1j, 0.0]))
        out = normalize(f)
        assert out.values[0] == pytest.approx(1.0)

    def test_zero_function(self):
        grid = make_grid(0.0, 3.0, 2)
        with pytest.raises(ZeroFunctionError):
            normalize(GridFunction(grid, np.zeros(2, dtype=complex)))


def test_matrix_csv_export(tmp_path):
    grid = make_grid(0.0, 4.0, 3)
    H = assemble_1d(zero_potential(grid))
    path = tmp_path / "matrix.csv"
    export_matrix_csv(H, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "row,col,re,im"
    assert len(lines) == 1 + 7  # tridiagonal 3x3 has 7 nonzeros
    row, col, re, im = lines[1].split(",")
    assert (int(row), int(col)) == (0, 0)
    assert float(re) == 2.0 and float(im) == 0.0


def test_convergence_order_against_exact_energy():
    # second-order scheme: halving h divides the closed-form energy error
    # by about four (radial family, exact value 3 + 2l + alpha^2)
    from spectra import SolverOptions, inverse_iteration, validate_entry

    errors = []
    for n in (500, 1001, 2003):
        grid = make_grid(0.0, 10.0, n)
        report = validate_entry("imag_coulomb", {"alpha": 0.5}, {"l": 0}, grid=grid)
        errors.append(report.energy_error)
    ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
    for ratio in ratios:
        assert 3.6 <= ratio <= 4.4
