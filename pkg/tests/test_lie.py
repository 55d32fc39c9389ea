"""Tests for lie_algebra."""

import json
from pathlib import Path

import numpy as np
import pytest

import lie_algebra
from lie_algebra import LieAlgebra, LieAlgebraError

hypothesis = pytest.importorskip("hypothesis")
st = pytest.importorskip("hypothesis.strategies")


def test_su2_structure_constants_are_levi_civita() -> None:
    """Test that su2 reproduces C^g_ab = epsilon_abg."""
    algebra = lie_algebra.builtin_algebra("su2")
    expected = np.zeros((3, 3, 3))
    for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        expected[c, a, b] = 1
        expected[c, b, a] = -1
    np.testing.assert_allclose(algebra.structure_constants, expected, atol=1e-12)
    assert algebra.N == 3
    assert algebra.n == 2
    assert not algebra.abelian


def test_su3_known_constants() -> None:
    """Test f_123 = 1 and f_458 = sqrt(3)/2 for the Gell-Mann basis."""
    algebra = lie_algebra.builtin_algebra("su3")
    c = algebra.structure_constants
    assert algebra.N == 8
    assert c[2, 0, 1] == pytest.approx(1.0, abs=1e-12)
    assert c[7, 3, 4] == pytest.approx(np.sqrt(3) / 2, abs=1e-12)
    assert c[6, 0, 3] == pytest.approx(0.5, abs=1e-12)
    assert c[5, 0, 4] == pytest.approx(-0.5, abs=1e-12)


def test_u1_is_abelian() -> None:
    """Test the single u1 generator and its vanishing constants."""
    algebra = lie_algebra.builtin_algebra("u1")
    assert algebra.abelian
    assert algebra.N == 1 and algebra.n == 1
    assert np.trace(algebra.generators[0] @ algebra.generators[0]).real == pytest.approx(0.5)


@pytest.mark.parametrize("name", ["u1", "su2", "su3"])
def test_builtin_residuals(name: str) -> None:
    """Test closure, Jacobi and antisymmetry of every built-in algebra."""
    algebra = lie_algebra.builtin_algebra(name)
    assert lie_algebra.closure_residual(algebra.generators, algebra.structure_constants) <= 1e-12
    assert lie_algebra.verify_jacobi(algebra) <= 1e-12
    assert lie_algebra.antisymmetry_residual(algebra) <= 1e-12


def test_jacobi_table_shape() -> None:
    """Test that the Jacobi table covers every index tuple."""
    table = lie_algebra.jacobi_table(lie_algebra.builtin_algebra("su3"))
    assert table.shape == (8, 8, 8, 8)
    assert np.max(np.abs(table)) <= 1e-12


def test_commutator() -> None:
    """Test the commutator of two Pauli matrices."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    np.testing.assert_allclose(lie_algebra.commutator(x, y), 2j * z)


def test_extract_structure_constants_from_pauli() -> None:
    """Test that half Pauli matrices give the Levi-Civita symbol and u1 gives zero."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    c = lie_algebra.extract_structure_constants(np.stack([x, y, z]) / 2)
    assert c[2, 0, 1] == pytest.approx(1.0)
    assert c[2, 1, 0] == pytest.approx(-1.0)
    np.testing.assert_array_equal(c, -np.swapaxes(c, 1, 2))
    u1 = lie_algebra.extract_structure_constants(np.array([[[np.sqrt(0.5)]]]))
    assert np.all(u1 == 0)


@pytest.mark.parametrize("name", ["su2", "su3"])
def test_structure_constants_are_reproducible(name: str) -> None:
    """Test that extracting twice from the same generators gives identical arrays."""
    generators = lie_algebra.builtin_algebra(name).generators
    first = lie_algebra.extract_structure_constants(generators)
    second = lie_algebra.extract_structure_constants(generators)
    assert np.array_equal(first, second)


def test_commutator_shape_mismatch() -> None:
    """Test that non-square inputs are rejected."""
    with pytest.raises(LieAlgebraError):
        lie_algebra.commutator(np.eye(2), np.eye(3))


def test_non_hermitian_generator() -> None:
    """Test that a non-Hermitian generator is rejected."""
    generators = np.array([[[0, 1], [0, 0]]], dtype=complex)
    with pytest.raises(LieAlgebraError, match="not Hermitian"):
        LieAlgebra.from_generators("bad", generators)


def test_non_orthogonal_generators() -> None:
    """Test that generators without the trace normalisation are rejected."""
    generators = np.array([[[1, 0], [0, -1]], [[1, 0], [0, -1]]], dtype=complex) / 2
    with pytest.raises(LieAlgebraError, match="trace-orthogonal"):
        LieAlgebra.from_generators("twice", generators)


def test_wrong_structure_constants() -> None:
    """Test that constants not closing the commutators are rejected."""
    generators = lie_algebra.builtin_algebra("su2").generators
    with pytest.raises(LieAlgebraError, match="not closed"):
        LieAlgebra("su2", generators, structure_constants=np.zeros((3, 3, 3)))


def test_unknown_builtin() -> None:
    """Test that an unsupported name is rejected."""
    with pytest.raises(LieAlgebraError, match="so3"):
        lie_algebra.builtin_algebra("so3")


def test_load_generators(tmp_path: Path) -> None:
    """Test that a custom su2 file reproduces the built-in constants."""
    pauli = lie_algebra.builtin_algebra("su2").generators
    payload = {
        "name": "custom",
        "generators": [[[z.real, z.imag] for z in g.ravel()] for g in pauli],
    }
    file_path = tmp_path / "su2.json"
    file_path.write_text(json.dumps(payload), encoding="utf8")
    algebra = lie_algebra.load_generators(file_path)
    assert algebra.name == "custom"
    np.testing.assert_allclose(
        algebra.structure_constants, lie_algebra.builtin_algebra("su2").structure_constants
    )


def test_load_generators_malformed(tmp_path: Path) -> None:
    """Test that a file without a square number of entries is rejected."""
    file_path = tmp_path / "bad.json"
    file_path.write_text(json.dumps({"generators": [[[1, 0], [0, 0], [0, 0]]]}), encoding="utf8")
    with pytest.raises(LieAlgebraError, match="square"):
        lie_algebra.load_generators(file_path)


@hypothesis.given(
    st.sampled_from(["su2", "su3"]),
    st.lists(st.floats(-1, 1), min_size=3, max_size=3),
)
def test_commutator_stays_in_algebra(name: str, weights: list[float]) -> None:
    """Test [w_a T_a, T_0] = i w_a C^g_a0 T_g for arbitrary weights."""
    algebra = lie_algebra.builtin_algebra(name)
    w = np.resize(np.asarray(weights), algebra.N)
    x = np.einsum("a,aij->ij", w, algebra.generators)
    bracket = lie_algebra.commutator(x, algebra.generators[0])
    components = np.einsum("ij,gji->g", bracket, algebra.generators) / 0.5
    expected = 1j * algebra.structure_constants[:, :, 0] @ w
    np.testing.assert_allclose(components, expected, atol=1e-12)
