"""Tests for kinematics."""

import numpy as np
import pytest

import kinematics
from kinematics import (
    GaugeParameterSet,
    HarmonicProfile,
    KinematicsError,
    ParameterFamily,
    VelocityFamily,
    VelocityField,
)
from lattice import Lattice, SlotKind

MATRIX = np.array(
    [
        [1.1, 0.2, 0.0, -0.1],
        [0.0, 0.9, 0.1, 0.0],
        [0.3, 0.0, 1.2, 0.0],
        [0.0, -0.2, 0.0, 0.8],
    ]
)


def trigonometric_velocity(box: float = 2.0) -> VelocityField:
    """xdot = M x + 0.2 sin(2 pi x_1 / box + phi) on every component."""
    wavevector = np.zeros((4, 4))
    wavevector[:, 0] = 2 * np.pi / box
    return VelocityField.trigonometric(
        amplitude=np.full(4, 0.2), wavevector=wavevector, phase=np.array([0.0, 0.5, 1.0, 1.5]), matrix=MATRIX
    )


def test_affine_lambda_is_the_matrix(lattice: Lattice) -> None:
    """Test that lambda of an affine field is its matrix at every site."""
    velocity = VelocityField.affine(MATRIX, np.array([1.0, 0, 0, -1.0]))
    lam = kinematics.lambda_analytic(velocity, lattice)
    assert lam.values.shape == (4, 4) + lattice.extents
    np.testing.assert_array_equal(lam.values[..., 2, 5, 1, 7], MATRIX)


def test_affine_lambda_numeric_is_exact(lattice: Lattice) -> None:
    """Test that the stencil reproduces an affine lambda without wrap errors."""
    velocity = VelocityField.affine(MATRIX, np.array([1.0, 0, 0, -1.0]))
    assert np.max(kinematics.lambda_error(velocity, lattice)) <= 1e-13


def test_identity_velocity() -> None:
    """Test lambda = identity and det = 1 for xdot = x."""
    grid = Lattice((4, 4, 4, 4), 0.5)
    lam = kinematics.lambda_analytic(VelocityField.identity(), grid)
    np.testing.assert_array_equal(lam.values[..., 0, 0, 0, 0], np.eye(4))
    np.testing.assert_allclose(kinematics.lambda_determinant(lam).values, 1.0)
    assert kinematics.lambda_determinant(lam).kind is SlotKind.SCALAR
    assert np.all(kinematics.lambda_gradient(lam) == 0)


def test_constant_velocity_has_zero_lambda() -> None:
    """Test that xdot = b gives lambda = 0."""
    grid = Lattice((4, 4, 4, 4), 0.5)
    lam = kinematics.lambda_analytic(VelocityField.constant(np.ones(4)), grid)
    assert np.all(lam.values == 0)


def test_require_nonzero() -> None:
    """Test that a vanishing component is reported in the nonzero regime."""
    grid = Lattice((4, 4, 4, 4), 0.5)
    with pytest.raises(KinematicsError, match="vanishes"):
        kinematics.lambda_analytic(VelocityField.identity(), grid, require_nonzero=True)
    dense = VelocityField.affine(np.ones((4, 4)) + np.eye(4))
    kinematics.lambda_analytic(dense, grid, require_nonzero=True)


def test_trigonometric_lambda_convergence() -> None:
    """Test the second-order error ratio of the numeric lambda."""
    velocity = trigonometric_velocity()
    coarse = np.max(kinematics.lambda_error(velocity, Lattice((8, 8, 8, 8), 0.25)))
    fine = np.max(kinematics.lambda_error(velocity, Lattice((16, 16, 16, 16), 0.125)))
    assert coarse > 1e-6
    assert 3.6 <= coarse / fine <= 4.4


def test_polynomial_lambda_convergence() -> None:
    """Test that the cubic term gives an error ratio of four and the quadratic one none."""
    cubic = np.zeros((4, 4))
    cubic[1, 2] = 0.1
    velocity = VelocityField.polynomial(quadratic=0.05 * np.eye(4), cubic=cubic, matrix=MATRIX)
    coarse = np.max(kinematics.lambda_error(velocity, Lattice((8, 8, 8, 8), 0.25)))
    fine = np.max(kinematics.lambda_error(velocity, Lattice((16, 16, 16, 16), 0.125)))
    assert coarse / fine == pytest.approx(4.0, rel=1e-6)


def test_polynomial_jacobian() -> None:
    """Test the analytic Jacobian of the polynomial family at one point."""
    quadratic = np.zeros((4, 4))
    quadratic[0, 1] = 2.0
    velocity = VelocityField.polynomial(quadratic=quadratic, matrix=np.eye(4))
    x = np.array([0.0, 3.0, 0.0, 0.0])
    jacobian = velocity.jacobian(x.reshape(4, 1))[..., 0]
    expected = np.eye(4)
    expected[0, 1] += 2 * 2.0 * 3.0
    np.testing.assert_allclose(jacobian, expected)


def test_family_rejects_foreign_terms() -> None:
    """Test that families reject coefficients they do not carry."""
    profile = HarmonicProfile((4,), amplitude=np.ones(4), wavevector=np.ones((4, 4)))
    with pytest.raises(KinematicsError, match="harmonic"):
        VelocityField(VelocityFamily.AFFINE, profile)
    with pytest.raises(KinematicsError, match="polynomial"):
        VelocityField(VelocityFamily.AFFINE, HarmonicProfile((4,)), quadratic=np.eye(4))


def test_profile_shape_checks() -> None:
    """Test that coefficients must match the profile shape."""
    with pytest.raises(KinematicsError, match="offset"):
        HarmonicProfile((3,), offset=np.zeros(4))
    with pytest.raises(KinematicsError, match="4 components"):
        VelocityField(VelocityFamily.AFFINE, HarmonicProfile((3,)))


def test_profile_gradient_matches_difference_quotient(rng: np.random.Generator) -> None:
    """Test the analytic profile gradient against a central difference in u."""
    profile = HarmonicProfile.random(rng, (2, 4), (2.0, 2.0, 2.0, 2.0))
    u = rng.uniform(-1, 1, size=(4, 5))
    gradient = profile.gradient(u)
    assert gradient.shape == (2, 4, 4, 5)
    step = 1e-6
    for s in range(4):
        shift = np.zeros((4, 1))
        shift[s] = step
        numeric = (profile.value(u + shift) - profile.value(u - shift)) / (2 * step)
        np.testing.assert_allclose(gradient[:, :, s], numeric, atol=1e-7)


def test_random_profile_wavevectors_are_harmonics(rng: np.random.Generator) -> None:
    """Test that drawn wavevectors are nonzero multiples of 2 pi / box."""
    box = (2.0, 4.0, 2.0, 2.0)
    profile = HarmonicProfile.random(rng, (6,), box)
    harmonics = profile.wavevector * np.asarray(box) / (2 * np.pi)
    np.testing.assert_allclose(harmonics, np.round(harmonics), atol=1e-12)
    assert np.all(np.any(np.round(harmonics) != 0, axis=-1))


def test_gauge_parameter_families() -> None:
    """Test constant, linear and trigonometric parameter sets."""
    constant = GaugeParameterSet.constant(np.array([0.5, -1.0, 2.0]), epsilon=1e-3)
    assert constant.is_global
    assert constant.adjoint == 3
    u = np.zeros((4, 2))
    np.testing.assert_allclose(constant.value(u)[:, 0], [0.5e-3, -1e-3, 2e-3])
    assert np.all(constant.gradient(u) == 0)

    linear = GaugeParameterSet.linear(np.ones((3, 4)), epsilon=2.0)
    assert not linear.is_global
    np.testing.assert_allclose(linear.gradient(u)[:, :, 0], 2.0)
    assert linear.global_part().is_global
    assert linear.global_part().family is ParameterFamily.CONSTANT

    wave = GaugeParameterSet.trigonometric(np.ones(1), np.array([[1.0, 0, 0, 0]]))
    assert wave.with_amplitude(0.1).epsilon == 0.1
    assert wave.value(np.zeros((4, 1)))[0, 0] == pytest.approx(0.0)
    assert wave.gradient(np.zeros((4, 1)))[0, 0, 0] == pytest.approx(1.0)


def test_gauge_parameter_family_constraints() -> None:
    """Test that families reject terms they do not carry."""
    with pytest.raises(KinematicsError, match="constant family"):
        GaugeParameterSet(ParameterFamily.CONSTANT, HarmonicProfile((2,), linear=np.ones((2, 4))))
    with pytest.raises(KinematicsError, match="harmonic"):
        GaugeParameterSet(
            ParameterFamily.LINEAR, HarmonicProfile((2,), amplitude=np.ones(2), wavevector=np.ones((2, 4)))
        )
    with pytest.raises(KinematicsError, match="one adjoint index"):
        GaugeParameterSet(ParameterFamily.CONSTANT, HarmonicProfile((2, 4)))


def test_evaluate_parameters(lattice: Lattice) -> None:
    """Test that parameters are pulled back through xdot."""
    params = GaugeParameterSet.linear(np.array([[1.0, 0, 0, 0], [0, 0, 0, 1.0]]))
    velocity = VelocityField.identity(2.0)
    values, gradient = kinematics.evaluate_parameters(params, velocity, lattice)
    assert values.kind is SlotKind.ADJOINT
    assert gradient.kind is SlotKind.ADJOINT_VECTOR
    x = lattice.coordinates()
    np.testing.assert_allclose(values.values[0], 2.0 * x[0])
    np.testing.assert_allclose(values.values[1], 2.0 * x[3])
    np.testing.assert_allclose(gradient.values[1, 3], 1.0)
