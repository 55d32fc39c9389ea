"""Velocity fields, the lambda tensor and velocity-space gauge parameters."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Self

import numpy as np

from lattice import DIMENSION, Lattice, LatticeField, SlotKind

logger = logging.getLogger(__name__)


class KinematicsError(ValueError):
    """Raised for inconsistent velocity or parameter families."""


def _coefficients(value: np.ndarray | None, shape: tuple[int, ...], name: str) -> np.ndarray:
    if value is None:
        array = np.zeros(shape)
    else:
        array = np.array(value, dtype=np.float64)
        if array.shape != shape:
            raise KinematicsError(
                f"Coefficient {name!r} needs shape {shape}, got {array.shape}."
            )
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class HarmonicProfile:
    """Closed-form components f_i(u) = c_i + W_i.u + a_i sin(k_i.u + phi_i).

    ``shape`` is the component layout; the coordinates u carry their four
    entries on the leading axis."""

    shape: tuple[int, ...]
    offset: np.ndarray | None = None
    linear: np.ndarray | None = None
    amplitude: np.ndarray | None = None
    wavevector: np.ndarray | None = None
    phase: np.ndarray | None = None

    def __post_init__(self) -> None:
        shape = tuple(self.shape)
        vector = shape + (DIMENSION,)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "offset", _coefficients(self.offset, shape, "offset"))
        object.__setattr__(self, "linear", _coefficients(self.linear, vector, "linear"))
        object.__setattr__(
            self, "amplitude", _coefficients(self.amplitude, shape, "amplitude")
        )
        object.__setattr__(
            self, "wavevector", _coefficients(self.wavevector, vector, "wavevector")
        )
        object.__setattr__(self, "phase", _coefficients(self.phase, shape, "phase"))

    @classmethod
    def random(
        cls,
        rng: np.random.Generator,
        shape: tuple[int, ...],
        box: tuple[float, ...],
        scale: float = 0.5,
        linear: bool = True,
        harmonic: bool = True,
    ) -> Self:
        """Draw a profile whose wavevectors are integer harmonics of ``box``."""
        shape = tuple(shape)
        vector = shape + (DIMENSION,)
        harmonics = rng.integers(-1, 2, size=vector)
        harmonics[np.all(harmonics == 0, axis=-1), 0] = 1
        return cls(
            shape,
            offset=rng.uniform(-scale, scale, size=shape),
            linear=rng.uniform(-scale, scale, size=vector) if linear else None,
            amplitude=rng.uniform(-scale, scale, size=shape) if harmonic else None,
            wavevector=2 * np.pi * harmonics / np.asarray(box) if harmonic else None,
            phase=rng.uniform(0, 2 * np.pi, size=shape) if harmonic else None,
        )

    @property
    def constant(self) -> bool:
        """Return whether the profile is independent of u."""
        return not np.any(self.linear) and not np.any(self.amplitude)

    def constant_part(self) -> Self:
        """Return the profile reduced to its offsets."""
        return type(self)(self.shape, offset=self.offset)

    def scaled(self, factor: float) -> Self:
        """Return factor * f."""
        return type(self)(
            self.shape,
            offset=factor * self.offset,
            linear=factor * self.linear,
            amplitude=factor * self.amplitude,
            wavevector=self.wavevector,
            phase=self.phase,
        )

    def _expand(self, coefficients: np.ndarray, u: np.ndarray) -> np.ndarray:
        return coefficients.reshape(coefficients.shape + (1,) * (u.ndim - 1))

    def _argument(self, u: np.ndarray) -> np.ndarray:
        return np.tensordot(self.wavevector, u, axes=([-1], [0])) + self._expand(
            self.phase, u
        )

    def value(self, u: np.ndarray) -> np.ndarray:
        """Evaluate f at coordinates of shape (4, ...); result shape ``shape + ...``."""
        u = np.asarray(u, dtype=np.float64)
        result = self._expand(self.offset, u) + np.tensordot(
            self.linear, u, axes=([-1], [0])
        )
        if np.any(self.amplitude):
            result = result + self._expand(self.amplitude, u) * np.sin(self._argument(u))
        return result

    def gradient(self, u: np.ndarray) -> np.ndarray:
        """Return df_i/du_s, shape ``shape + (4,) + ...``."""
        u = np.asarray(u, dtype=np.float64)
        result = np.broadcast_to(
            self._expand(self.linear, u), self.shape + (DIMENSION,) + u.shape[1:]
        ).copy()
        if np.any(self.amplitude):
            envelope = self._expand(self.amplitude, u) * np.cos(self._argument(u))
            result += self._expand(self.wavevector, u) * np.expand_dims(
                envelope, len(self.shape)
            )
        return result


class VelocityFamily(Enum):
    """Closed-form families for x -> xdot(x)."""

    AFFINE = "affine"
    TRIGONOMETRIC = "trigonometric"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True, eq=False)
class VelocityField:
    """xdot^nu(x) = M^nu_mu x_mu + b^nu [+ harmonic or polynomial terms].

    The trigonometric family adds one harmonic a^nu sin(k^nu.x + phi^nu) per
    component; the polynomial family adds q^nu_mu x_mu^2 + c^nu_mu x_mu^3."""

    family: VelocityFamily
    profile: HarmonicProfile
    quadratic: np.ndarray | None = None
    cubic: np.ndarray | None = None

    def __post_init__(self) -> None:
        family = VelocityFamily(self.family)
        if self.profile.shape != (DIMENSION,):
            raise KinematicsError(
                f"A velocity profile has {DIMENSION} components, got shape {self.profile.shape}."
            )
        quadratic = _coefficients(self.quadratic, (DIMENSION, DIMENSION), "quadratic")
        cubic = _coefficients(self.cubic, (DIMENSION, DIMENSION), "cubic")
        if family is not VelocityFamily.TRIGONOMETRIC and np.any(self.profile.amplitude):
            raise KinematicsError(f"The {family.value} family carries no harmonic terms.")
        if family is not VelocityFamily.POLYNOMIAL and (np.any(quadratic) or np.any(cubic)):
            raise KinematicsError(f"The {family.value} family carries no polynomial terms.")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "quadratic", quadratic)
        object.__setattr__(self, "cubic", cubic)

    @classmethod
    def affine(cls, matrix: np.ndarray | None = None, offset: np.ndarray | None = None) -> Self:
        """xdot = M x + b."""
        return cls(
            VelocityFamily.AFFINE, HarmonicProfile((DIMENSION,), offset=offset, linear=matrix)
        )

    @classmethod
    def constant(cls, offset: np.ndarray) -> Self:
        """xdot = b, so that lambda vanishes."""
        return cls.affine(offset=offset)

    @classmethod
    def identity(cls, scale: float = 1.0) -> Self:
        """xdot = scale * x, so that lambda = scale * identity."""
        return cls.affine(matrix=scale * np.eye(DIMENSION))

    @classmethod
    def trigonometric(
        cls,
        amplitude: np.ndarray,
        wavevector: np.ndarray,
        phase: np.ndarray | None = None,
        matrix: np.ndarray | None = None,
        offset: np.ndarray | None = None,
    ) -> Self:
        """xdot = M x + b + a sin(k.x + phi) componentwise."""
        profile = HarmonicProfile(
            (DIMENSION,),
            offset=offset,
            linear=matrix,
            amplitude=amplitude,
            wavevector=wavevector,
            phase=phase,
        )
        return cls(VelocityFamily.TRIGONOMETRIC, profile)

    @classmethod
    def polynomial(
        cls,
        quadratic: np.ndarray | None = None,
        cubic: np.ndarray | None = None,
        matrix: np.ndarray | None = None,
        offset: np.ndarray | None = None,
    ) -> Self:
        """xdot = M x + b + q x^2 + c x^3 with the powers taken per axis."""
        profile = HarmonicProfile((DIMENSION,), offset=offset, linear=matrix)
        return cls(VelocityFamily.POLYNOMIAL, profile, quadratic=quadratic, cubic=cubic)

    def affine_part(self) -> VelocityField:
        """Return the field with its harmonic and polynomial terms removed."""
        return VelocityField.affine(self.profile.linear, self.profile.offset)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Return xdot at coordinates of shape (4, ...)."""
        x = np.asarray(x, dtype=np.float64)
        result = self.profile.value(x)
        if self.family is VelocityFamily.POLYNOMIAL:
            result = result + np.tensordot(self.quadratic, x**2, axes=([1], [0]))
            result = result + np.tensordot(self.cubic, x**3, axes=([1], [0]))
        return result

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Return d xdot^nu / d x_mu with shape (4, 4, ...)."""
        x = np.asarray(x, dtype=np.float64)
        result = self.profile.gradient(x)
        if self.family is VelocityFamily.POLYNOMIAL:
            broadcast = (1,) * (x.ndim - 1)
            result = result + 2 * self.quadratic.reshape(self.quadratic.shape + broadcast) * x
            result = result + 3 * self.cubic.reshape(self.cubic.shape + broadcast) * x**2
        return result


@dataclass(frozen=True, eq=False)
class LambdaField:
    """lambda^nu_mu = d_mu xdot^nu on the lattice, stored ``values[nu, mu, *sites]``."""

    lattice: Lattice
    values: np.ndarray

    def __post_init__(self) -> None:
        values = LatticeField(self.lattice, SlotKind.TENSOR, self.values).values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def field(self) -> LatticeField:
        """Return lambda as a rank-2 lattice field."""
        return LatticeField(self.lattice, SlotKind.TENSOR, self.values)

    def determinant(self) -> np.ndarray:
        """Return det(lambda) per site."""
        matrices = np.moveaxis(self.values, (0, 1), (-2, -1))
        return np.linalg.det(matrices)

    def gradient(self) -> np.ndarray:
        """Return d_rho lambda^nu_mu on the lattice, shape (4, 4, 4, *sites)."""
        return self.lattice.gradient(self.values)

    def require_nonzero(self) -> None:
        """Raise unless every component is nonzero at every site."""
        zero = np.argwhere(self.values == 0)
        if zero.size:
            nu, mu, *site = (int(i) for i in zero[0])
            raise KinematicsError(
                f"lambda^{nu}_{mu} vanishes at site {tuple(site)}; "
                "the all-elements-nonzero regime was requested."
            )


def lambda_analytic(
    v: VelocityField, lattice: Lattice, require_nonzero: bool = False
) -> LambdaField:
    """Return lambda from the closed-form Jacobian at every site."""
    lam = LambdaField(lattice, v.jacobian(lattice.coordinates()))
    if require_nonzero:
        lam.require_nonzero()
    logger.debug(
        "lambda (%s): min |det| = %.3e",
        v.family.value,
        float(np.min(np.abs(lam.determinant()))),
    )
    return lam


def lambda_numeric(v: VelocityField, lattice: Lattice) -> LambdaField:
    """Return lambda from the central stencil applied to the sampled xdot."""
    columns = [lattice.central_stencil(v.evaluate, axis) for axis in range(DIMENSION)]
    return LambdaField(lattice, np.stack(columns, axis=1))


def lambda_error(v: VelocityField, lattice: Lattice) -> np.ndarray:
    """Return |lambda_numeric - lambda_analytic| per component and site."""
    return np.abs(lambda_numeric(v, lattice).values - lambda_analytic(v, lattice).values)


class ParameterFamily(Enum):
    """Closed-form families for p_alpha(xdot)."""

    CONSTANT = "constant"
    LINEAR = "linear"
    TRIGONOMETRIC = "trigonometric"


@dataclass(frozen=True, eq=False)
class GaugeParameterSet:
    """p_alpha(xdot) = epsilon * f_alpha(xdot) for N closed-form profiles."""

    family: ParameterFamily
    profile: HarmonicProfile
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        family = ParameterFamily(self.family)
        if len(self.profile.shape) != 1:
            raise KinematicsError(
                f"Gauge parameters carry one adjoint index, got shape {self.profile.shape}."
            )
        if family is ParameterFamily.CONSTANT and not self.profile.constant:
            raise KinematicsError("The constant family cannot depend on xdot.")
        if family is ParameterFamily.LINEAR and np.any(self.profile.amplitude):
            raise KinematicsError("The linear family carries no harmonic terms.")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @classmethod
    def zero(cls, adjoint: int) -> Self:
        """p = 0."""
        return cls(ParameterFamily.CONSTANT, HarmonicProfile((adjoint,)))

    @classmethod
    def constant(cls, values: np.ndarray, epsilon: float = 1.0) -> Self:
        """p_alpha = c_alpha, a global transformation."""
        values = np.asarray(values, dtype=np.float64)
        return cls(ParameterFamily.CONSTANT, HarmonicProfile(values.shape, offset=values), epsilon)

    @classmethod
    def linear(
        cls, weights: np.ndarray, offset: np.ndarray | None = None, epsilon: float = 1.0
    ) -> Self:
        """p_alpha = c_alpha + W_alpha . xdot."""
        weights = np.asarray(weights, dtype=np.float64)
        profile = HarmonicProfile(weights.shape[:1], offset=offset, linear=weights)
        return cls(ParameterFamily.LINEAR, profile, epsilon)

    @classmethod
    def trigonometric(
        cls,
        amplitude: np.ndarray,
        wavevector: np.ndarray,
        phase: np.ndarray | None = None,
        offset: np.ndarray | None = None,
        epsilon: float = 1.0,
    ) -> Self:
        """p_alpha = c_alpha + a_alpha sin(k_alpha . xdot + phi_alpha)."""
        amplitude = np.asarray(amplitude, dtype=np.float64)
        profile = HarmonicProfile(
            amplitude.shape, offset=offset, amplitude=amplitude, wavevector=wavevector, phase=phase
        )
        return cls(ParameterFamily.TRIGONOMETRIC, profile, epsilon)

    @property
    def adjoint(self) -> int:
        """Return N."""
        return self.profile.shape[0]

    @property
    def is_global(self) -> bool:
        """Return whether p is constant in xdot."""
        return self.profile.constant

    def with_amplitude(self, epsilon: float) -> Self:
        """Return the same profiles at a new amplitude."""
        return type(self)(self.family, self.profile, epsilon)

    def global_part(self) -> Self:
        """Return the constant part of the profiles."""
        return type(self)(ParameterFamily.CONSTANT, self.profile.constant_part(), self.epsilon)

    def value(self, u: np.ndarray) -> np.ndarray:
        """Return p_alpha(u), shape (N, ...)."""
        return self.epsilon * self.profile.value(u)

    def gradient(self, u: np.ndarray) -> np.ndarray:
        """Return d^rho p_alpha(u), shape (N, 4, ...)."""
        return self.epsilon * self.profile.gradient(u)


def evaluate_parameters(
    p: GaugeParameterSet, v: VelocityField, lattice: Lattice
) -> tuple[LatticeField, LatticeField]:
    """Pull p_alpha(xdot(x)) and d^rho p_alpha(xdot(x)) back to the sites."""
    u = v.evaluate(lattice.coordinates())
    values = LatticeField(lattice, SlotKind.ADJOINT, p.value(u))
    gradient = LatticeField(lattice, SlotKind.ADJOINT_VECTOR, p.gradient(u))
    return values, gradient


def lambda_determinant(lam: LambdaField) -> LatticeField:
    """Return det(lambda) per site as a scalar field."""
    return LatticeField(lam.lattice, SlotKind.SCALAR, lam.determinant())


def lambda_gradient(lam: LambdaField) -> np.ndarray:
    """Return d_rho lambda^nu_mu stored ``[rho, nu, mu, *sites]``."""
    return lam.gradient()
