"""Matter and velocity-space gauge fields, gauge transformations and the model Lagrangian.

Index conventions: adjoint index first, then space-time slots, then the four
site axes. The connection pulled back to space-time is

    A[alpha, mu] = sum_rho D[alpha, rho] * lam[rho, mu]

and the model Lagrangian density is

    L = sum_mu |Dhat_mu phi|^2 - m^2 |phi|^2 - 1/4 sum F2[alpha, mu, nu]^2

with Dhat_mu phi = d_mu phi + i g A[alpha, mu] T_alpha phi.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING, NamedTuple

if TYPE_CHECKING:
    from typing import Self

import numpy as np

from kinematics import (
    GaugeParameterSet,
    HarmonicProfile,
    LambdaField,
    ParameterFamily,
    VelocityField,
    evaluate_parameters,
    lambda_analytic,
)
from lattice import DIMENSION, Lattice, LatticeField, SlotKind
from lie_algebra import LieAlgebra

logger = logging.getLogger(__name__)

ORACLE_STEP = 1e-4
ORACLE_TOLERANCE = 1e-6
ORACLE_SITES = 50
GLOBAL_EPSILONS = (1e-2, 1e-3, 1e-4)


class FieldConfigurationError(ValueError):
    """Raised when the constituents of a configuration do not fit together."""


class LagrangianDerivativeError(ValueError):
    """Raised when an analytic partial of L disagrees with its numerical oracle."""


class MatterFamily(Enum):
    """Closed-form families for phi_k."""

    CONSTANT = "constant"
    PLANE_WAVE = "plane_wave"
    STANDING_WAVE = "standing_wave"


@dataclass(frozen=True, eq=False)
class MatterProfile:
    """phi_k(u) = a_k, a_k exp(i(k.u + phase)) or a_k cos(k.u + phase)."""

    family: MatterFamily
    amplitude: np.ndarray
    wavevector: np.ndarray | None = None
    phase: float = 0.0

    def __post_init__(self) -> None:
        amplitude = np.array(self.amplitude, dtype=np.complex128)
        if amplitude.ndim != 1:
            raise FieldConfigurationError(
                f"Matter amplitudes form one n-vector, got shape {amplitude.shape}."
            )
        wavevector = np.zeros(DIMENSION) if self.wavevector is None else np.array(
            self.wavevector, dtype=np.float64
        )
        if wavevector.shape != (DIMENSION,):
            raise FieldConfigurationError(
                f"A matter wavevector has {DIMENSION} entries, got shape {wavevector.shape}."
            )
        object.__setattr__(self, "family", MatterFamily(self.family))
        object.__setattr__(self, "amplitude", amplitude)
        object.__setattr__(self, "wavevector", wavevector)
        object.__setattr__(self, "phase", float(self.phase))

    @property
    def components(self) -> int:
        """Return n."""
        return self.amplitude.shape[0]

    def value(self, u: np.ndarray) -> np.ndarray:
        """Return phi at coordinates of shape (4, ...), shape (n, ...)."""
        u = np.asarray(u, dtype=np.float64)
        amplitude = self.amplitude.reshape((-1,) + (1,) * (u.ndim - 1))
        argument = np.tensordot(self.wavevector, u, axes=([0], [0])) + self.phase
        match self.family:
            case MatterFamily.CONSTANT:
                wave = np.ones(u.shape[1:])
            case MatterFamily.PLANE_WAVE:
                wave = np.exp(1j * argument)
            case MatterFamily.STANDING_WAVE:
                wave = np.cos(argument)
        return amplitude * wave


@dataclass(frozen=True, eq=False)
class MatterField:
    """phi_k on the lattice, optionally backed by a closed-form profile.

    A profile is evaluated at xdot(x) when a velocity field is attached and
    at x otherwise."""

    lattice: Lattice
    values: np.ndarray
    profile: MatterProfile | None = None
    velocity: VelocityField | None = None

    def __post_init__(self) -> None:
        values = LatticeField(self.lattice, SlotKind.MATTER, self.values, real=False).values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_profile(
        cls, profile: MatterProfile, lattice: Lattice, velocity: VelocityField | None = None
    ) -> Self:
        """Sample a closed-form matter field on the lattice."""
        return cls(lattice, _sample_matter(profile, lattice, velocity), profile, velocity)

    @classmethod
    def zero(cls, lattice: Lattice, components: int) -> Self:
        """phi = 0."""
        return cls(lattice, np.zeros((components,) + lattice.extents, dtype=np.complex128))

    @classmethod
    def random(
        cls, lattice: Lattice, components: int, rng: np.random.Generator, scale: float = 0.5
    ) -> Self:
        """Independent complex Gaussian values per site and component."""
        shape = (components,) + lattice.extents
        return cls(lattice, scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)))

    @property
    def components(self) -> int:
        """Return n."""
        return self.values.shape[0]

    @property
    def field(self) -> LatticeField:
        """Return phi as a complex lattice field."""
        return LatticeField(self.lattice, SlotKind.MATTER, self.values, real=False)

    def sample(self, lattice: Lattice | None = None) -> np.ndarray:
        """Re-sample the closed form, on ``lattice`` if given."""
        if self.profile is None:
            raise FieldConfigurationError("Matter given as lattice data has no closed form.")
        return _sample_matter(self.profile, lattice or self.lattice, self.velocity)

    def on_lattice(self, lattice: Lattice) -> Self:
        """Return the closed-form field sampled on another lattice."""
        return type(self)(lattice, self.sample(lattice), self.profile, self.velocity)


def _sample_matter(
    profile: MatterProfile, lattice: Lattice, velocity: VelocityField | None
) -> np.ndarray:
    x = lattice.coordinates()
    return profile.value(x if velocity is None else velocity.evaluate(x))


@dataclass(frozen=True, eq=False)
class GaugeField:
    """D[alpha, rho] pulled back to the sites, optionally with its closed form in xdot.

    With ``velocity_independent`` set only the offsets of the profile are kept."""

    lattice: Lattice
    values: np.ndarray
    profile: HarmonicProfile | None = None
    velocity_independent: bool = False

    def __post_init__(self) -> None:
        values = LatticeField(self.lattice, SlotKind.ADJOINT_VECTOR, self.values).values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_profile(
        cls,
        profile: HarmonicProfile,
        velocity: VelocityField,
        lattice: Lattice,
        velocity_independent: bool = False,
    ) -> Self:
        """Pull D(xdot(x)) back to the sites."""
        if len(profile.shape) != 2 or profile.shape[1] != DIMENSION:
            raise FieldConfigurationError(
                f"A gauge profile has shape (N, {DIMENSION}), got {profile.shape}."
            )
        if velocity_independent:
            profile = profile.constant_part()
        values = profile.value(velocity.evaluate(lattice.coordinates()))
        return cls(lattice, values, profile, velocity_independent)

    @classmethod
    def zero(cls, lattice: Lattice, adjoint: int) -> Self:
        """D = 0."""
        return cls(lattice, np.zeros((adjoint, DIMENSION) + lattice.extents), velocity_independent=True)

    @property
    def adjoint(self) -> int:
        """Return N."""
        return self.values.shape[0]

    @property
    def lattice_data(self) -> bool:
        """Return whether D is raw lattice data without a closed form."""
        return self.profile is None

    @property
    def constant_in_velocity(self) -> bool:
        """Return whether D does not depend on xdot."""
        if self.profile is None:
            return self.velocity_independent
        return self.velocity_independent or self.profile.constant

    @property
    def field(self) -> LatticeField:
        """Return D as an adjoint-vector lattice field."""
        return LatticeField(self.lattice, SlotKind.ADJOINT_VECTOR, self.values)

    def on_lattice(self, velocity: VelocityField, lattice: Lattice) -> Self:
        """Return the closed-form field pulled back to another lattice."""
        if self.profile is None:
            raise FieldConfigurationError("Gauge field given as lattice data has no closed form.")
        return type(self).from_profile(self.profile, velocity, lattice, self.velocity_independent)


@dataclass(frozen=True, eq=False)
class CompositeConnection:
    """A[alpha, mu] = D[alpha, rho] lam[rho, mu] at every site."""

    lattice: Lattice
    values: np.ndarray

    @classmethod
    def assemble(cls, gauge: GaugeField, lam: LambdaField) -> Self:
        """Contract the pulled-back D with lambda."""
        values = np.einsum("ar...,rm...->am...", gauge.values, lam.values)
        values.setflags(write=False)
        return cls(gauge.lattice, values)

    @property
    def field(self) -> LatticeField:
        """Return A as an adjoint-vector lattice field."""
        return LatticeField(self.lattice, SlotKind.ADJOINT_VECTOR, self.values)


@dataclass(frozen=True, eq=False)
class FieldConfiguration:
    """Every field entering L on one lattice, plus the coupling and the mass."""

    algebra: LieAlgebra
    lattice: Lattice
    velocity: VelocityField
    lam: LambdaField
    matter: MatterField
    gauge: GaugeField
    params: GaugeParameterSet
    g: float = 1.0
    m: float = 1.0
    require_nonzero: bool = False

    def __post_init__(self) -> None:
        if not self.g > 0:
            raise FieldConfigurationError(f"The coupling g must be positive, got {self.g}.")
        if not self.m >= 0:
            raise FieldConfigurationError(f"The mass m must be non-negative, got {self.m}.")
        for name in ("lam", "matter", "gauge"):
            if getattr(self, name).lattice != self.lattice:
                raise FieldConfigurationError(f"Constituent {name!r} lives on another lattice.")
        if self.matter.components != self.algebra.n:
            raise FieldConfigurationError(
                f"Matter has {self.matter.components} components; algebra "
                f"{self.algebra.name!r} acts on n = {self.algebra.n}."
            )
        if self.gauge.adjoint != self.algebra.N:
            raise FieldConfigurationError(
                f"Gauge field has {self.gauge.adjoint} adjoint components; "
                f"algebra {self.algebra.name!r} has N = {self.algebra.N}."
            )
        if self.params.adjoint != self.algebra.N:
            raise FieldConfigurationError(
                f"{self.params.adjoint} gauge parameters given; algebra "
                f"{self.algebra.name!r} has N = {self.algebra.N}."
            )
        if self.require_nonzero:
            self.lam.require_nonzero()
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "m", float(self.m))

    @classmethod
    def build(
        cls,
        algebra: LieAlgebra,
        lattice: Lattice,
        velocity: VelocityField,
        matter: MatterField,
        gauge: GaugeField,
        params: GaugeParameterSet,
        g: float = 1.0,
        m: float = 1.0,
        require_nonzero: bool = False,
    ) -> Self:
        """Assemble a configuration, computing lambda from the velocity field."""
        lam = lambda_analytic(velocity, lattice)
        return cls(algebra, lattice, velocity, lam, matter, gauge, params, g, m, require_nonzero)

    @cached_property
    def connection(self) -> CompositeConnection:
        """Return the composite connection A."""
        return CompositeConnection.assemble(self.gauge, self.lam)

    def with_fields(
        self, matter: MatterField | None = None, gauge: GaugeField | None = None
    ) -> Self:
        """Return a copy with replaced matter or gauge fields."""
        return replace(self, matter=matter or self.matter, gauge=gauge or self.gauge)

    def with_params(self, params: GaugeParameterSet) -> Self:
        """Return a copy with replaced gauge parameters."""
        return replace(self, params=params)

    def refined(self) -> Self:
        """Rebuild the configuration on the lattice with half the spacing.

        Only closed-form matter and gauge fields can be refined."""
        if self.matter.profile is None or self.gauge.profile is None:
            raise FieldConfigurationError(
                "Refinement needs closed-form matter and gauge fields, not lattice data."
            )
        fine = self.lattice.refined()
        return type(self).build(
            self.algebra,
            fine,
            self.velocity,
            self.matter.on_lattice(fine),
            self.gauge.on_lattice(self.velocity, fine),
            self.params,
            self.g,
            self.m,
            self.require_nonzero,
        )


class Jets(NamedTuple):
    """Pointwise values and first derivatives that L depends on.

    ``dphi[mu, k]`` is d_mu phi_k and ``dA[alpha, mu, rho]`` is d_mu A[alpha, rho]."""

    phi: np.ndarray
    dphi: np.ndarray
    A: np.ndarray
    dA: np.ndarray

    def at(self, site: tuple[int, ...]) -> Jets:
        """Return the jets at a single site."""
        index = (Ellipsis,) + tuple(site)
        return Jets(*(np.array(jet[index]) for jet in self))


def configuration_jets(cfg: FieldConfiguration) -> Jets:
    """Differentiate the fields of ``cfg`` on the lattice."""
    phi = cfg.matter.values
    A = cfg.connection.values
    dA = np.moveaxis(cfg.lattice.gradient(A), 0, 1)
    return Jets(phi, cfg.lattice.gradient(phi), A, dA)


def covariant_gradient_from_jets(
    phi: np.ndarray, dphi: np.ndarray, A: np.ndarray, algebra: LieAlgebra, g: float
) -> np.ndarray:
    """Return Dhat_mu phi_k = d_mu phi_k + i g A[alpha, mu] (T_alpha)_kl phi_l."""
    return dphi + 1j * g * np.einsum("am...,akl,l...->mk...", A, algebra.generators, phi)


def curvature(A: np.ndarray, dA: np.ndarray, algebra: LieAlgebra, g: float) -> np.ndarray:
    """Return F2[alpha, mu, nu] = d_nu A_mu - d_mu A_nu + g C^c_ab A[b, mu] A[c, nu].

    The last term is the -igC contraction with the i carried by the
    commutator of generators. The result is exactly antisymmetric."""
    curl = np.swapaxes(dA, 1, 2) - dA
    if algebra.abelian:
        return curl
    product = g * np.einsum("cab,bm...,cn...->amn...", algebra.structure_constants, A, A)
    return curl + 0.5 * (product - np.swapaxes(product, 1, 2))


def lagrangian_from_jets(jets: Jets, algebra: LieAlgebra, g: float, m: float) -> np.ndarray:
    """Evaluate the model L pointwise from independent jets."""
    covariant = covariant_gradient_from_jets(jets.phi, jets.dphi, jets.A, algebra, g)
    strength = curvature(jets.A, jets.dA, algebra, g)
    kinetic = np.sum(np.abs(covariant) ** 2, axis=(0, 1))
    mass = m**2 * np.sum(np.abs(jets.phi) ** 2, axis=0)
    return kinetic - mass - 0.25 * np.sum(strength**2, axis=(0, 1, 2))


def covariant_gradient(cfg: FieldConfiguration) -> LatticeField:
    """Return Dhat_mu phi_k on the lattice, slots (mu, k)."""
    jets = configuration_jets(cfg)
    values = covariant_gradient_from_jets(jets.phi, jets.dphi, jets.A, cfg.algebra, cfg.g)
    return LatticeField(cfg.lattice, SlotKind.MATTER_VECTOR, values, real=False)


def lagrangian_density(cfg: FieldConfiguration) -> LatticeField:
    """Return the model Lagrangian density at every site."""
    values = lagrangian_from_jets(configuration_jets(cfg), cfg.algebra, cfg.g, cfg.m)
    return LatticeField(cfg.lattice, SlotKind.SCALAR, values)


def dL_dgrad_matter(cfg: FieldConfiguration) -> LatticeField:
    """Return dL/d(d_mu phi_k) = conj(Dhat_mu phi_k), slots (mu, k)."""
    return LatticeField(
        cfg.lattice, SlotKind.MATTER_VECTOR, np.conj(covariant_gradient(cfg).values), real=False
    )


def dL_dgrad_connection(cfg: FieldConfiguration) -> LatticeField:
    """Return dL/d(d_mu A[alpha, rho]) = F2[alpha, mu, rho]."""
    jets = configuration_jets(cfg)
    values = curvature(jets.A, jets.dA, cfg.algebra, cfg.g)
    return LatticeField(cfg.lattice, SlotKind.ADJOINT_TENSOR, values)


def dL_dgrad_gauge(cfg: FieldConfiguration) -> LatticeField:
    """Return dL/d(d_mu D[alpha, nu]) = F2[alpha, mu, rho] lam[nu, rho].

    d_mu A = (d_mu D) lam + D (d_mu lam), so only the first term depends on d_mu D."""
    strength = dL_dgrad_connection(cfg).values
    values = np.einsum("amr...,nr...->amn...", strength, cfg.lam.values)
    return LatticeField(cfg.lattice, SlotKind.ADJOINT_TENSOR, values)


@dataclass(frozen=True)
class PartialsReport:
    """Largest oracle disagreements relative to the largest analytic value."""

    matter: float
    gauge: float
    sites: int
    tolerance: float

    @property
    def passed(self) -> bool:
        """Return whether both partials agree with the oracle."""
        return self.matter <= self.tolerance and self.gauge <= self.tolerance


def _relative(difference: float, scale: float) -> float:
    if scale == 0:
        return 0.0 if difference == 0 else float("inf")
    return difference / scale


def check_partials(
    cfg: FieldConfiguration,
    sites: int = ORACLE_SITES,
    seed: int = 0,
    step: float = ORACLE_STEP,
    tolerance: float = ORACLE_TOLERANCE,
    strict: bool = True,
) -> PartialsReport:
    """Compare both analytic partials with central perturbations of L at seeded sites.

    The matter derivative is the Wirtinger combination of perturbations of the
    real and imaginary parts of d_mu phi_k; the gauge derivative perturbs
    d_mu D[alpha, nu], which moves d_mu A[alpha, rho] by step * lam[nu, rho]."""
    rng = np.random.default_rng(seed)
    jets = configuration_jets(cfg)
    analytic_matter = dL_dgrad_matter(cfg).values
    analytic_gauge = dL_dgrad_gauge(cfg).values
    chosen = rng.choice(cfg.lattice.volume, size=min(sites, cfg.lattice.volume), replace=False)

    def evaluate(local: Jets) -> float:
        return float(lagrangian_from_jets(local, cfg.algebra, cfg.g, cfg.m))

    matter_error = gauge_error = 0.0
    matter_scale = float(np.max(np.abs(analytic_matter)))
    gauge_scale = float(np.max(np.abs(analytic_gauge)))
    for index in chosen:
        site = cfg.lattice.site_of(int(index))
        local = jets.at(site)
        lam = cfg.lam.values[(Ellipsis,) + site]
        for mu, k in np.ndindex(*local.dphi.shape):
            slopes = []
            for direction in (1.0, 1j):
                dphi = local.dphi.copy()
                dphi[mu, k] += direction * step
                forward = evaluate(local._replace(dphi=dphi))
                dphi[mu, k] -= 2 * direction * step
                backward = evaluate(local._replace(dphi=dphi))
                slopes.append((forward - backward) / (2 * step))
            numeric = 0.5 * (slopes[0] - 1j * slopes[1])
            expected = analytic_matter[(mu, k) + site]
            matter_error = max(matter_error, abs(numeric - expected))
        for alpha, mu, nu in np.ndindex(cfg.algebra.N, DIMENSION, DIMENSION):
            dA = local.dA.copy()
            dA[alpha, mu] += step * lam[nu]
            forward = evaluate(local._replace(dA=dA))
            dA[alpha, mu] -= 2 * step * lam[nu]
            backward = evaluate(local._replace(dA=dA))
            numeric = (forward - backward) / (2 * step)
            expected = analytic_gauge[(alpha, mu, nu) + site]
            gauge_error = max(gauge_error, abs(numeric - expected))
    report = PartialsReport(
        matter=_relative(matter_error, matter_scale),
        gauge=_relative(gauge_error, gauge_scale),
        sites=len(chosen),
        tolerance=tolerance,
    )
    logger.debug("Partials oracle over %d sites: %s", report.sites, report)
    if strict and not report.passed:
        raise LagrangianDerivativeError(
            f"Analytic partials disagree with the perturbation oracle: matter "
            f"{report.matter:.3e}, gauge {report.gauge:.3e} (tolerance {tolerance:.0e})."
        )
    return report


def transform_matter(cfg: FieldConfiguration) -> MatterField:
    """Return delta phi_k = -i p_alpha (T_alpha)_kl phi_l at every site."""
    if cfg.matter.components != cfg.algebra.n:
        raise FieldConfigurationError(
            f"Matter has {cfg.matter.components} components, generators act on {cfg.algebra.n}."
        )
    p, _ = evaluate_parameters(cfg.params, cfg.velocity, cfg.lattice)
    values = -1j * np.einsum("a...,akl,l...->k...", p.values, cfg.algebra.generators, cfg.matter.values)
    return MatterField(cfg.lattice, values)


def _homogeneous(cfg: FieldConfiguration, p: np.ndarray, vector: np.ndarray) -> np.ndarray:
    return np.einsum("cab,b...,cm...->am...", cfg.algebra.structure_constants, p, vector)


def transform_gauge(cfg: FieldConfiguration) -> LatticeField:
    """Return the space-time increment (1/g) d^rho p_alpha lam[rho, mu] + C^c_ab p_b A[c, mu].

    This is the change of the composite connection; for lam equal to the
    identity it coincides with the change of D itself."""
    p, dp = evaluate_parameters(cfg.params, cfg.velocity, cfg.lattice)
    inhomogeneous = np.einsum("ar...,rm...->am...", dp.values, cfg.lam.values) / cfg.g
    values = inhomogeneous + _homogeneous(cfg, p.values, cfg.connection.values)
    return LatticeField(cfg.lattice, SlotKind.ADJOINT_VECTOR, values)


def velocity_frame_increment(cfg: FieldConfiguration) -> LatticeField:
    """Return (1/g) d^rho p_alpha + C^c_ab p_b D[c, rho], the change of D itself."""
    p, dp = evaluate_parameters(cfg.params, cfg.velocity, cfg.lattice)
    values = dp.values / cfg.g + _homogeneous(cfg, p.values, cfg.gauge.values)
    return LatticeField(cfg.lattice, SlotKind.ADJOINT_VECTOR, values)


def apply_transformation(cfg: FieldConfiguration, epsilon: float) -> FieldConfiguration:
    """Return cfg with phi += delta phi and D += delta D at amplitude ``epsilon``.

    The transformed fields are lattice data; ``cfg`` is left untouched."""
    scaled = cfg.with_params(cfg.params.with_amplitude(epsilon))
    matter = MatterField(cfg.lattice, cfg.matter.values + transform_matter(scaled).values)
    gauge = GaugeField(
        cfg.lattice,
        cfg.gauge.values + velocity_frame_increment(scaled).values,
        velocity_independent=cfg.gauge.constant_in_velocity and scaled.params.is_global,
    )
    return cfg.with_fields(matter=matter, gauge=gauge)


def global_invariance_defect(cfg: FieldConfiguration, epsilon: float) -> float:
    """Return |sum delta L| / |sum L| under the constant part of the parameters."""
    global_cfg = cfg.with_params(cfg.params.global_part())
    before = lagrangian_density(global_cfg).values
    after = lagrangian_density(apply_transformation(global_cfg, epsilon)).values
    total = abs(float(np.sum(before)))
    if total == 0:
        raise FieldConfigurationError("The Lagrangian sums to zero; no relative defect exists.")
    return abs(float(np.sum(after - before))) / total


def global_invariance_defects(
    cfg: FieldConfiguration, epsilons: tuple[float, ...] = GLOBAL_EPSILONS
) -> list[float]:
    """Return the global defect at each epsilon."""
    defects = [global_invariance_defect(cfg, epsilon) for epsilon in epsilons]
    logger.debug("Global invariance defects %s at epsilons %s", defects, epsilons)
    return defects


def defect_slope(epsilons: tuple[float, ...], defects: list[float]) -> float:
    """Return the log-log slope of ``defects`` against ``epsilons``.

    Raises FieldConfigurationError when a defect vanishes, since an exactly
    invariant configuration has no slope."""
    if min(defects) <= 0:
        raise FieldConfigurationError(
            f"Defects {defects} include an exact zero; no log-log slope exists."
        )
    slope, _ = np.polyfit(np.log(epsilons), np.log(defects), 1)
    return float(slope)


def global_invariance_slope(
    cfg: FieldConfiguration, epsilons: tuple[float, ...] = GLOBAL_EPSILONS
) -> float:
    """Return the log-log slope of the global defect against epsilon."""
    return defect_slope(epsilons, global_invariance_defects(cfg, epsilons))


def local_variation(cfg: FieldConfiguration, epsilon: float) -> LatticeField:
    """Return the odd-in-epsilon part of delta L, (L(+eps) - L(-eps)) / 2.

    For smooth parameters this is the O(eps h^2) residue of local invariance."""
    forward = lagrangian_density(apply_transformation(cfg, epsilon)).values
    backward = lagrangian_density(apply_transformation(cfg, -epsilon)).values
    return LatticeField(cfg.lattice, SlotKind.SCALAR, 0.5 * (forward - backward))


def local_invariance_ratio(cfg: FieldConfiguration, epsilon: float) -> float:
    """Return norm(local variation) on cfg over the same norm on the refined lattice.

    The fine variation is compared at the coinciding sites. Fields periodic
    on the lattice give about 4; ``cfg`` needs closed-form fields."""
    fine = cfg.refined()
    coarse_norm = local_variation(cfg, epsilon).norm()
    fine_values = fine.lattice.restrict_to_coarse(local_variation(fine, epsilon).values)
    fine_norm = float(np.linalg.norm(fine_values.ravel()))
    logger.debug("Local variation norms: coarse %.3e, fine %.3e", coarse_norm, fine_norm)
    if fine_norm == 0:
        return 0.0 if coarse_norm == 0 else float("inf")
    return coarse_norm / fine_norm


def lattice_dispersion_mass(wavenumber: float, spacing: float) -> float:
    """Return m with sum_mu d_mu d_mu phi = -m^2 phi for a wave along one axis."""
    return float(np.sin(wavenumber * spacing) / spacing)


def random_configuration(
    algebra: LieAlgebra,
    lattice: Lattice,
    seed: int = 0,
    affine: bool = False,
    g: float = 1.0,
    m: float = 1.0,
    epsilon: float = 1e-3,
    scale: float = 0.5,
) -> FieldConfiguration:
    """Draw a seeded configuration with random matter data and closed-form D and p."""
    rng = np.random.default_rng(seed)
    box = lattice.box
    matrix = np.eye(DIMENSION) + rng.uniform(-0.2, 0.2, size=(DIMENSION, DIMENSION))
    offset = rng.uniform(-1, 1, size=DIMENSION)
    if affine:
        velocity = VelocityField.affine(matrix, offset)
    else:
        harmonics = HarmonicProfile.random(rng, (DIMENSION,), box, scale=0.2, linear=False)
        velocity = VelocityField.trigonometric(
            harmonics.amplitude, harmonics.wavevector, harmonics.phase, matrix, offset
        )
    matter = MatterField.random(lattice, algebra.n, rng, scale)
    gauge = GaugeField.from_profile(
        HarmonicProfile.random(rng, (algebra.N, DIMENSION), box, scale), velocity, lattice
    )
    profile = HarmonicProfile.random(rng, (algebra.N,), box, scale, linear=False)
    params = GaugeParameterSet(ParameterFamily.TRIGONOMETRIC, profile, epsilon)
    return FieldConfiguration.build(algebra, lattice, velocity, matter, gauge, params, g, m)
