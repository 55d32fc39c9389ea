"""Strength tensors, Noether currents and the checks built on them.

Storage is [alpha, mu, nu, *sites] for strengths and [alpha, nu, *sites] for
currents. Every C-bearing product written with a factor i g carries the i of
the generator commutator, so all adjoint components stay real:
-igC X Y is stored as +g C^c_ab X_b Y_c and +igC X Y as -g C^c_ab X_b Y_c.
The matter contraction i dL/d(d phi) T phi includes its conjugate partner.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd

from gauge_fields import (
    FieldConfiguration,
    GaugeField,
    MatterField,
    MatterFamily,
    MatterProfile,
    apply_transformation,
    configuration_jets,
    curvature,
    dL_dgrad_gauge,
    dL_dgrad_matter,
)
from kinematics import (
    GaugeParameterSet,
    HarmonicProfile,
    VelocityField,
    evaluate_parameters,
)
from lattice import DIMENSION, Lattice, LatticeField, SlotKind
from lie_algebra import LieAlgebra

from .reference import reference_currents

logger = logging.getLogger(__name__)

REDUCTION_TOLERANCE = 1e-12
PROBE_EXTENTS = (64, 4, 4, 4)
PROBE_SPACING = 0.25


class ReductionRegimeError(ValueError):
    """Raised when a configuration is outside the standard-gauge reduction regime."""


class StrengthKind(Enum):
    """Rank-2 adjoint tensors."""

    F = "F"
    F1 = "F1"
    F2 = "F2"


class CurrentKind(Enum):
    """Adjoint 4-vector currents."""

    J1 = "J1"
    J2_LOWER = "j2"
    J2 = "J2"


@dataclass(frozen=True, eq=False)
class StrengthField:
    """A strength tensor together with the equation it was built from."""

    kind: StrengthKind
    lattice: Lattice
    values: np.ndarray
    equation: str

    def __post_init__(self) -> None:
        values = LatticeField(self.lattice, SlotKind.ADJOINT_TENSOR, self.values).values
        object.__setattr__(self, "values", values)

    @property
    def field(self) -> LatticeField:
        """Return the tensor as a lattice field."""
        return LatticeField(self.lattice, SlotKind.ADJOINT_TENSOR, self.values)

    def antisymmetry_defect(self) -> float:
        """Return max |X[mu, nu] + X[nu, mu]|."""
        return float(np.max(np.abs(self.values + np.swapaxes(self.values, 1, 2)), initial=0.0))


@dataclass(frozen=True, eq=False)
class CurrentField:
    """A current, its provenance and the imaginary residue of its complex intermediate."""

    kind: CurrentKind
    lattice: Lattice
    values: np.ndarray
    equation: str
    imaginary_residue: float = 0.0

    def __post_init__(self) -> None:
        values = LatticeField(self.lattice, SlotKind.ADJOINT_VECTOR, self.values).values
        object.__setattr__(self, "values", values)

    @property
    def field(self) -> LatticeField:
        """Return the current as a lattice field."""
        return LatticeField(self.lattice, SlotKind.ADJOINT_VECTOR, self.values)

    def norm(self) -> float:
        """Return the Euclidean norm over sites and slots."""
        return float(np.linalg.norm(self.values.ravel()))


@dataclass(frozen=True)
class ResidualRecord:
    """One diagnostic: a residual norm and its ratio to a reference scale."""

    name: str
    equation: str
    norm: float
    relative: float
    spacing: float
    epsilon: float | None = None


@dataclass
class ConditionReport:
    """Residual records that serialise to one CSV row each."""

    records: list[ResidualRecord] = field(default_factory=list)

    def __getitem__(self, name: str) -> ResidualRecord:
        for record in self.records:
            if record.name == name:
                return record
        raise KeyError(name)

    def __iter__(self):
        return iter(self.records)

    def add(self, record: ResidualRecord) -> None:
        """Append a record and log it."""
        logger.info(
            "%s (%s): norm %.3e, relative %.3e",
            record.name,
            record.equation,
            record.norm,
            record.relative,
        )
        self.records.append(record)

    def to_frame(self) -> pd.DataFrame:
        """Return one row per record."""
        return pd.DataFrame(
            [
                {
                    "name": r.name,
                    "equation": r.equation,
                    "norm": r.norm,
                    "relative": r.relative,
                    "h": r.spacing,
                    "epsilon": r.epsilon,
                }
                for r in self.records
            ],
            columns=["name", "equation", "norm", "relative", "h", "epsilon"],
        )


def _norm(values: np.ndarray) -> float:
    return float(np.linalg.norm(np.ravel(values)))


def _ratio(numerator: float, denominator: float) -> float:
    if denominator == 0:
        return 0.0 if numerator == 0 else float("inf")
    return numerator / denominator


def relative_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Return max |a - b| / max |b|, or 0 when both vanish."""
    difference = float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))
    return _ratio(difference, float(np.max(np.abs(b), initial=0.0)))


def strength_F1(cfg: FieldConfiguration) -> StrengthField:
    """Return F1 = dL/d(d_mu D[alpha, nu])."""
    return StrengthField(StrengthKind.F1, cfg.lattice, dL_dgrad_gauge(cfg).values, "Eq.13-F1")


def strength_F(cfg: FieldConfiguration) -> StrengthField:
    """Return F[alpha, mu, nu] = F1[alpha, mu, rho] lam[nu, rho]."""
    values = np.einsum("amr...,nr...->amn...", strength_F1(cfg).values, cfg.lam.values)
    return StrengthField(StrengthKind.F, cfg.lattice, values, "Eq.8-F")


def strength_F2(cfg: FieldConfiguration) -> StrengthField:
    """Return the covariant F2 of the composite connection."""
    jets = configuration_jets(cfg)
    values = curvature(jets.A, jets.dA, cfg.algebra, cfg.g)
    return StrengthField(StrengthKind.F2, cfg.lattice, values, "Eq.17-F2")


def _connection_contraction(cfg: FieldConfiguration, strength: np.ndarray) -> np.ndarray:
    """Return C^c_ab A[b, mu] X[c, mu, nu] summed over mu."""
    return np.einsum(
        "cab,bm...,cmn...->an...",
        cfg.algebra.structure_constants,
        cfg.connection.values,
        strength,
    )


def covariant_divergence_F2(cfg: FieldConfiguration, F2: StrengthField) -> LatticeField:
    """Return d_mu F2[alpha, mu, nu] + igC A F2 with the i bookkept."""
    values = cfg.lattice.divergence(F2.values, 1)
    if not cfg.algebra.abelian:
        values = values - cfg.g * _connection_contraction(cfg, F2.values)
    return LatticeField(cfg.lattice, SlotKind.ADJOINT_VECTOR, values)


def matter_contraction(cfg: FieldConfiguration) -> tuple[np.ndarray, float]:
    """Return i dL/d(d_mu phi_k) (T_alpha)_kl phi_l plus its conjugate, slots (alpha, mu).

    The second value is the largest imaginary part left in the sum."""
    momentum = dL_dgrad_matter(cfg).values
    generators = cfg.algebra.generators
    phi = cfg.matter.values
    direct = 1j * np.einsum("mk...,akl,l...->am...", momentum, generators, phi)
    partner = -1j * np.einsum("mk...,akl,l...->am...", momentum.conj(), generators.conj(), phi.conj())
    total = direct + partner
    return total.real, float(np.max(np.abs(total.imag), initial=0.0))


def current_imaginary_residue(cfg: FieldConfiguration) -> float:
    """Return the imaginary residue of the matter contraction relative to its size."""
    values, residue = matter_contraction(cfg)
    return _ratio(residue, float(np.max(np.abs(values), initial=0.0)))


def current_J1_forms(cfg: FieldConfiguration) -> dict[str, CurrentField]:
    """Return J1 assembled by the full form and by the matter-only form."""
    matter, residue = matter_contraction(cfg)
    F1 = strength_F1(cfg).values
    gauge_term = np.einsum(
        "cab,bmn...,cn...->am...", cfg.algebra.structure_constants, F1, cfg.gauge.values
    )
    return {
        "full": CurrentField(
            CurrentKind.J1, cfg.lattice, cfg.g * (matter + gauge_term), "Eq.9-J1", residue
        ),
        "matter": CurrentField(CurrentKind.J1, cfg.lattice, cfg.g * matter, "Eq.23-J1", residue),
    }


def current_J1(cfg: FieldConfiguration) -> CurrentField:
    """Return J1 from the full form; the difference to the matter-only form is logged."""
    forms = current_J1_forms(cfg)
    logger.info(
        "J1 full vs matter-only form: relative deviation %.3e",
        relative_deviation(forms["matter"].values, forms["full"].values),
    )
    return forms["full"]


def current_j2(cfg: FieldConfiguration) -> CurrentField:
    """Return j2[alpha, nu] = J1[alpha, mu] lam[nu, mu] - F1[alpha, rho, mu] d_rho lam[nu, mu]."""
    J1 = current_J1_forms(cfg)["full"]
    mixed = np.einsum("am...,nm...->an...", J1.values, cfg.lam.values)
    drift = np.einsum("arm...,rnm...->an...", strength_F1(cfg).values, cfg.lam.gradient())
    return CurrentField(
        CurrentKind.J2_LOWER, cfg.lattice, mixed - drift, "Eq.10-j2", J1.imaginary_residue
    )


def current_J2_forms(cfg: FieldConfiguration) -> dict[str, CurrentField]:
    """Return J2 by the divergence of F2, by the F route and by the matter route."""
    F2 = strength_F2(cfg).values
    F = strength_F(cfg).values
    matter, residue = matter_contraction(cfg)
    divergence = cfg.lattice.divergence(F2, 1)
    homogeneous = cfg.g * _connection_contraction(cfg, F2)
    via_F = cfg.lattice.divergence(F, 1) + homogeneous
    via_matter = cfg.g * np.einsum("am...,nm...->an...", matter, cfg.lam.values) + homogeneous
    return {
        "divergence": CurrentField(CurrentKind.J2, cfg.lattice, divergence, "Eq.20-J2"),
        "via-F": CurrentField(CurrentKind.J2, cfg.lattice, via_F, "Eq.19-J2"),
        "via-matter": CurrentField(CurrentKind.J2, cfg.lattice, via_matter, "Eq.24-J2", residue),
    }


def current_J2(cfg: FieldConfiguration) -> CurrentField:
    """Return J2 = d_mu F2[alpha, mu, nu]; the other two forms are logged against it."""
    forms = current_J2_forms(cfg)
    canonical = forms["divergence"]
    for name in ("via-F", "via-matter"):
        logger.info(
            "J2 %s form vs divergence form: relative deviation %.3e",
            name,
            relative_deviation(forms[name].values, canonical.values),
        )
    return canonical


def check_conservation(current: CurrentField, lattice: Lattice) -> tuple[float, float]:
    """Return the norm of the divergence and its ratio to norm(current) / h."""
    residual = _norm(lattice.divergence(current.values, 1))
    return residual, _ratio(residual, current.norm() / lattice.spacing)


def check_conditions(cfg: FieldConfiguration) -> ConditionReport:
    """Evaluate the local-invariance conditions as residual norms; nothing is asserted."""
    lattice, g, lam = cfg.lattice, cfg.g, cfg.lam.values
    J1 = current_J1_forms(cfg)["full"].values
    F1 = strength_F1(cfg).values
    F = strength_F(cfg).values
    mixed = np.einsum("am...,nm...->an...", J1, lam) / g
    report = ConditionReport()

    def record(name: str, values: np.ndarray, scale: float) -> None:
        norm = _norm(values)
        report.add(
            ResidualRecord(name, "Eq." + name.removeprefix("condition-eq"), norm, _ratio(norm, scale), lattice.spacing)
        )

    record("condition-eq5", -lattice.divergence(J1, 1) / g, _norm(J1) / (g * lattice.spacing))
    record("condition-eq6a", -mixed + lattice.divergence(F, 1) / g, _norm(mixed))
    drift = np.einsum("arm...,rnm...->an...", F1, cfg.lam.gradient())
    source = np.einsum("am...,nm...->an...", lattice.divergence(F1, 1), lam)
    record("condition-eq6b", -mixed + (drift + source) / g, _norm(mixed))
    record("condition-eq7a", F, _norm(F1))
    record("condition-eq7b", F + np.swapaxes(F, 1, 2), _norm(F1))
    return report


def covariance_defect_field(cfg: FieldConfiguration, epsilon: float) -> np.ndarray:
    """Return F2(transformed) - F2 - C^c_ab p_b F2[c] at amplitude ``epsilon``."""
    before = strength_F2(cfg).values
    after = strength_F2(apply_transformation(cfg, epsilon)).values
    p, _ = evaluate_parameters(cfg.params.with_amplitude(epsilon), cfg.velocity, cfg.lattice)
    rotation = np.einsum("cab,b...,cmn...->amn...", cfg.algebra.structure_constants, p.values, before)
    return after - before - rotation


def gauge_covariance_F2(cfg: FieldConfiguration, epsilon: float) -> float:
    """Return norm(delta F2 - eps C p F2) / norm(F2); O(eps^2) + O(eps h^2)."""
    defect = covariance_defect_field(cfg, epsilon)
    return _ratio(_norm(defect), _norm(strength_F2(cfg).values))


def richardson_covariance_defect(cfg: FieldConfiguration, epsilon: float) -> float:
    """Return the covariance defect with its h^2 part removed by one Richardson step.

    The configuration is rebuilt on the refined lattice and both defect fields
    are compared at the coinciding sites."""
    fine = cfg.refined()
    coarse_defect = covariance_defect_field(cfg, epsilon)
    fine_defect = fine.lattice.restrict_to_coarse(covariance_defect_field(fine, epsilon))
    extrapolated = (4 * fine_defect - coarse_defect) / 3
    return _ratio(_norm(extrapolated), _norm(strength_F2(cfg).values))


def covariance_slope(
    cfg: FieldConfiguration, epsilons: tuple[float, float] = (1e-2, 1e-3)
) -> float:
    """Return the log-log slope of the Richardson-corrected defect in epsilon."""
    defects = [richardson_covariance_defect(cfg, epsilon) for epsilon in epsilons]
    logger.debug("Covariance defects %s at epsilons %s", defects, epsilons)
    return float(np.log(defects[0] / defects[1]) / np.log(epsilons[0] / epsilons[1]))


def covariance_probe(algebra: LieAlgebra, g: float = 1.0, seed: int = 0) -> FieldConfiguration:
    """Return a configuration varying along x_1 only, smooth enough for the covariance study.

    xdot = x + a sin(k x_1); D and p are harmonics of xdot_1 with wavevectors
    commensurate with the box, so every field is periodic on the lattice."""
    rng = np.random.default_rng(seed)
    lattice = Lattice(PROBE_EXTENTS, PROBE_SPACING)
    k = 2 * np.pi / lattice.box[0]
    along = np.zeros((DIMENSION, DIMENSION))
    along[:, 0] = k
    velocity = VelocityField.trigonometric(
        amplitude=np.array([0.3, 0.2, 0.1, 0.0]), wavevector=along, matrix=np.eye(DIMENSION)
    )
    gauge_wave = np.zeros((algebra.N, DIMENSION, DIMENSION))
    gauge_wave[..., 0] = k * rng.integers(1, 3, size=(algebra.N, DIMENSION))
    gauge_profile = HarmonicProfile(
        (algebra.N, DIMENSION),
        offset=rng.uniform(-0.5, 0.5, size=(algebra.N, DIMENSION)),
        amplitude=rng.uniform(0.3, 0.8, size=(algebra.N, DIMENSION)),
        wavevector=gauge_wave,
        phase=rng.uniform(0, 2 * np.pi, size=(algebra.N, DIMENSION)),
    )
    param_wave = np.zeros((algebra.N, DIMENSION))
    param_wave[:, 0] = k
    params = GaugeParameterSet.trigonometric(
        amplitude=rng.uniform(0.5, 1.0, size=algebra.N),
        wavevector=param_wave,
        phase=rng.uniform(0, 2 * np.pi, size=algebra.N),
        offset=rng.uniform(0.5, 1.0, size=algebra.N),
    )
    matter = MatterField.from_profile(
        MatterProfile(MatterFamily.CONSTANT, np.ones(algebra.n)), lattice
    )
    gauge = GaugeField.from_profile(gauge_profile, velocity, lattice)
    return FieldConfiguration.build(algebra, lattice, velocity, matter, gauge, params, g, 1.0)


def eom_residual(cfg: FieldConfiguration) -> tuple[LatticeField, LatticeField]:
    """Return R1 = d_mu F1 - J1 (matter-only form) and R2 = covariant div F2 - g M lam.

    Both vanish only on-shell; they are diagnostics."""
    matter, _ = matter_contraction(cfg)
    F1 = strength_F1(cfg).values
    first = cfg.lattice.divergence(F1, 1) - cfg.g * matter
    covariant = covariant_divergence_F2(cfg, strength_F2(cfg)).values
    second = covariant - cfg.g * np.einsum("am...,nm...->an...", matter, cfg.lam.values)
    return (
        LatticeField(cfg.lattice, SlotKind.ADJOINT_VECTOR, first),
        LatticeField(cfg.lattice, SlotKind.ADJOINT_VECTOR, second),
    )


def identity_side_report(cfg: FieldConfiguration) -> ConditionReport:
    """Residuals of the identities that hold on-shell, and of the J1 and J2 form comparisons."""
    lattice, spacing = cfg.lattice, cfg.lattice.spacing
    J1 = current_J1_forms(cfg)
    J2 = current_J2_forms(cfg)
    j2 = current_j2(cfg)
    F1 = strength_F1(cfg).values
    F = strength_F(cfg).values
    F2 = strength_F2(cfg)
    report = ConditionReport()

    def record(name: str, equation: str, a: np.ndarray, b: np.ndarray) -> None:
        norm = _norm(a - b)
        report.add(ResidualRecord(name, equation, norm, _ratio(norm, _norm(b)), spacing))

    record("eq13", "Eq.13", J1["full"].values, lattice.divergence(F1, 1))
    record("eq14", "Eq.14", j2.values, lattice.divergence(F, 1))
    record("eq15", "Eq.15", covariant_divergence_F2(cfg, F2).values, lattice.divergence(F, 1))
    record("eq19-vs-20", "Eq.19", J2["via-F"].values, J2["divergence"].values)
    record("eq24-vs-20", "Eq.24", J2["via-matter"].values, J2["divergence"].values)
    record("eq9-vs-23", "Eq.23", J1["matter"].values, J1["full"].values)
    norm, relative = check_conservation(J1["matter"], lattice)
    report.add(ResidualRecord("J1-conservation", "Eq.12-conservation", norm, relative, spacing))
    first, second = eom_residual(cfg)
    report.add(ResidualRecord("eom-eq25", "Eq.25", first.norm(), _ratio(first.norm(), _norm(F1) / spacing), spacing))
    report.add(ResidualRecord("eom-eq26", "Eq.26", second.norm(), _ratio(second.norm(), _norm(F2.values) / spacing), spacing))
    return report


@dataclass(frozen=True)
class ReductionReport:
    """Largest sitewise relative deviations from the standard-gauge reference."""

    J1: float
    J2: float
    in_regime: bool
    reasons: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        """Return whether both currents agree with the reference."""
        return self.in_regime and max(self.J1, self.J2) <= REDUCTION_TOLERANCE


def reduction_regime(cfg: FieldConfiguration) -> tuple[str, ...]:
    """Return why ``cfg`` is outside the reduction regime; empty when inside."""
    reasons = []
    identity = np.eye(DIMENSION).reshape((DIMENSION, DIMENSION) + (1,) * DIMENSION)
    if not np.all(cfg.lam.values == identity):
        reasons.append("lambda is not the identity")
    if not (cfg.gauge.constant_in_velocity or cfg.gauge.lattice_data):
        reasons.append("the gauge field depends on the velocity")
    return tuple(reasons)


def akt_reduction(cfg: FieldConfiguration, strict: bool = True) -> ReductionReport:
    """Compare J1 and J2 with the independent space-time gauge reference.

    Outside the regime a strict call raises; otherwise the report is flagged."""
    reasons = reduction_regime(cfg)
    if reasons and strict:
        raise ReductionRegimeError(
            f"Configuration is outside the reduction regime: {'; '.join(reasons)}."
        )
    reference_J1, reference_J2 = reference_currents(
        generators=cfg.algebra.generators,
        gauge=cfg.gauge.values,
        matter=cfg.matter.values,
        spacing=cfg.lattice.spacing,
        g=cfg.g,
    )
    report = ReductionReport(
        J1=relative_deviation(current_J1(cfg).values, reference_J1),
        J2=relative_deviation(current_J2(cfg).values, reference_J2),
        in_regime=not reasons,
        reasons=reasons,
    )
    logger.info("Reduction comparison: %s", report)
    return report
