"""Strength tensors, Noether currents, conservation and reduction checks."""

from .noether import (
    ConditionReport,
    CurrentField,
    CurrentKind,
    ReductionRegimeError,
    ReductionReport,
    ResidualRecord,
    StrengthField,
    StrengthKind,
    akt_reduction,
    check_conditions,
    check_conservation,
    covariance_defect_field,
    covariance_probe,
    covariance_slope,
    covariant_divergence_F2,
    current_imaginary_residue,
    current_J1,
    current_J1_forms,
    current_j2,
    current_J2,
    current_J2_forms,
    eom_residual,
    gauge_covariance_F2,
    identity_side_report,
    matter_contraction,
    reduction_regime,
    relative_deviation,
    richardson_covariance_defect,
    strength_F,
    strength_F1,
    strength_F2,
)
from .reference import reference_currents

__all__ = [
    "ConditionReport",
    "CurrentField",
    "CurrentKind",
    "ReductionRegimeError",
    "ReductionReport",
    "ResidualRecord",
    "StrengthField",
    "StrengthKind",
    "akt_reduction",
    "check_conditions",
    "check_conservation",
    "covariance_defect_field",
    "covariance_probe",
    "covariance_slope",
    "covariant_divergence_F2",
    "current_imaginary_residue",
    "current_J1",
    "current_J1_forms",
    "current_j2",
    "current_J2",
    "current_J2_forms",
    "eom_residual",
    "gauge_covariance_F2",
    "identity_side_report",
    "matter_contraction",
    "reduction_regime",
    "reference_currents",
    "relative_deviation",
    "richardson_covariance_defect",
    "strength_F",
    "strength_F1",
    "strength_F2",
]
