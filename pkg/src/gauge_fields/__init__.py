"""Matter and gauge fields, gauge transformations and the model Lagrangian."""

from .fields import (
    GLOBAL_EPSILONS,
    CompositeConnection,
    FieldConfiguration,
    FieldConfigurationError,
    GaugeField,
    Jets,
    LagrangianDerivativeError,
    MatterFamily,
    MatterField,
    MatterProfile,
    PartialsReport,
    apply_transformation,
    check_partials,
    configuration_jets,
    covariant_gradient,
    covariant_gradient_from_jets,
    curvature,
    dL_dgrad_connection,
    dL_dgrad_gauge,
    dL_dgrad_matter,
    defect_slope,
    global_invariance_defect,
    global_invariance_defects,
    global_invariance_slope,
    lagrangian_density,
    lagrangian_from_jets,
    lattice_dispersion_mass,
    local_invariance_ratio,
    local_variation,
    random_configuration,
    transform_gauge,
    transform_matter,
    velocity_frame_increment,
)

__all__ = [
    "GLOBAL_EPSILONS",
    "CompositeConnection",
    "FieldConfiguration",
    "FieldConfigurationError",
    "GaugeField",
    "Jets",
    "LagrangianDerivativeError",
    "MatterFamily",
    "MatterField",
    "MatterProfile",
    "PartialsReport",
    "apply_transformation",
    "check_partials",
    "configuration_jets",
    "covariant_gradient",
    "covariant_gradient_from_jets",
    "curvature",
    "dL_dgrad_connection",
    "dL_dgrad_gauge",
    "dL_dgrad_matter",
    "defect_slope",
    "global_invariance_defect",
    "global_invariance_defects",
    "global_invariance_slope",
    "lagrangian_density",
    "lagrangian_from_jets",
    "lattice_dispersion_mass",
    "local_invariance_ratio",
    "local_variation",
    "random_configuration",
    "transform_gauge",
    "transform_matter",
    "velocity_frame_increment",
]
