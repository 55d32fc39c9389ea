"""The check suites, run in dependency order."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from gauge_fields import (
    GLOBAL_EPSILONS,
    FieldConfiguration,
    FieldConfigurationError,
    GaugeField,
    MatterFamily,
    MatterField,
    MatterProfile,
    check_partials,
    defect_slope,
    global_invariance_defects,
    lagrangian_density,
    lattice_dispersion_mass,
    local_invariance_ratio,
    local_variation,
    random_configuration,
)
from kinematics import GaugeParameterSet, VelocityField, lambda_error
from lattice import DIMENSION, Lattice, export_csv
from lie_algebra import LieAlgebra, antisymmetry_residual, builtin_algebra, closure_residual, jacobi_table
from noether import (
    akt_reduction,
    check_conditions,
    check_conservation,
    covariance_probe,
    covariance_slope,
    current_J1,
    current_J2,
    current_j2,
    eom_residual,
    identity_side_report,
    relative_deviation,
    richardson_covariance_defect,
    strength_F2,
)

from .checks import EXACT_TOLERANCE, SuiteReport
from .config import ConfigError, ExperimentConfig, build_velocity

logger = logging.getLogger(__name__)

RANDOM_SEEDS = 20
MIXING_SEEDS = 10
CONSERVATION_ALGEBRAS = ("u1", "su2", "su3")
REDUCTION_ALGEBRAS = ("u1", "su2")
COVARIANCE_EPSILONS = (1e-2, 1e-3)


def algebra_suite(algebra: LieAlgebra, report: SuiteReport, out: Path | None = None) -> None:
    """Closure, Jacobi and antisymmetry of the structure constants; writes jacobi.csv."""
    case = algebra.name
    report.add("algebra-closure", closure_residual(algebra.generators, algebra.structure_constants), case)
    table = np.max(np.abs(jacobi_table(algebra)), axis=0)
    report.add("algebra-jacobi", float(np.max(table, initial=0.0)), case)
    report.add("algebra-antisymmetry", antisymmetry_residual(algebra), case)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        triples = list(np.ndindex(*table.shape))
        frame = pd.DataFrame(
            {
                "alpha": [t[0] for t in triples],
                "beta": [t[1] for t in triples],
                "gamma": [t[2] for t in triples],
                "residual": [table[t] for t in triples],
            }
        )
        frame.to_csv(out / "jacobi.csv", index=False, float_format="%.17g")
        logger.debug("Wrote %d Jacobi triples", len(frame))


def check_resolutions(resolutions: Sequence[int]) -> tuple[int, ...]:
    """Return the resolutions if each one doubles the previous."""
    resolutions = tuple(int(r) for r in resolutions)
    if len(resolutions) < 2:
        raise ConfigError(1, "resolutions", f"at least two resolutions are needed, got {list(resolutions)}")
    for coarse, fine in zip(resolutions, resolutions[1:]):
        if fine != 2 * coarse:
            raise ConfigError(
                1, "resolutions", f"each resolution must double the previous one, got {coarse} then {fine}"
            )
    return resolutions


def convergence_suite(
    config: ExperimentConfig,
    resolutions: Sequence[int],
    report: SuiteReport,
    out: Path | None = None,
) -> pd.DataFrame:
    """Error ratios of the lattice partial and of lambda between successive resolutions.

    Every resolution r uses extents (r, r, r, r) over the box of the configured
    lattice, so coefficients drawn from the seed are the same closed forms."""
    resolutions = check_resolutions(resolutions)
    if len(set(config.extents)) != 1:
        raise ConfigError(
            1, "lattice.extents", f"the convergence suite needs equal extents, got {list(config.extents)}"
        )
    length = config.extents[0] * config.spacing
    lattices = []
    for resolution in resolutions:
        try:
            lattices.append(Lattice((resolution,) * DIMENSION, length / resolution))
        except ValueError as error:
            raise ConfigError(1, "resolutions", str(error)) from error
    rows = []
    for lattice in lattices:
        x = lattice.coordinates()
        wave = 2 * np.pi / length
        numeric = lattice.partial(np.sin(wave * x[0]), 0)
        partial_error = float(np.max(np.abs(numeric - wave * np.cos(wave * x[0]))))
        velocity = build_velocity(config.velocity, np.random.default_rng(config.seed), lattice.box)
        lam_error = float(np.max(lambda_error(velocity, lattice)))
        for name, error in (("partial-convergence", partial_error), ("lambda-convergence", lam_error)):
            rows.append({"check": name, "resolution": lattice.extents[0], "h": lattice.spacing, "error": error})
    table = pd.DataFrame(rows, columns=["check", "resolution", "h", "error"])
    ratios = []
    for name, group in table.groupby("check", sort=False):
        errors = group["error"].to_numpy()
        ratios.append(pd.Series(np.nan, index=group.index[:1]))
        for step in range(1, len(errors)):
            case = f"{resolutions[step - 1]}/{resolutions[step]}"
            coarse, fine = errors[step - 1], errors[step]
            ratio = coarse / fine if fine else float("inf")
            ratios.append(pd.Series(ratio, index=group.index[step : step + 1]))
            if max(coarse, fine) <= EXACT_TOLERANCE:
                report.add(name, max(coarse, fine), case, exact=True)
            else:
                report.add(name, ratio, case)
    table["ratio"] = pd.concat(ratios)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        table.to_csv(out / "convergence.csv", index=False, float_format="%.17g")
    return table


def fields_suite(cfg: FieldConfiguration, report: SuiteReport, seed: int = 0) -> None:
    """Lagrangian-derivative oracle, global invariance slope and the local variation."""
    case = cfg.algebra.name
    partials = check_partials(cfg, seed=seed, strict=False)
    report.add("oracle-matter", partials.matter, case)
    report.add("oracle-gauge", partials.gauge, case)
    slopes = {case: cfg}
    for name in ("u1", "su2"):
        if name != case:
            slopes[name] = random_configuration(builtin_algebra(name), cfg.lattice, seed)
    for name, target in slopes.items():
        try:
            defects = global_invariance_defects(target)
            worst = max(defects)
            if worst <= EXACT_TOLERANCE:
                report.add("global-invariance", worst, name, exact=True)
            else:
                report.add("global-invariance", defect_slope(GLOBAL_EPSILONS, defects), name)
        except FieldConfigurationError as error:
            logger.warning("global invariance for %s: %s", name, error)
            report.skip("global-invariance", name)
    scale = lagrangian_density(cfg).norm()
    variation = local_variation(cfg, cfg.params.epsilon).norm()
    logger.info("Local variation relative to L: %.3e", variation / scale if scale else 0.0)
    periodic = covariance_probe(cfg.algebra, cfg.g, seed)
    report.add("local-invariance", local_invariance_ratio(periodic, cfg.params.epsilon), case)


def plane_wave_configuration(lattice: Lattice) -> FieldConfiguration:
    """u1, D = 0 and a real standing wave along x_1 with the lattice dispersion mass."""
    algebra = builtin_algebra("u1")
    wave = 2 * np.pi / lattice.box[0]
    wavevector = np.zeros(DIMENSION)
    wavevector[0] = wave
    matter = MatterField.from_profile(MatterProfile(MatterFamily.STANDING_WAVE, [1.0], wavevector), lattice)
    return FieldConfiguration.build(
        algebra,
        lattice,
        VelocityField.identity(),
        matter,
        GaugeField.zero(lattice, algebra.N),
        GaugeParameterSet.zero(algebra.N),
        m=lattice_dispersion_mass(wave, lattice.spacing),
    )


def noether_suite(cfg: FieldConfiguration, report: SuiteReport, seed: int = 0) -> None:
    """Antisymmetry, structural conservation, mixing, covariance and the logged diagnostics."""
    case = cfg.algebra.name
    lattice = cfg.lattice
    report.add("F2-antisymmetry", strength_F2(cfg).antisymmetry_defect(), case)
    _, relative = check_conservation(current_J2(cfg), lattice)
    report.add("J2-conservation", relative, case)

    for name in CONSERVATION_ALGEBRAS:
        algebra = builtin_algebra(name)
        worst = 0.0
        for offset in range(RANDOM_SEEDS):
            sample = random_configuration(algebra, lattice, seed + offset)
            worst = max(worst, check_conservation(current_J2(sample), lattice)[1])
        report.add("J2-conservation-random", worst, name)

    worst = 0.0
    for offset in range(MIXING_SEEDS):
        sample = random_configuration(cfg.algebra, lattice, seed + offset, affine=True)
        mixed = np.einsum("am...,nm...->an...", current_J1(sample).values, sample.lam.values)
        worst = max(worst, relative_deviation(current_j2(sample).values, mixed))
    report.add("mixing", worst, case)

    probes = {"su2": builtin_algebra("su2")}
    if case != "su2":
        probes[case] = cfg.algebra
    for name, algebra in probes.items():
        probe = covariance_probe(algebra, cfg.g, seed)
        if algebra.abelian:
            probe = probe.with_params(probe.params.global_part())
            defect = max(richardson_covariance_defect(probe, e) for e in COVARIANCE_EPSILONS)
            report.add("F2-covariance", defect, name, exact=defect <= EXACT_TOLERANCE)
        else:
            report.add("F2-covariance", covariance_slope(probe, COVARIANCE_EPSILONS), name)

    first, _ = eom_residual(plane_wave_configuration(lattice))
    report.add("eq25-plane-wave", float(np.max(np.abs(first.values), initial=0.0)), "u1")

    for record in check_conditions(cfg):
        report.add(record.name, record.relative, case)
    for record in identity_side_report(cfg):
        report.add(record.name, record.relative, case)


def reduction_configuration(algebra: LieAlgebra, lattice: Lattice, seed: int = 0, g: float = 1.0) -> FieldConfiguration:
    """Identity velocity, random matter and random velocity-independent D given as lattice data."""
    rng = np.random.default_rng(seed)
    matter = MatterField.random(lattice, algebra.n, rng)
    values = rng.uniform(-0.5, 0.5, size=(algebra.N, DIMENSION) + lattice.extents)
    gauge = GaugeField(lattice, values, velocity_independent=True)
    return FieldConfiguration.build(
        algebra, lattice, VelocityField.identity(), matter, gauge, GaugeParameterSet.zero(algebra.N), g
    )


def reduction_suite(cfg: FieldConfiguration, report: SuiteReport, seed: int = 0) -> None:
    """Compare both currents with the space-time gauge reference for u1 and su2."""
    for name in REDUCTION_ALGEBRAS:
        sample = reduction_configuration(builtin_algebra(name), cfg.lattice, seed, cfg.g)
        comparison = akt_reduction(sample)
        report.add("akt-J1", comparison.J1, name)
        report.add("akt-J2", comparison.J2, name)


def reduce_akt(cfg: FieldConfiguration, report: SuiteReport) -> None:
    """Compare the currents of a configured reduction-regime run; raises outside the regime."""
    comparison = akt_reduction(cfg)
    report.add("akt-J1", comparison.J1, cfg.algebra.name)
    report.add("akt-J2", comparison.J2, cfg.algebra.name)


def dump_fields(cfg: FieldConfiguration, directory: Path) -> None:
    """Write phi, D, lambda, F2 and J2 snapshots as CSV."""
    directory.mkdir(parents=True, exist_ok=True)
    snapshots = {
        "phi": cfg.matter.field,
        "D": cfg.gauge.field,
        "lambda": cfg.lam.field,
        "F2": strength_F2(cfg).field,
        "J2": current_J2(cfg).field,
    }
    for name, snapshot in snapshots.items():
        export_csv(snapshot, directory / f"{name}.csv")
    logger.info("Wrote %d field snapshots to %s", len(snapshots), directory)


def run_suites(config: ExperimentConfig, report: SuiteReport, out: Path | None = None) -> FieldConfiguration | None:
    """Run the selected suites: algebra, convergence, fields, noether, reduction."""
    algebra = config.load_algebra()
    cfg = None
    if "algebra" in config.suites:
        algebra_suite(algebra, report, out)
    if "convergence" in config.suites:
        convergence_suite(config, (config.extents[0], 2 * config.extents[0]), report, out)
    if any(suite in config.suites for suite in ("fields", "noether", "reduction")):
        cfg = config.build(algebra=algebra)
    if "fields" in config.suites:
        fields_suite(cfg, report, config.seed)
    if "noether" in config.suites:
        noether_suite(cfg, report, config.seed)
    if "reduction" in config.suites:
        reduction_suite(cfg, report, config.seed)
    return cfg
