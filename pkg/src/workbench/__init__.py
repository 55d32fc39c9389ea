"""Velocity-gauge workbench: configuration, check suites and the vgwb command."""

from .checks import CHECKS, REGISTRY, Check, CheckRecord, Mode, Status, SuiteReport, list_checks
from .config import ConfigError, ExperimentConfig, Section, load_config
from .config_parser import ConfigSyntaxError, Document, parse_document
from .suites import (
    algebra_suite,
    check_resolutions,
    convergence_suite,
    dump_fields,
    fields_suite,
    noether_suite,
    plane_wave_configuration,
    reduce_akt,
    reduction_configuration,
    reduction_suite,
    run_suites,
)
from .workbench import build_parser, main

__all__ = [
    "CHECKS",
    "REGISTRY",
    "Check",
    "CheckRecord",
    "ConfigError",
    "ConfigSyntaxError",
    "Document",
    "ExperimentConfig",
    "Mode",
    "Section",
    "Status",
    "SuiteReport",
    "algebra_suite",
    "build_parser",
    "check_resolutions",
    "convergence_suite",
    "dump_fields",
    "fields_suite",
    "list_checks",
    "load_config",
    "main",
    "noether_suite",
    "parse_document",
    "plane_wave_configuration",
    "reduce_akt",
    "reduction_configuration",
    "reduction_suite",
    "run_suites",
]
