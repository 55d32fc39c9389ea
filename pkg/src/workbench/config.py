"""Experiment configuration: validation, defaults and field construction."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from gauge_fields import FieldConfiguration, GaugeField, MatterFamily, MatterField, MatterProfile
from kinematics import GaugeParameterSet, HarmonicProfile, ParameterFamily, VelocityFamily, VelocityField
from lattice import DIMENSION, Lattice, LatticeError
from lie_algebra import SUPPORTED_ALGEBRAS, LieAlgebra, LieAlgebraError, builtin_algebra, load_generators

from .config_parser import ConfigSyntaxError, Document, Path as KeyPath, parse_document

logger = logging.getLogger(__name__)

SUITES = ("algebra", "convergence", "fields", "noether", "reduction")
MATTER_FAMILIES = tuple(family.value for family in MatterFamily) + ("random",)
GAUGE_FAMILIES = ("constant", "linear", "trigonometric", "random")
DEFAULT_OUTPUT = "vgwb-out"


class ConfigError(ValueError):
    """Raised for a syntactically valid document with invalid content."""

    def __init__(self, line: int, key: str, message: str) -> None:
        super().__init__(f"line {line}: field {key!r}: {message}")
        self.line = line
        self.key = key


@dataclass(frozen=True)
class Section:
    """A validated configuration block; unset coefficients are None."""

    family: str
    coefficients: dict[str, Any] = field(default_factory=dict)
    flags: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs, with the documented defaults."""

    algebra: str = "su2"
    generators: Path | None = None
    extents: tuple[int, int, int, int] = (8, 8, 8, 8)
    spacing: float = 0.25
    velocity: Section = Section("trigonometric")
    matter: Section = Section("plane_wave")
    gauge: Section = Section("trigonometric")
    parameters: Section = Section("trigonometric")
    g: float = 1.0
    m: float = 1.0
    epsilon: float = 1e-3
    seed: int = 0
    suites: tuple[str, ...] = SUITES
    output: Path = Path(DEFAULT_OUTPUT)

    @classmethod
    def load(cls, file_path: str | Path) -> ExperimentConfig:
        """Read and validate a configuration file."""
        with open(file_path, encoding="utf8") as f:
            document = parse_document(f.read())
        return cls.from_document(document, Path(file_path).parent)

    @classmethod
    def from_document(cls, document: Document, base: Path = Path(".")) -> ExperimentConfig:
        """Validate a parsed document."""
        return _Validator(document, base).config()

    @property
    def lattice(self) -> Lattice:
        """Return the configured lattice."""
        return Lattice(self.extents, self.spacing)

    def with_overrides(self, seed: int | None = None, output: str | Path | None = None) -> ExperimentConfig:
        """Return the config with command-line overrides applied."""
        changes: dict[str, Any] = {}
        if seed is not None:
            changes["seed"] = seed
        if output is not None:
            changes["output"] = Path(output)
        return replace(self, **changes)

    def load_algebra(self) -> LieAlgebra:
        """Return the built-in or custom algebra."""
        if self.generators is not None:
            return load_generators(self.generators)
        return builtin_algebra(self.algebra)

    def build(self, lattice: Lattice | None = None, algebra: LieAlgebra | None = None) -> FieldConfiguration:
        """Realise the fields; omitted coefficients come from the seeded generator.

        Draws depend only on the seed and the box, so every resolution of the
        same box sees the same closed forms."""
        lattice = lattice or self.lattice
        algebra = algebra or self.load_algebra()
        rng = np.random.default_rng(self.seed)
        velocity = build_velocity(self.velocity, rng, lattice.box)
        matter = build_matter(self.matter, rng, lattice, velocity, algebra.n)
        gauge = build_gauge(self.gauge, rng, lattice, velocity, algebra.N)
        params = build_parameters(self.parameters, rng, lattice.box, algebra.N, self.epsilon)
        return FieldConfiguration.build(
            algebra,
            lattice,
            velocity,
            matter,
            gauge,
            params,
            self.g,
            self.m,
            require_nonzero=bool(self.velocity.flags.get("require_nonzero", False)),
        )


def _draw(
    section: Section, name: str, draw: Callable[[], np.ndarray]
) -> np.ndarray:
    """Return the configured coefficient or a fresh draw; drawing always happens."""
    drawn = draw()
    given = section.coefficients.get(name)
    return drawn if given is None else np.asarray(given, dtype=np.float64)


def _harmonics(rng: np.random.Generator, shape: tuple[int, ...], box: tuple[float, ...]) -> np.ndarray:
    integers = rng.integers(-1, 2, size=shape + (DIMENSION,))
    integers[np.all(integers == 0, axis=-1), 0] = 1
    return 2 * np.pi * integers / np.asarray(box)


def build_velocity(section: Section, rng: np.random.Generator, box: tuple[float, ...]) -> VelocityField:
    """Return the velocity field of a section."""
    shape = (DIMENSION,)
    matrix = _draw(section, "matrix", lambda: np.eye(DIMENSION) + rng.uniform(-0.2, 0.2, (DIMENSION, DIMENSION)))
    offset = _draw(section, "offset", lambda: rng.uniform(-1, 1, shape))
    amplitude = _draw(section, "amplitude", lambda: rng.uniform(-0.2, 0.2, shape))
    wavevector = _draw(section, "wavevector", lambda: _harmonics(rng, shape, box))
    phase = _draw(section, "phase", lambda: rng.uniform(0, 2 * np.pi, shape))
    quadratic = _draw(section, "quadratic", lambda: rng.uniform(-0.05, 0.05, (DIMENSION, DIMENSION)))
    cubic = _draw(section, "cubic", lambda: rng.uniform(-0.05, 0.05, (DIMENSION, DIMENSION)))
    match VelocityFamily(section.family):
        case VelocityFamily.AFFINE:
            return VelocityField.affine(matrix, offset)
        case VelocityFamily.TRIGONOMETRIC:
            return VelocityField.trigonometric(amplitude, wavevector, phase, matrix, offset)
        case VelocityFamily.POLYNOMIAL:
            return VelocityField.polynomial(quadratic, cubic, matrix, offset)


def build_matter(
    section: Section,
    rng: np.random.Generator,
    lattice: Lattice,
    velocity: VelocityField,
    components: int,
) -> MatterField:
    """Return the matter field of a section; ``random`` is raw lattice data."""
    pairs = _draw(section, "amplitude", lambda: rng.uniform(-1, 1, (components, 2)))
    wavevector = _draw(section, "wavevector", lambda: _harmonics(rng, (), lattice.box))
    phase = float(_draw(section, "phase", lambda: rng.uniform(0, 2 * np.pi)))
    scale = float(section.flags.get("scale", 0.5))
    if pairs.shape != (components, 2):
        raise ConfigError(1, "matter.amplitude", f"needs {components} [re, im] pairs, got shape {pairs.shape}")
    if section.family == "random":
        return MatterField.random(lattice, components, rng, scale)
    profile = MatterProfile(MatterFamily(section.family), pairs[:, 0] + 1j * pairs[:, 1], wavevector, phase)
    return MatterField.from_profile(profile, lattice, velocity if section.flags.get("pullback") else None)


def build_gauge(
    section: Section,
    rng: np.random.Generator,
    lattice: Lattice,
    velocity: VelocityField,
    adjoint: int,
) -> GaugeField:
    """Return the gauge field of a section, pulled back through the velocity field."""
    shape = (adjoint, DIMENSION)
    scale = float(section.flags.get("scale", 0.5))
    offset = _draw(section, "offset", lambda: rng.uniform(-scale, scale, shape))
    linear = _draw(section, "linear", lambda: rng.uniform(-scale, scale, shape + (DIMENSION,)))
    amplitude = _draw(section, "amplitude", lambda: rng.uniform(-scale, scale, shape))
    wavevector = _draw(section, "wavevector", lambda: _harmonics(rng, shape, lattice.box))
    phase = _draw(section, "phase", lambda: rng.uniform(0, 2 * np.pi, shape))
    keep_linear = section.family in ("linear", "random")
    keep_harmonic = section.family in ("trigonometric", "random")
    profile = HarmonicProfile(
        shape,
        offset=offset,
        linear=linear if keep_linear else None,
        amplitude=amplitude if keep_harmonic else None,
        wavevector=wavevector if keep_harmonic else None,
        phase=phase if keep_harmonic else None,
    )
    independent = bool(section.flags.get("velocity_independent", False))
    return GaugeField.from_profile(profile, velocity, lattice, independent)


def build_parameters(
    section: Section,
    rng: np.random.Generator,
    box: tuple[float, ...],
    adjoint: int,
    epsilon: float,
) -> GaugeParameterSet:
    """Return the gauge parameters of a section at amplitude ``epsilon``."""
    shape = (adjoint,)
    offset = _draw(section, "offset", lambda: rng.uniform(-1, 1, shape))
    linear = _draw(section, "linear", lambda: rng.uniform(-1, 1, shape + (DIMENSION,)))
    amplitude = _draw(section, "amplitude", lambda: rng.uniform(-1, 1, shape))
    wavevector = _draw(section, "wavevector", lambda: _harmonics(rng, shape, box))
    phase = _draw(section, "phase", lambda: rng.uniform(0, 2 * np.pi, shape))
    match ParameterFamily(section.family):
        case ParameterFamily.CONSTANT:
            return GaugeParameterSet.constant(offset, epsilon)
        case ParameterFamily.LINEAR:
            return GaugeParameterSet.linear(linear, offset, epsilon)
        case ParameterFamily.TRIGONOMETRIC:
            return GaugeParameterSet.trigonometric(amplitude, wavevector, phase, offset, epsilon)


SECTION_SCHEMA: dict[str, dict[str, Any]] = {
    "velocity": {
        "families": tuple(family.value for family in VelocityFamily),
        "default": "trigonometric",
        "coefficients": {
            "matrix": (DIMENSION, DIMENSION),
            "offset": (DIMENSION,),
            "amplitude": (DIMENSION,),
            "wavevector": (DIMENSION, DIMENSION),
            "phase": (DIMENSION,),
            "quadratic": (DIMENSION, DIMENSION),
            "cubic": (DIMENSION, DIMENSION),
        },
        "flags": {"require_nonzero": bool},
    },
    "matter": {
        "families": MATTER_FAMILIES,
        "default": "plane_wave",
        "coefficients": {"amplitude": ("n", 2), "wavevector": (DIMENSION,), "phase": ()},
        "flags": {"scale": float, "pullback": bool},
    },
    "gauge": {
        "families": GAUGE_FAMILIES,
        "default": "trigonometric",
        "coefficients": {
            "offset": ("N", DIMENSION),
            "linear": ("N", DIMENSION, DIMENSION),
            "amplitude": ("N", DIMENSION),
            "wavevector": ("N", DIMENSION, DIMENSION),
            "phase": ("N", DIMENSION),
        },
        "flags": {"velocity_independent": bool, "scale": float},
    },
    "parameters": {
        "families": tuple(family.value for family in ParameterFamily),
        "default": "trigonometric",
        "coefficients": {
            "offset": ("N",),
            "linear": ("N", DIMENSION),
            "amplitude": ("N",),
            "wavevector": ("N", DIMENSION),
            "phase": ("N",),
        },
        "flags": {},
    },
}

TOP_LEVEL = {"algebra", "generators", "lattice", "g", "m", "epsilon", "seed", "suites", "output"} | set(SECTION_SCHEMA)


class _Validator:
    """Walk a parsed document and raise ConfigError at the first problem."""

    def __init__(self, document: Document, base: Path) -> None:
        self.document = document
        self.base = base

    def error(self, path: KeyPath, message: str) -> ConfigError:
        key = ".".join(str(part) for part in path)
        return ConfigError(self.document.line(path), key, message)

    def number(self, value: Any, path: KeyPath, check: Callable[[float], bool], rule: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(path, f"expected a number, got {value!r}")
        if not check(value):
            raise self.error(path, f"{rule}, got {value!r}")
        return float(value)

    def config(self) -> ExperimentConfig:
        root = self.document.root
        for key in root:
            if key not in TOP_LEVEL:
                raise self.error((key,), f"unknown key; expected one of {', '.join(sorted(TOP_LEVEL))}")
        changes: dict[str, Any] = {}
        algebra = root.get("algebra", "su2")
        if not isinstance(algebra, str) or algebra.lower() not in SUPPORTED_ALGEBRAS:
            raise self.error(("algebra",), f"expected one of {', '.join(SUPPORTED_ALGEBRAS)}")
        changes["algebra"] = algebra.lower()
        adjoint, representation = {"u1": (1, 1), "su2": (3, 2), "su3": (8, 3)}[algebra.lower()]
        if "generators" in root:
            if not isinstance(root["generators"], str):
                raise self.error(("generators",), "expected a file path")
            path = self.base / root["generators"]
            try:
                custom = load_generators(path)
            except (OSError, LieAlgebraError) as error:
                raise self.error(("generators",), str(error)) from error
            changes["generators"] = path
            adjoint, representation = custom.N, custom.n
        if "lattice" in root:
            changes.update(self.lattice(root["lattice"]))
        sizes = {"N": adjoint, "n": representation}
        for name in SECTION_SCHEMA:
            if name in root:
                changes[name] = self.section(name, root[name], sizes)
        if "g" in root:
            changes["g"] = self.number(root["g"], ("g",), lambda v: v > 0, "the coupling must be positive")
        if "m" in root:
            changes["m"] = self.number(root["m"], ("m",), lambda v: v >= 0, "the mass must be non-negative")
        if "epsilon" in root:
            changes["epsilon"] = self.number(root["epsilon"], ("epsilon",), lambda v: v > 0, "epsilon must be positive")
        if "seed" in root:
            seed = root["seed"]
            if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
                raise self.error(("seed",), f"expected an unsigned 64-bit integer, got {seed!r}")
            changes["seed"] = seed
        if "suites" in root:
            suites = root["suites"]
            if not isinstance(suites, list) or not suites:
                raise self.error(("suites",), "expected a non-empty list of suite names")
            for index, suite in enumerate(suites):
                if suite not in SUITES:
                    raise self.error(("suites", index), f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
            changes["suites"] = tuple(suite for suite in SUITES if suite in suites)
        extents = changes.get("extents", ExperimentConfig.extents)
        if "convergence" in changes.get("suites", SUITES) and len(set(extents)) != 1:
            raise self.error(
                ("lattice", "extents"), f"the convergence suite needs equal extents, got {list(extents)}"
            )
        if "output" in root:
            if not isinstance(root["output"], str) or not root["output"]:
                raise self.error(("output",), "expected a directory path")
            changes["output"] = Path(root["output"])
        config = ExperimentConfig(**changes)
        logger.debug("Validated configuration: %s", config)
        return config

    def lattice(self, block: Any) -> dict[str, Any]:
        if not isinstance(block, dict):
            raise self.error(("lattice",), "expected an object with 'extents' and 'spacing'")
        result: dict[str, Any] = {}
        for key in block:
            if key not in ("extents", "spacing"):
                raise self.error(("lattice", key), "unknown key; expected 'extents' or 'spacing'")
        if "extents" in block:
            extents = block["extents"]
            if not isinstance(extents, list) or len(extents) != DIMENSION:
                raise self.error(("lattice", "extents"), f"expected {DIMENSION} integers")
            for axis, extent in enumerate(extents):
                if isinstance(extent, bool) or not isinstance(extent, int):
                    raise self.error(("lattice", "extents", axis), f"expected an integer, got {extent!r}")
            result["extents"] = tuple(extents)
        if "spacing" in block:
            result["spacing"] = self.number(block["spacing"], ("lattice", "spacing"), lambda v: v > 0, "the spacing must be positive")
        try:
            Lattice(result.get("extents", (8, 8, 8, 8)), result.get("spacing", 0.25))
        except LatticeError as error:
            raise self.error(("lattice", "extents"), str(error)) from error
        return result

    def section(self, name: str, block: Any, sizes: dict[str, int]) -> Section:
        schema = SECTION_SCHEMA[name]
        if not isinstance(block, dict):
            raise self.error((name,), "expected an object")
        family = block.get("family", schema["default"])
        if family not in schema["families"]:
            raise self.error((name, "family"), f"expected one of {', '.join(schema['families'])}, got {family!r}")
        coefficients: dict[str, Any] = {}
        flags: dict[str, Any] = {}
        for key, value in block.items():
            path = (name, key)
            if key == "family":
                continue
            if key in schema["coefficients"]:
                shape = tuple(sizes.get(size, size) for size in schema["coefficients"][key])
                coefficients[key] = self.array(value, path, shape)
            elif key in schema["flags"]:
                kind = schema["flags"][key]
                if kind is bool:
                    if not isinstance(value, bool):
                        raise self.error(path, f"expected true or false, got {value!r}")
                    flags[key] = value
                else:
                    flags[key] = self.number(value, path, lambda v: v > 0, "the value must be positive")
            else:
                allowed = ", ".join(sorted(set(schema["coefficients"]) | set(schema["flags"]) | {"family"}))
                raise self.error(path, f"unknown key; expected one of {allowed}")
        return Section(family, coefficients, flags)

    def array(self, value: Any, path: KeyPath, shape: tuple[int, ...]) -> np.ndarray:
        if not shape:
            return np.asarray(self.number(value, path, lambda v: True, ""))
        if not isinstance(value, list) or len(value) != shape[0]:
            raise self.error(path, f"expected a list of {shape[0]} entries for shape {shape}")
        return np.array([self.array(item, path + (index,), shape[1:]) for index, item in enumerate(value)])


def load_config(file_path: str | Path) -> ExperimentConfig:
    """Read a configuration, mapping syntax errors through unchanged."""
    try:
        return ExperimentConfig.load(file_path)
    except ConfigSyntaxError:
        raise
    except LieAlgebraError as error:
        raise ConfigError(1, "algebra", str(error)) from error
