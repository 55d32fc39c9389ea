"""Test fixtures."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

from gauge_fields import FieldConfiguration, random_configuration
from lattice import Lattice
from lie_algebra import LieAlgebra, builtin_algebra

ASSET_ROOT = Path(__file__).parent.resolve() / "assets"


@dataclass(frozen=True)
class ConfigTestFile:
    """A sample configuration: ``passN.json`` must load, ``failN.json`` must be rejected."""

    path: Path
    result: bool

    @classmethod
    def from_path(cls, path: Path) -> ConfigTestFile:
        """Read the expected outcome from the file name."""
        if match := re.fullmatch(r"(pass|fail)\d+", path.stem):
            return cls(path, match.group(1) == "pass")
        raise ValueError(f"{path.name}: sample names are passN.json or failN.json.")

    @property
    def name(self) -> str:
        """Return the stem, used as the test id."""
        return self.path.stem


CONFIG_ASSETS = sorted(
    (ConfigTestFile.from_path(path) for path in (ASSET_ROOT / "test_workbench").glob("*.json")),
    key=lambda sample: sample.name,
)


@pytest.fixture(params=CONFIG_ASSETS, ids=lambda sample: sample.name)
def config_sample(request: pytest.FixtureRequest) -> Generator[ConfigTestFile, None, None]:
    """Yield a sample configuration to test."""
    yield request.param


@dataclass
class ConfigFixture:
    """Hold a configuration written to disk and the directory reports go to."""

    path: Path
    out: Path


def write_config(directory: Path, content: dict, name: str = "config.json") -> ConfigFixture:
    """Write ``content`` as a configuration whose output lands in ``directory``."""
    out = directory / "out"
    content = {"output": str(out)} | content
    path = directory / name
    path.write_text(json.dumps(content, indent=2), encoding="utf8")
    return ConfigFixture(path=path, out=out)


@pytest.fixture
def small_config(tmp_path: Path) -> Generator[ConfigFixture, None, None]:
    """Yield a 4^4 su2 configuration running every suite but convergence."""
    yield write_config(
        tmp_path,
        {
            "algebra": "su2",
            "lattice": {"extents": [4, 4, 4, 4], "spacing": 0.5},
            "suites": ["algebra", "fields", "noether", "reduction"],
        },
    )


@pytest.fixture
def small_lattice() -> Generator[Lattice, None, None]:
    """Yield a 4^4 lattice."""
    yield Lattice((4, 4, 4, 4), 0.5)


@pytest.fixture
def lattice() -> Generator[Lattice, None, None]:
    """Yield the default 8^4 lattice with h = 0.25."""
    yield Lattice()


@pytest.fixture(params=["u1", "su2", "su3"])
def algebra(request: pytest.FixtureRequest) -> Generator[LieAlgebra, None, None]:
    """Yield each built-in algebra."""
    yield builtin_algebra(request.param)


@pytest.fixture
def su2() -> Generator[LieAlgebra, None, None]:
    """Yield su2."""
    yield builtin_algebra("su2")


@pytest.fixture
def random_cfg(algebra: LieAlgebra, small_lattice: Lattice) -> Generator[FieldConfiguration, None, None]:
    """Yield a seeded random configuration for each built-in algebra."""
    yield random_configuration(algebra, small_lattice, seed=3)


@pytest.fixture
def affine_cfg(algebra: LieAlgebra, small_lattice: Lattice) -> Generator[FieldConfiguration, None, None]:
    """Yield a seeded random configuration with an affine velocity field."""
    yield random_configuration(algebra, small_lattice, seed=5, affine=True)


@pytest.fixture
def rng() -> Generator[np.random.Generator, None, None]:
    """Yield a seeded generator."""
    yield np.random.default_rng(2024)
