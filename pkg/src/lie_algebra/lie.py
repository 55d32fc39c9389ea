"""Lie algebra representations and structure constants."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Self

import numpy as np

logger = logging.getLogger(__name__)

NORMALISATION = 0.5
TOLERANCE = 1e-12
SUPPORTED_ALGEBRAS = ("u1", "su2", "su3")


class LieAlgebraError(ValueError):
    """Raised when a generator set does not define a valid algebra."""


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return AB - BA."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise LieAlgebraError(
            f"Commutator needs two square matrices of equal size, got {a.shape} and {b.shape}."
        )
    return a @ b - b @ a


def extract_structure_constants(
    generators: np.ndarray, normalisation: float = NORMALISATION
) -> np.ndarray:
    """Return C[gamma, alpha, beta] from [T_a, T_b] = i C^g_ab T_g.

    The generators must be trace-orthogonal, tr(T_a T_b) = k delta_ab,
    with k equal to ``normalisation``."""
    generators = np.asarray(generators, dtype=np.complex128)
    if generators.ndim != 3 or generators.shape[1] != generators.shape[2]:
        raise LieAlgebraError(
            f"Generators must be an array of square matrices, got shape {generators.shape}."
        )
    gram = np.einsum("aij,bji->ab", generators, generators)
    size = generators.shape[0]
    for alpha in range(size):
        for beta in range(size):
            expected = normalisation if alpha == beta else 0.0
            if abs(gram[alpha, beta] - expected) > TOLERANCE:
                raise LieAlgebraError(
                    f"Generators {alpha} and {beta} are not trace-orthogonal with "
                    f"normalisation {normalisation}: tr = {gram[alpha, beta]:.3e}."
                )
    products = np.einsum("aij,bjk->abik", generators, generators)
    commutators = products - products.transpose(1, 0, 2, 3)
    traces = np.einsum("abij,gji->gab", commutators, generators) / (1j * normalisation)
    residue = np.max(np.abs(traces.imag), initial=0.0)
    if residue > TOLERANCE:
        raise LieAlgebraError(
            f"Structure constants are not real: imaginary residue {residue:.3e}."
        )
    constants = traces.real
    return 0.5 * (constants - constants.transpose(0, 2, 1))


def jacobi_table(structure_constants: LieAlgebra | np.ndarray) -> np.ndarray:
    """Return the cyclic Jacobi sum for every (delta, alpha, beta, gamma)."""
    c = _constants(structure_constants)
    term = np.einsum("dae,ebg->dabg", c, c)
    return term + term.transpose(0, 2, 3, 1) + term.transpose(0, 3, 1, 2)


def verify_jacobi(structure_constants: LieAlgebra | np.ndarray) -> float:
    """Return the largest Jacobi residual over all index tuples."""
    return float(np.max(np.abs(jacobi_table(structure_constants)), initial=0.0))


def closure_residual(generators: np.ndarray, structure_constants: np.ndarray) -> float:
    """Return max |[T_a, T_b] - i C^g_ab T_g| componentwise."""
    products = np.einsum("aij,bjk->abik", generators, generators)
    commutators = products - products.transpose(1, 0, 2, 3)
    expansion = 1j * np.einsum("gab,gij->abij", structure_constants, generators)
    return float(np.max(np.abs(commutators - expansion), initial=0.0))


def antisymmetry_residual(structure_constants: LieAlgebra | np.ndarray) -> float:
    """Return the largest violation of total antisymmetry of C."""
    c = _constants(structure_constants)
    residuals = [
        np.abs(c + c.transpose(0, 2, 1)),
        np.abs(c + c.transpose(1, 0, 2)),
        np.abs(c + c.transpose(2, 1, 0)),
    ]
    return float(max(np.max(r, initial=0.0) for r in residuals))


def _constants(structure_constants: LieAlgebra | np.ndarray) -> np.ndarray:
    if isinstance(structure_constants, LieAlgebra):
        return structure_constants.structure_constants
    return np.asarray(structure_constants, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Generators T_a of an n-dimensional representation and their constants.

    ``structure_constants[g, a, b]`` holds C^g_ab. All invariants are checked
    on construction; a set that fails any of them is rejected, never repaired."""

    name: str
    generators: np.ndarray
    structure_constants: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        generators = np.array(self.generators, dtype=np.complex128)
        if generators.ndim != 3 or generators.shape[1] != generators.shape[2]:
            raise LieAlgebraError(
                f"Algebra {self.name!r}: generators must have shape (N, n, n), got {generators.shape}."
            )
        for alpha, generator in enumerate(generators):
            defect = np.max(np.abs(generator - generator.conj().T))
            if defect > TOLERANCE:
                raise LieAlgebraError(
                    f"Algebra {self.name!r}: generator {alpha} is not Hermitian (defect {defect:.3e})."
                )
        if self.structure_constants is None:
            constants = extract_structure_constants(generators)
        else:
            constants = np.array(self.structure_constants, dtype=np.float64)
        size = generators.shape[0]
        if constants.shape != (size, size, size):
            raise LieAlgebraError(
                f"Algebra {self.name!r}: structure constants must have shape {(size,) * 3}."
            )
        if np.any(constants != -constants.transpose(0, 2, 1)):
            raise LieAlgebraError(
                f"Algebra {self.name!r}: structure constants are not antisymmetric in the lower indices."
            )
        closure = closure_residual(generators, constants)
        if closure > TOLERANCE:
            raise LieAlgebraError(
                f"Algebra {self.name!r}: commutators are not closed by C (residual {closure:.3e})."
            )
        jacobi = verify_jacobi(constants)
        if jacobi > TOLERANCE:
            raise LieAlgebraError(
                f"Algebra {self.name!r}: Jacobi identity fails (residual {jacobi:.3e})."
            )
        generators.setflags(write=False)
        constants.setflags(write=False)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "structure_constants", constants)

    @property
    def N(self) -> int:
        """Adjoint dimension (number of generators)."""
        return self.generators.shape[0]

    @property
    def n(self) -> int:
        """Representation dimension."""
        return self.generators.shape[1]

    @property
    def abelian(self) -> bool:
        """Return whether every structure constant vanishes."""
        return not np.any(self.structure_constants)

    @classmethod
    def from_generators(cls, name: str, generators: np.ndarray) -> Self:
        """Build an algebra, extracting its structure constants."""
        return cls(name=name, generators=generators)


def _pauli() -> np.ndarray:
    return np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=np.complex128,
    )


def _gell_mann() -> np.ndarray:
    matrices = np.zeros((8, 3, 3), dtype=np.complex128)
    for index, (j, k) in enumerate([(0, 1), (0, 2), (1, 2)]):
        symmetric = (0, 3, 5)[index]
        matrices[symmetric, j, k] = matrices[symmetric, k, j] = 1
        matrices[symmetric + 1, j, k] = -1j
        matrices[symmetric + 1, k, j] = 1j
    matrices[2] = np.diag([1, -1, 0])
    matrices[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return matrices


def builtin_algebra(name: str) -> LieAlgebra:
    """Return one of the built-in algebras u1, su2 or su3."""
    key = name.lower()
    if key == "u1":
        generators = np.array([[[np.sqrt(NORMALISATION)]]], dtype=np.complex128)
    elif key == "su2":
        generators = _pauli() / 2
    elif key == "su3":
        generators = _gell_mann() / 2
    else:
        raise LieAlgebraError(
            f"Unknown algebra {name!r}; supported algebras: {', '.join(SUPPORTED_ALGEBRAS)}."
        )
    algebra = LieAlgebra.from_generators(key, generators)
    logger.debug("Built algebra %s with N=%d, n=%d", key, algebra.N, algebra.n)
    return algebra


def load_generators(file_path: str | Path) -> LieAlgebra:
    """Load a custom generator set.

    Format: ``{"name": str, "generators": [[[re, im], ...], ...]}`` where each
    generator lists its n*n entries row-major as (re, im) pairs."""
    with open(file_path, encoding="utf8") as f:
        payload = json.load(f)
    try:
        name = str(payload.get("name", Path(file_path).stem))
        entries = np.asarray(payload["generators"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as error:
        raise LieAlgebraError(f"Malformed generator file {file_path}: {error}.") from error
    if entries.ndim != 3 or entries.shape[2] != 2:
        raise LieAlgebraError(
            f"Generator file {file_path}: expected N lists of (re, im) pairs, got shape {entries.shape}."
        )
    size = int(round(np.sqrt(entries.shape[1])))
    if size * size != entries.shape[1]:
        raise LieAlgebraError(
            f"Generator file {file_path}: {entries.shape[1]} entries do not form a square matrix."
        )
    generators = (entries[..., 0] + 1j * entries[..., 1]).reshape(-1, size, size)
    return LieAlgebra.from_generators(name, generators)
