"""
Truncated atom (x) Fock space and elementary operator algebra.

Basis ordering is atom-major, photon-minor: |level, n> sits at index
(level - 1) * (n_max + 1) + n. Atom levels use their physical labels:
1 is the ground state, 2 the excited state, 3 the auxiliary Raman level.
The photon factor is hard-truncated at n_max with no renormalization.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from jcm_berry.errors import InvalidParameterError

DIMENSIONLESS = "dimensionless"
ANGULAR = "rad/s"


class SpaceSpec(BaseModel):
    """Dimensions of the truncated Hilbert space."""

    model_config = ConfigDict(frozen=True)

    atom_levels: int = Field(ge=2, le=3)
    photon_cutoff: int = Field(ge=1)  # n_max, Fock states |0>..|n_max> retained

    @property
    def field_dim(self) -> int:
        return self.photon_cutoff + 1

    @property
    def dim(self) -> int:
        return self.atom_levels * self.field_dim

    def check_level(self, level: int) -> None:
        if not 1 <= level <= self.atom_levels:
            raise InvalidParameterError(
                f"Atom level {level} out of range: expected 1..{self.atom_levels}"
            )

    def check_photons(self, n: int) -> None:
        if not 0 <= n <= self.photon_cutoff:
            raise InvalidParameterError(
                f"Photon number {n} out of range: expected 0..{self.photon_cutoff}"
            )

    def index(self, level: int, n: int) -> int:
        """Basis index of |level, n>."""
        self.check_level(level)
        self.check_photons(n)
        return (level - 1) * self.field_dim + n

    def photon_numbers(self) -> np.ndarray:
        """Photon number of every basis vector, in basis order."""
        return np.tile(np.arange(self.field_dim), self.atom_levels)

    def level_labels(self) -> np.ndarray:
        """Atom level label of every basis vector, in basis order."""
        return np.repeat(np.arange(1, self.atom_levels + 1), self.field_dim)


def _combine_units(left: str, right: str) -> str:
    if left == right or right == DIMENSIONLESS:
        return left
    if left == DIMENSIONLESS:
        return right
    return "mixed"


def _frozen_copy(values: object, dtype: type = complex) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    """Dense complex state over a SpaceSpec.

    `normalized` is False for states produced by non-Hermitian evolution,
    which are sub-normalized by construction.
    """

    space: SpaceSpec
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        amplitudes = _frozen_copy(self.amplitudes)
        if amplitudes.shape != (self.space.dim,):
            raise InvalidParameterError(
                f"State has shape {amplitudes.shape}, expected ({self.space.dim},)"
            )
        object.__setattr__(self, "amplitudes", amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalize(self) -> StateVector:
        norm = self.norm()
        if norm == 0.0:
            raise InvalidParameterError("Cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / norm)

    def overlap(self, other: StateVector) -> complex:
        """<self|other>."""
        if other.space != self.space:
            raise InvalidParameterError("Overlap between states of different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def amplitude(self, level: int, n: int) -> complex:
        return complex(self.amplitudes[self.space.index(level, n)])

    def population(self, level: int, n: int) -> float:
        return abs(self.amplitude(level, n)) ** 2

    def level_population(self, level: int) -> float:
        """Total population of one atom level, summed over photon numbers."""
        self.space.check_level(level)
        mask = self.space.level_labels() == level
        return float(np.sum(np.abs(self.amplitudes[mask]) ** 2))

    def photon_population(self, n: int) -> float:
        """Total population with exactly n photons, summed over atom levels."""
        self.space.check_photons(n)
        mask = self.space.photon_numbers() == n
        return float(np.sum(np.abs(self.amplitudes[mask]) ** 2))


@dataclass(frozen=True, eq=False)
class ComplexOperator:
    """Dense square complex matrix over a SpaceSpec, with a units tag."""

    space: SpaceSpec
    matrix: np.ndarray
    units: str = DIMENSIONLESS

    def __post_init__(self) -> None:
        matrix = _frozen_copy(self.matrix)
        dim = self.space.dim
        if matrix.shape != (dim, dim):
            raise InvalidParameterError(
                f"Operator has shape {matrix.shape}, expected ({dim}, {dim})"
            )
        object.__setattr__(self, "matrix", matrix)

    # -------------------------------------------------------------------------
    # Algebra
    # -------------------------------------------------------------------------

    def _check_space(self, other: ComplexOperator | StateVector) -> None:
        if other.space != self.space:
            raise InvalidParameterError("Operands belong to different spaces")

    def __add__(self, other: ComplexOperator) -> ComplexOperator:
        self._check_space(other)
        return ComplexOperator(
            self.space, self.matrix + other.matrix, _combine_units(self.units, other.units)
        )

    def __sub__(self, other: ComplexOperator) -> ComplexOperator:
        self._check_space(other)
        return ComplexOperator(
            self.space, self.matrix - other.matrix, _combine_units(self.units, other.units)
        )

    def __neg__(self) -> ComplexOperator:
        return ComplexOperator(self.space, -self.matrix, self.units)

    def scale(self, factor: complex, units: str | None = None) -> ComplexOperator:
        """Multiply by a scalar, optionally re-tagging the units."""
        return ComplexOperator(self.space, factor * self.matrix, units or self.units)

    def __matmul__(self, other: ComplexOperator) -> ComplexOperator:
        self._check_space(other)
        return ComplexOperator(
            self.space, self.matrix @ other.matrix, _combine_units(self.units, other.units)
        )

    def apply(self, state: StateVector) -> StateVector:
        self._check_space(state)
        return StateVector(self.space, self.matrix @ state.amplitudes, normalized=False)

    def dagger(self) -> ComplexOperator:
        return ComplexOperator(self.space, self.matrix.conj().T, self.units)

    def power(self, k: int) -> ComplexOperator:
        if k < 0:
            raise InvalidParameterError(f"Operator power must be >= 0, got {k}")
        return ComplexOperator(self.space, np.linalg.matrix_power(self.matrix, k), self.units)

    def commutator(self, other: ComplexOperator) -> ComplexOperator:
        return self @ other - other @ self

    # -------------------------------------------------------------------------
    # Diagnostics
    # -------------------------------------------------------------------------

    def hermiticity_error(self) -> float:
        """max |H - H^dagger| over all entries."""
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_error() <= tol

    def expectation(self, state: StateVector) -> complex:
        """<psi|O|psi> / <psi|psi>."""
        self._check_space(state)
        vec = state.amplitudes
        return complex(np.vdot(vec, self.matrix @ vec) / np.vdot(vec, vec).real)

    def element(self, bra: tuple[int, int], ket: tuple[int, int]) -> complex:
        """<level, n| O |level', n'>."""
        return complex(self.matrix[self.space.index(*bra), self.space.index(*ket)])

    def block(self, states: Iterable[tuple[int, int]]) -> np.ndarray:
        """Restriction to the span of the listed basis states, in the given order."""
        indices = [self.space.index(level, n) for level, n in states]
        return np.array(self.matrix[np.ix_(indices, indices)])

    @cached_property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.matrix))))


# =============================================================================
# Operators
# =============================================================================


def identity(space: SpaceSpec) -> ComplexOperator:
    return ComplexOperator(space, np.eye(space.dim))


def annihilation(space: SpaceSpec) -> ComplexOperator:
    """a (x) identity on the atom; a|n> = sqrt(n)|n-1>, cut off at n_max."""
    field = np.diag(np.sqrt(np.arange(1, space.field_dim)), k=1)
    return ComplexOperator(space, np.kron(np.eye(space.atom_levels), field))


def creation(space: SpaceSpec) -> ComplexOperator:
    return annihilation(space).dagger()


def number(space: SpaceSpec) -> ComplexOperator:
    """a^dagger a, diagonal in the basis."""
    return ComplexOperator(space, np.diag(space.photon_numbers().astype(complex)))


def atom_op(space: SpaceSpec, i: int, j: int) -> ComplexOperator:
    """|i><j| on the atom (x) identity on the field."""
    space.check_level(i)
    space.check_level(j)
    atom = np.zeros((space.atom_levels, space.atom_levels))
    atom[i - 1, j - 1] = 1.0
    return ComplexOperator(space, np.kron(atom, np.eye(space.field_dim)))


def sigma_z(space: SpaceSpec) -> ComplexOperator:
    """|2><2| - |1><1|."""
    return atom_op(space, 2, 2) - atom_op(space, 1, 1)


def sigma_plus(space: SpaceSpec) -> ComplexOperator:
    """|2><1|."""
    return atom_op(space, 2, 1)


def sigma_minus(space: SpaceSpec) -> ComplexOperator:
    """|1><2|."""
    return atom_op(space, 1, 2)


def phase_rotation(space: SpaceSpec, phi: float) -> ComplexOperator:
    """U(phi) = exp(-i phi a^dagger a), exponentiated on the diagonal."""
    return ComplexOperator(space, np.diag(np.exp(-1j * phi * space.photon_numbers())))


# =============================================================================
# States
# =============================================================================


def tensor_basis_state(space: SpaceSpec, atom_level: int, n_photons: int) -> StateVector:
    """Unit basis vector |atom_level, n_photons>."""
    amplitudes = np.zeros(space.dim, dtype=complex)
    amplitudes[space.index(atom_level, n_photons)] = 1.0
    return StateVector(space, amplitudes)


def state_from_components(
    space: SpaceSpec, components: dict[tuple[int, int], complex]
) -> StateVector:
    """Build a state from {(level, n): amplitude}; the result is not renormalized."""
    amplitudes = np.zeros(space.dim, dtype=complex)
    for (level, n), value in components.items():
        amplitudes[space.index(level, n)] = value
    unit_norm = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0) <= 1e-10
    return StateVector(space, amplitudes, normalized=unit_norm)


def embed_state(state: StateVector, target: SpaceSpec) -> StateVector:
    """Copy a state into a space with at least as many levels and photons."""
    source = state.space
    if target.atom_levels < source.atom_levels or target.photon_cutoff < source.photon_cutoff:
        raise InvalidParameterError("Embedding target is smaller than the source space")
    amplitudes = np.zeros(target.dim, dtype=complex)
    for level in range(1, source.atom_levels + 1):
        for n in range(source.field_dim):
            amplitudes[target.index(level, n)] = state.amplitudes[source.index(level, n)]
    return StateVector(target, amplitudes, normalized=state.normalized)


def project_state(state: StateVector, target: SpaceSpec) -> StateVector:
    """Drop the components outside `target` (e.g. level 3); no renormalization."""
    source = state.space
    if target.atom_levels > source.atom_levels or target.photon_cutoff > source.photon_cutoff:
        raise InvalidParameterError("Projection target is larger than the source space")
    amplitudes = np.zeros(target.dim, dtype=complex)
    for level in range(1, target.atom_levels + 1):
        for n in range(target.field_dim):
            amplitudes[target.index(level, n)] = state.amplitudes[source.index(level, n)]
    return StateVector(target, amplitudes, normalized=False)
