"""
Dressed states of the m-quantum JCM.

Closed-form mixing angles, energies and eigenvectors of the frame Hamiltonian,
the complex mixing quantity of the dissipative model, and a numerical
diagonalization used as an independent oracle.

Gauge: the |2,n> component of the + state and the |1,n+m> component of the
- state are real and positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from jcm_berry.errors import DegenerateSpectrumError, InvalidParameterError
from jcm_berry.hilbert import ComplexOperator, SpaceSpec, StateVector, state_from_components
from jcm_berry.log import get_logger
from jcm_berry.models.params import Branch, JcmParams

log = get_logger(__name__)


def sector_factor(n: int, m: int) -> int:
    """(n+m)!/n!, the squared m-photon matrix element of a^m between |n+m> and |n>."""
    if n < 0:
        raise InvalidParameterError(f"Photon index n must be >= 0, got {n}")
    return math.perm(n + m, m)


def sector_states(n: int, m: int) -> list[tuple[int, int]]:
    """Basis of the coupled sector, in (|2,n>, |1,n+m>) order."""
    return [(2, n), (1, n + m)]


def generalized_rabi_frequency(n: int, params: JcmParams) -> float:
    """R_nm = sqrt(Delta^2 + 4 lambda^2 (n+m)!/n!)."""
    return math.sqrt(params.delta_m**2 + 4.0 * params.lambda_m**2 * sector_factor(n, params.m))


def mixing_angle(n: int, params: JcmParams) -> float:
    """theta_nm in [0, pi] with cos = Delta/R and sin = 2 lambda sqrt((n+m)!/n!)/R."""
    coupling = 2.0 * params.lambda_m * math.sqrt(sector_factor(n, params.m))
    if coupling == 0.0 and params.delta_m == 0.0:
        raise DegenerateSpectrumError(
            "Mixing angle undefined: lambda_m = 0 and Delta_m = 0 leave the sector degenerate"
        )
    return math.atan2(coupling, params.delta_m)


@dataclass(frozen=True, eq=False)
class DressedState:
    """One eigenstate of a coupled sector."""

    n: int
    branch: Branch
    theta: float | complex
    energy: float | complex
    vector: StateVector

    @property
    def upper_weight(self) -> float | complex:
        """|<2,n|state>|^2 in the real gauge: cos^2(theta/2) for +, sin^2(theta/2) for -."""
        half = self.theta / 2.0
        if self.branch is Branch.PLUS:
            return np.cos(half) ** 2  # type: ignore[no-any-return]
        return np.sin(half) ** 2  # type: ignore[no-any-return]


def _default_space(n: int, params: JcmParams, space: SpaceSpec | None) -> SpaceSpec:
    if space is None:
        return SpaceSpec(atom_levels=2, photon_cutoff=n + params.m)
    if space.atom_levels != 2:
        raise InvalidParameterError("Dressed states live in a 2-level space")
    if n + params.m > space.photon_cutoff:
        raise InvalidParameterError(
            f"Sector n={n}, m={params.m} needs photon cutoff >= {n + params.m}, "
            f"got {space.photon_cutoff}"
        )
    return space


def dressed_pair(
    n: int, params: JcmParams, space: SpaceSpec | None = None
) -> tuple[DressedState, DressedState]:
    """(+, -) dressed states of sector n with energies +-R_nm/2."""
    space = _default_space(n, params, space)
    theta = mixing_angle(n, params)
    energy = generalized_rabi_frequency(n, params) / 2.0
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    upper, lower = sector_states(n, params.m)

    plus = state_from_components(space, {upper: c, lower: s})
    minus = state_from_components(space, {lower: c, upper: -s})
    return (
        DressedState(n=n, branch=Branch.PLUS, theta=theta, energy=energy, vector=plus),
        DressedState(n=n, branch=Branch.MINUS, theta=theta, energy=-energy, vector=minus),
    )


def dressed_state(
    n: int, branch: Branch, params: JcmParams, space: SpaceSpec | None = None
) -> DressedState:
    plus, minus = dressed_pair(n, params, space)
    return plus if branch is Branch.PLUS else minus


def complex_mixing_data(n: int, params: JcmParams) -> complex:
    """z = (w^2 - 4 lambda^2 F)/(w^2 + 4 lambda^2 F), w = Delta - i Gamma/2, F = (n+m)!/n!.

    With Gamma = 0 this is cos(2 theta_nm). Only m = 1 is physically analysed;
    other m are computed by the same substitution and logged as extrapolated.
    """
    if params.m != 1:
        log.warning("complex_mixing_extrapolated", m=params.m, n=n)
    w = complex(params.delta_m, -params.gamma_decay / 2.0)
    coupling = 4.0 * params.lambda_m**2 * sector_factor(n, params.m)
    denominator = w * w + coupling
    if abs(denominator) <= 1e-14 * (abs(w) ** 2 + coupling):
        raise DegenerateSpectrumError(
            f"Complex mixing degenerate at Delta={params.delta_m}, Gamma={params.gamma_decay}: "
            "w^2 = -4 lambda^2 (n+m)!/n!"
        )
    return (w * w - coupling) / denominator


# =============================================================================
# Numerical oracle
# =============================================================================


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues ordered by ascending real part, then imaginary part."""

    eigenvalues: np.ndarray
    right: np.ndarray  # columns are right eigenvectors
    left: np.ndarray | None = None  # columns are left eigenvectors, <L_i|R_i> = 1

    def vector(self, space: SpaceSpec, index: int) -> StateVector:
        column = self.right[:, index]
        return StateVector(space, column / np.linalg.norm(column))


def diagonalize(operator: ComplexOperator) -> Spectrum:
    """Numerical eigendecomposition (eigh for Hermitian input, left/right eig otherwise)."""
    matrix = operator.matrix
    if operator.is_hermitian(1e-12):
        values, vectors = np.linalg.eigh(matrix)
        return Spectrum(values.astype(complex), vectors)

    values, left, right = scipy.linalg.eig(matrix, left=True, right=True)
    order = np.lexsort((values.imag, values.real))
    values, left, right = values[order], left[:, order], right[:, order]
    norms = np.einsum("ij,ij->j", left.conj(), right)
    left = left / norms.conj()
    return Spectrum(values, right, left)
