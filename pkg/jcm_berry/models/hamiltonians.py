"""
Hamiltonian builders.

Static Hamiltonians are returned as ComplexOperator in rad/s. Time-dependent
ones are OperatorFamily values of the form

    H(t) = A + sum_j (exp(i w_j t) K_j + h.c.) + offset

which covers the interaction-picture Raman model and the phi-swept JCM loop
with one declared fastest drive frequency for step selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from jcm_berry.errors import InvalidParameterError
from jcm_berry.hilbert import (
    ANGULAR,
    ComplexOperator,
    SpaceSpec,
    annihilation,
    atom_op,
    creation,
    number,
    sigma_plus,
    sigma_z,
)
from jcm_berry.models.params import JcmParams, RamanParams, StarkConvention


def _frozen(matrix: np.ndarray) -> np.ndarray:
    array = np.array(matrix, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Harmonic:
    """One drive term exp(i w t) K + exp(-i w t) K^dagger."""

    operator: np.ndarray
    frequency: float
    adjoint: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        operator = _frozen(self.operator)
        object.__setattr__(self, "operator", operator)
        object.__setattr__(self, "adjoint", _frozen(operator.conj().T))


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    """Time-dependent Hamiltonian t -> ComplexOperator."""

    space: SpaceSpec
    static: np.ndarray
    harmonics: tuple[Harmonic, ...] = ()
    offset: float = 0.0  # scalar energy shift, integrated exactly
    label: str = ""

    def __post_init__(self) -> None:
        static = _frozen(self.static)
        if static.shape != (self.space.dim, self.space.dim):
            raise InvalidParameterError(
                f"Static part has shape {static.shape}, expected size {self.space.dim}"
            )
        object.__setattr__(self, "static", static)

    @classmethod
    def constant(cls, operator: ComplexOperator, label: str = "") -> OperatorFamily:
        return cls(space=operator.space, static=operator.matrix, label=label)

    @property
    def drive_frequency(self) -> float:
        """Fastest explicit time dependence (rad/s); 0 for static families."""
        return max((abs(h.frequency) for h in self.harmonics), default=0.0)

    @property
    def period(self) -> float:
        frequency = self.drive_frequency
        return math.inf if frequency == 0.0 else 2.0 * math.pi / frequency

    @property
    def is_hermitian(self) -> bool:
        """H(t) Hermitian at the start and at sample points across one drive period."""
        if self.drive_frequency > 0.0:
            times = np.linspace(0.0, self.period, 5, endpoint=False)
        else:
            times = np.zeros(1)
        for t in times:
            matrix = self.matrix(float(t))
            scale = max(1.0, float(np.max(np.abs(matrix))))
            if not np.max(np.abs(matrix - matrix.conj().T)) <= 1e-12 * scale:
                return False
        return True

    def matrix(self, t: float) -> np.ndarray:
        """H(t) without the scalar offset."""
        result = np.array(self.static)
        for harmonic in self.harmonics:
            phase = np.exp(1j * harmonic.frequency * t)
            result += phase * harmonic.operator + np.conj(phase) * harmonic.adjoint
        return result

    def __call__(self, t: float) -> ComplexOperator:
        full = self.matrix(t) + self.offset * np.eye(self.space.dim)
        return ComplexOperator(self.space, full, ANGULAR)

    def with_offset(self, offset: float) -> OperatorFamily:
        return OperatorFamily(self.space, self.static, self.harmonics, offset, self.label)

    def spectral_radius(self, t_final: float, samples: int = 4) -> float:
        """Largest |eigenvalue| of H(t) (offset excluded) over a few sample times."""
        if self.harmonics:
            horizon = min(t_final, self.period)
            times = np.linspace(0.0, horizon, samples, endpoint=False)
        else:
            times = np.zeros(1)
        return max(float(np.max(np.abs(np.linalg.eigvals(self.matrix(t))))) for t in times)


# =============================================================================
# JCM
# =============================================================================


def _check_jcm_space(space: SpaceSpec, params: JcmParams) -> None:
    if space.atom_levels != 2:
        raise InvalidParameterError(
            f"JCM Hamiltonians need a 2-level space, got {space.atom_levels} levels"
        )
    if space.photon_cutoff < params.m:
        raise InvalidParameterError(
            f"Photon cutoff {space.photon_cutoff} < m={params.m}: the coupling would vanish"
        )


def multiphoton_coupling(space: SpaceSpec, m: int) -> ComplexOperator:
    """sigma_+ a^m."""
    return sigma_plus(space) @ annihilation(space).power(m)


def _coupling(space: SpaceSpec, params: JcmParams, phi: float) -> ComplexOperator:
    raising = multiphoton_coupling(space, params.m).scale(
        params.lambda_m * np.exp(1j * params.m * phi)
    )
    return raising + raising.dagger()


def build_jcm_lab(space: SpaceSpec, params: JcmParams) -> ComplexOperator:
    """nu a^dagger a + (omega/2) sigma_z + lambda (sigma_+ a^m + h.c.)."""
    _check_jcm_space(space, params)
    hamiltonian = (
        number(space).scale(params.nu)
        + sigma_z(space).scale(params.omega / 2.0)
        + _coupling(space, params, 0.0)
    )
    return hamiltonian.scale(1.0, ANGULAR)


def build_jcm_frame(space: SpaceSpec, params: JcmParams) -> ComplexOperator:
    """(Delta/2) sigma_z + lambda (sigma_+ a^m + h.c.); block diagonal over {|2,n>, |1,n+m>}."""
    return build_jcm_phi(space, params, phi=0.0)


def build_jcm_phi(space: SpaceSpec, params: JcmParams, phi: float | None = None) -> ComplexOperator:
    """Phase-shifted frame Hamiltonian, coupling sigma_+ a^m carries exp(i m phi).

    `phi` defaults to `params.phi`.
    """
    _check_jcm_space(space, params)
    angle = params.phi if phi is None else phi
    hamiltonian = sigma_z(space).scale(params.delta_m / 2.0) + _coupling(space, params, angle)
    return hamiltonian.scale(1.0, ANGULAR)


def build_jcm_dissipative(
    space: SpaceSpec, params: JcmParams, phi: float | None = None
) -> ComplexOperator:
    """build_jcm_phi - (i Gamma / 2) a^dagger a."""
    damping = number(space).scale(-0.5j * params.gamma_decay)
    return (build_jcm_phi(space, params, phi) + damping).scale(1.0, ANGULAR)


def jcm_loop_family(
    space: SpaceSpec,
    params: JcmParams,
    duration: float,
    *,
    dissipative: bool = False,
    energy_offset: float = 0.0,
) -> OperatorFamily:
    """H(phi(t)) with phi(t) = params.phi + 2 pi t / duration over one loop."""
    _check_jcm_space(space, params)
    if duration <= 0.0:
        raise InvalidParameterError(f"Loop duration must be > 0, got {duration}")
    static = sigma_z(space).scale(params.delta_m / 2.0)
    if dissipative:
        static = static + number(space).scale(-0.5j * params.gamma_decay)
    raising = multiphoton_coupling(space, params.m).scale(
        params.lambda_m * np.exp(1j * params.m * params.phi)
    )
    return OperatorFamily(
        space=space,
        static=static.matrix,
        harmonics=(Harmonic(raising.matrix, params.m * 2.0 * math.pi / duration),),
        offset=energy_offset,
        label=f"jcm-loop(m={params.m})",
    )


# =============================================================================
# Raman
# =============================================================================


def build_raman_full(space: SpaceSpec, params: RamanParams) -> OperatorFamily:
    """Interaction-picture three-level Hamiltonian.

    H(t) = Omega0 e^{i phi} sigma_32 e^{-i delta t} + g sigma_31 a e^{-i delta t} + h.c.
    """
    if space.atom_levels != 3:
        raise InvalidParameterError(
            f"The Raman model needs a 3-level space, got {space.atom_levels} levels"
        )
    drive = atom_op(space, 3, 2).scale(params.omega0 * np.exp(1j * params.phi)) + (
        atom_op(space, 3, 1) @ annihilation(space)
    ).scale(params.g)
    return OperatorFamily(
        space=space,
        static=np.zeros((space.dim, space.dim)),
        harmonics=(Harmonic(drive.matrix, -params.delta),),
        label="raman-full",
    )


def build_raman_effective(
    space: SpaceSpec,
    params: RamanParams,
    convention: StarkConvention = StarkConvention.ANTINORMAL,
) -> ComplexOperator:
    """Large-detuning effective Hamiltonian on levels |1>, |2>.

    ANTINORMAL: (Omega0^2/delta) s22 + (g^2/delta) a a^dag s11 + lambda1 (s21 a e^{i phi} + h.c.)
    ELIMINATED: (Omega0^2/delta) s22 + (g^2/delta) a^dag a s11 + lambda1 (s21 a e^{-i phi} + h.c.)
    """
    if space.atom_levels != 2:
        raise InvalidParameterError(
            f"The effective Raman model lives on a 2-level space, got {space.atom_levels} levels"
        )
    a = annihilation(space)
    a_dag = creation(space)
    if convention is StarkConvention.ANTINORMAL:
        field_term = a @ a_dag
        phase = np.exp(1j * params.phi)
    else:
        field_term = a_dag @ a
        phase = np.exp(-1j * params.phi)

    stark = atom_op(space, 2, 2).scale(params.omega0**2 / params.delta) + (
        field_term @ atom_op(space, 1, 1)
    ).scale(params.g**2 / params.delta)
    lowering = (sigma_plus(space) @ a).scale(params.lambda1 * phase)
    return (stark + lowering + lowering.dagger()).scale(1.0, ANGULAR)
