"""
Fixed-step time evolution.

Classical 4th-order Runge-Kutta for i dpsi/dt = H(t) psi with a hard stability
guard (step * rate <= 0.05, where rate is the spectral radius of H plus the
fastest drive frequency), trapezoidal dynamical-phase bookkeeping, and the
adiabatic phi-loop used as the time-domain Berry phase oracle.

Phase conventions: EvolutionResult.accumulated_dynamical_phase is the integral
of <H> itself; the dynamical *phase* of a loop is its negative (e^{-iEt}), and
geometric_phase = total_phase - dynamical_phase.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from jcm_berry.errors import AdiabaticityError, InvalidParameterError, StabilityError
from jcm_berry.hilbert import ComplexOperator, SpaceSpec, StateVector, phase_rotation
from jcm_berry.log import get_logger
from jcm_berry.models.hamiltonians import OperatorFamily, jcm_loop_family
from jcm_berry.models.params import Branch, JcmParams
from jcm_berry.spectra import dressed_state, generalized_rabi_frequency, mixing_angle

log = get_logger(__name__)

STABILITY_LIMIT = 0.05
DEFAULT_STEP_MARGIN = 0.02  # step * rate used when steps are chosen automatically
NORM_DRIFT_TOLERANCE = 1e-8

Observer = Callable[[int, float, np.ndarray], None]


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """Outcome of one fixed-step run."""

    final_state: StateVector
    norm_history: np.ndarray
    sample_times: np.ndarray
    accumulated_dynamical_phase: float  # integral of <H>/<psi|psi> dt
    step_count: int
    step_size: float
    hermitian: bool

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm_history - 1.0)))


def _as_family(hamiltonian: OperatorFamily | ComplexOperator) -> OperatorFamily:
    if isinstance(hamiltonian, OperatorFamily):
        return hamiltonian
    return OperatorFamily.constant(hamiltonian)


def stability_rate(hamiltonian: OperatorFamily | ComplexOperator, t_final: float) -> float:
    """Spectral radius plus drive frequency, the rate the step size is measured against."""
    family = _as_family(hamiltonian)
    return family.spectral_radius(t_final) + family.drive_frequency


def minimum_steps(
    hamiltonian: OperatorFamily | ComplexOperator,
    t_final: float,
    limit: float = STABILITY_LIMIT,
) -> int:
    """Smallest step count with step * rate <= limit."""
    rate = stability_rate(hamiltonian, t_final)
    return max(1, math.ceil(t_final * rate / limit * (1.0 + 1e-12)))


def _energy(matrix: np.ndarray, psi: np.ndarray) -> float:
    return float(np.vdot(psi, matrix @ psi).real / np.vdot(psi, psi).real)


def evolve(
    hamiltonian: OperatorFamily | ComplexOperator,
    psi0: StateVector,
    t_final: float,
    steps: int,
    *,
    sample_every: int | None = None,
    observer: Observer | None = None,
) -> EvolutionResult:
    """Integrate psi0 to t_final with `steps` RK4 steps.

    `observer(step, t, amplitudes)` is called at step 0 and every `sample_every`
    steps (and at the last step); it must not mutate the array.
    """
    family = _as_family(hamiltonian)
    if psi0.space != family.space:
        raise InvalidParameterError("Initial state and Hamiltonian belong to different spaces")
    if t_final <= 0.0:
        raise InvalidParameterError(f"t_final must be > 0, got {t_final}")
    if steps < 1:
        raise InvalidParameterError(f"steps must be >= 1, got {steps}")
    if not psi0.is_normalized(1e-10):
        raise InvalidParameterError(f"Initial state is not normalized (norm {psi0.norm():.3e})")

    dt = t_final / steps
    rate = stability_rate(family, t_final)
    if dt * rate > STABILITY_LIMIT * (1.0 + 1e-12):
        needed = minimum_steps(family, t_final)
        raise StabilityError(
            f"Step {dt:.3e} s times rate {rate:.3e} rad/s exceeds {STABILITY_LIMIT}; "
            f"use at least {needed} steps",
            min_steps=needed,
        )
    every = sample_every or max(1, steps // 1000)
    log.debug("evolve_start", label=family.label, steps=steps, step=dt, rate=rate)

    time_dependent = bool(family.harmonics)
    offset_factor = np.exp(-1j * family.offset * dt) if family.offset else None
    psi = np.array(psi0.amplitudes)
    h_now = family.matrix(0.0)
    energy_now = _energy(h_now, psi)
    phase = 0.0
    norms = [float(np.linalg.norm(psi))]
    times = [0.0]
    if observer is not None:
        observer(0, 0.0, psi)

    for k in range(steps):
        t = k * dt
        if time_dependent:
            h_mid = family.matrix(t + 0.5 * dt)
            h_next = family.matrix(t + dt)
        else:
            h_mid = h_next = h_now
        k1 = -1j * (h_now @ psi)
        k2 = -1j * (h_mid @ (psi + 0.5 * dt * k1))
        k3 = -1j * (h_mid @ (psi + 0.5 * dt * k2))
        k4 = -1j * (h_next @ (psi + dt * k3))
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if offset_factor is not None:
            psi = psi * offset_factor

        energy_next = _energy(h_next, psi)
        phase += 0.5 * dt * (energy_now + energy_next)
        h_now, energy_now = h_next, energy_next

        step = k + 1
        if step % every == 0 or step == steps:
            times.append(step * dt)
            norms.append(float(np.linalg.norm(psi)))
            if observer is not None:
                observer(step, step * dt, psi)

    hermitian = family.is_hermitian
    result = EvolutionResult(
        final_state=StateVector(family.space, psi, normalized=hermitian),
        norm_history=np.array(norms),
        sample_times=np.array(times),
        accumulated_dynamical_phase=phase + family.offset * t_final,
        step_count=steps,
        step_size=dt,
        hermitian=hermitian,
    )
    if hermitian and result.max_norm_drift > NORM_DRIFT_TOLERANCE:
        log.warning("norm_drift", drift=result.max_norm_drift, steps=steps, label=family.label)
    return result


# =============================================================================
# Adiabatic loop
# =============================================================================


class _CoarseCheckpoints(Exception):
    """Raised by the phase tracker when a checkpoint increment reaches pi/2."""


class _LoopPhaseTracker:
    """Follows arg<U(phi(t)) psi0 | psi(t)> continuously between checkpoints."""

    def __init__(self, psi0: np.ndarray, photons: np.ndarray, duration: float) -> None:
        self.psi0 = psi0
        self.photons = photons
        self.duration = duration
        self.previous: complex | None = None
        self.phase = 0.0

    def __call__(self, step: int, t: float, psi: np.ndarray) -> None:
        angle = 2.0 * math.pi * t / self.duration
        reference = np.exp(-1j * angle * self.photons) * self.psi0
        current = complex(np.vdot(reference, psi))
        if self.previous is not None:
            increment = float(np.angle(current * np.conj(self.previous)))
            if abs(increment) >= math.pi / 2.0:
                raise _CoarseCheckpoints(step)
            self.phase += increment
        else:
            self.phase = float(np.angle(current))
        self.previous = current


def adiabatic_correction(n: int, params: JcmParams, T: float) -> float:
    """First-order finite-T shift 3 pi^2 m^2 sin^2(theta) / (R T) of a loop phase.

    The + branch comes out low by this amount and the - branch high. It combines
    the Floquet energy shift with the energy deficit of the precessing state.
    """
    theta = mixing_angle(n, params)
    rabi = generalized_rabi_frequency(n, params)
    return 3.0 * math.pi**2 * params.m**2 * math.sin(theta) ** 2 / (rabi * T)


@dataclass(frozen=True)
class AdiabaticLoopResult:
    """Phases accumulated over one phi-loop (radians, not reduced)."""

    total_phase: float
    dynamical_phase: float
    geometric_phase: float
    final_overlap: complex
    checkpoint_every: int
    evolution: EvolutionResult

    def as_tuple(self) -> tuple[float, float, float]:
        return self.total_phase, self.dynamical_phase, self.geometric_phase


def evolve_adiabatic_loop(
    params: JcmParams,
    n: int,
    branch: Branch,
    T: float,
    steps: int | None = None,
    *,
    energy_offset: float = 0.0,
    checkpoint_every: int = 8,
) -> AdiabaticLoopResult:
    """Carry a dressed state once around phi -> phi + 2 pi in time T.

    The space is the exact sector {|2,n>, |1,n+m>} plus its spectators
    (n_max = n + m). `steps` defaults to a step * rate of 0.02.
    """
    if T <= 0.0:
        raise InvalidParameterError(f"Loop duration must be > 0, got {T}")
    space = SpaceSpec(atom_levels=2, photon_cutoff=n + params.m)
    start = dressed_state(n, branch, params, space)
    psi0 = phase_rotation(space, params.phi).apply(start.vector)
    psi0 = StateVector(space, psi0.amplitudes)
    family = jcm_loop_family(space, params, T, energy_offset=energy_offset)
    if steps is None:
        steps = minimum_steps(family, T, DEFAULT_STEP_MARGIN)

    every = max(1, checkpoint_every)
    while True:
        tracker = _LoopPhaseTracker(psi0.amplitudes, space.photon_numbers(), T)
        try:
            evolution = evolve(family, psi0, T, steps, sample_every=every, observer=tracker)
            break
        except _CoarseCheckpoints:
            if every == 1:
                raise
            every = max(1, every // 2)
            log.debug("checkpoints_refined", checkpoint_every=every)

    overlap = psi0.overlap(evolution.final_state)
    if abs(overlap) < 0.99:
        raise AdiabaticityError(
            f"State did not return adiabatically: |<psi(0)|psi(T)>| = {abs(overlap):.4f} < 0.99; "
            "increase T",
            overlap=abs(overlap),
        )

    dynamical = -evolution.accumulated_dynamical_phase
    result = AdiabaticLoopResult(
        total_phase=tracker.phase,
        dynamical_phase=dynamical,
        geometric_phase=tracker.phase - dynamical,
        final_overlap=overlap,
        checkpoint_every=every,
        evolution=evolution,
    )
    log.debug(
        "adiabatic_loop_done",
        n=n,
        branch=branch.value,
        geometric_phase=result.geometric_phase,
        steps=steps,
    )
    return result
