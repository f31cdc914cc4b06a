"""
Validation of the large-detuning Raman reduction.

The full three-level model is integrated in the interaction picture and the
effective two-level model is propagated exactly from its eigendecomposition.
Fidelity compares the effective state with the full state after level |3> is
projected out and the remainder renormalized. Stroboscopic samples at
t_k = 2 pi k / delta suppress the benign micromotion at the detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from jcm_berry.dynamics import DEFAULT_STEP_MARGIN, evolve, minimum_steps
from jcm_berry.errors import InvalidParameterError, TruncationError
from jcm_berry.hilbert import SpaceSpec, StateVector, embed_state
from jcm_berry.log import get_logger
from jcm_berry.models.hamiltonians import build_raman_effective, build_raman_full
from jcm_berry.models.params import RamanParams, StarkConvention

log = get_logger(__name__)

MIN_DETUNING_RATIO = 3.0
LEVEL3_FLAG_THRESHOLD = 0.2
TAIL_TOLERANCE = 1e-10
RAMAN_PHOTON_CUTOFF = 3


@dataclass(frozen=True, eq=False)
class ReductionReport:
    """Full-vs-effective comparison over one run."""

    params: RamanParams
    convention: StarkConvention
    sample_times: np.ndarray
    fidelity_history: np.ndarray
    level3_history: np.ndarray
    strobe_times: np.ndarray
    strobe_fidelities: np.ndarray
    max_level3_population: float
    norm_drift: float
    steps: int

    @property
    def final_fidelity(self) -> float:
        """Fidelity at the last stroboscopic sample."""
        return float(self.strobe_fidelities[-1])

    @property
    def min_fidelity(self) -> float:
        return float(np.min(self.strobe_fidelities))

    @property
    def flagged(self) -> bool:
        """Level |3> became substantially populated: the elimination is not adiabatic."""
        return self.max_level3_population > LEVEL3_FLAG_THRESHOLD


def effective_rabi_period(params: RamanParams) -> float:
    """pi / lambda_1: period of the resonant |2,0> <-> |1,1> population oscillation."""
    if params.lambda1 <= 0.0:
        raise InvalidParameterError("Effective coupling lambda_1 must be > 0 for a Rabi period")
    return math.pi / params.lambda1


def rabi_cycles_duration(params: RamanParams, cycles: float) -> float:
    """cycles * 2 pi / lambda_1.

    One cycle spans two population periods; 10 cycles take 0.6 ms at the cavity preset.
    """
    if cycles <= 0:
        raise InvalidParameterError(f"cycles must be > 0, got {cycles}")
    return 2.0 * cycles * effective_rabi_period(params)


def effective_evolution(
    params: RamanParams,
    psi0: StateVector,
    times: np.ndarray,
    convention: StarkConvention = StarkConvention.ELIMINATED,
) -> np.ndarray:
    """Rows of amplitudes exp(-i H_eff t) psi0 for every t in `times`."""
    hamiltonian = build_raman_effective(psi0.space, params, convention)
    energies, vectors = np.linalg.eigh(hamiltonian.matrix)
    coefficients = vectors.conj().T @ psi0.amplitudes
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), energies))
    return (phases * coefficients[None, :]) @ vectors.T


def _strobe_steps(delta: float, step: float, steps: int) -> np.ndarray:
    period = 2.0 * math.pi / delta
    count = int(math.floor(steps * step / period + 1e-9))
    indices = np.rint(np.arange(count + 1) * period / step).astype(int)
    return np.unique(np.clip(indices, 0, steps))


def validate_reduction(
    params: RamanParams,
    psi0: StateVector,
    t_final: float,
    steps: int | None = None,
    *,
    convention: StarkConvention = StarkConvention.ELIMINATED,
) -> ReductionReport:
    """Co-evolve the three-level model and its effective two-level reduction from psi0.

    psi0 lives on levels |1>, |2>. Runs use photon cutoff 3 unless psi0 needs more.
    """
    if params.detuning_ratio < MIN_DETUNING_RATIO:
        raise InvalidParameterError(
            f"delta / max(g, omega0) = {params.detuning_ratio:.3g} is below "
            f"{MIN_DETUNING_RATIO}; the reduction does not apply"
        )
    if psi0.space.atom_levels != 2:
        raise InvalidParameterError("The initial state must live on levels |1>, |2> only")
    if t_final <= 0.0:
        raise InvalidParameterError(f"t_final must be > 0, got {t_final}")

    cutoff = max(RAMAN_PHOTON_CUTOFF, psi0.space.photon_cutoff)
    effective_space = SpaceSpec(atom_levels=2, photon_cutoff=cutoff)
    full_space = SpaceSpec(atom_levels=3, photon_cutoff=cutoff)
    start = embed_state(psi0, effective_space)
    full_start = embed_state(start, full_space)

    family = build_raman_full(full_space, params)
    if steps is None:
        steps = minimum_steps(family, t_final, DEFAULT_STEP_MARGIN)
    step = t_final / steps
    strobes = set(_strobe_steps(params.delta, step, steps).tolist())
    history_every = max(1, steps // 2000)

    recorded: dict[int, np.ndarray] = {}

    def record(index: int, t: float, psi: np.ndarray) -> None:
        if index in strobes or index % history_every == 0 or index == steps:
            recorded[index] = psi.copy()

    log.info("raman_validation_start", steps=steps, t_final=t_final, convention=convention.value)
    result = evolve(family, full_start, t_final, steps, sample_every=1, observer=record)

    indices = np.array(sorted(recorded))
    full_states = np.array([recorded[i] for i in indices])
    times = indices * step

    levels = full_space.level_labels()
    photons = full_space.photon_numbers()
    tail = float(np.max(np.sum(np.abs(full_states[:, photons == cutoff]) ** 2, axis=1)))
    if tail > TAIL_TOLERANCE:
        raise TruncationError(
            f"Population {tail:.3e} reached photon cutoff {cutoff}; the initial state holds too "
            "many photons for this run"
        )

    level3 = np.sum(np.abs(full_states[:, levels == 3]) ** 2, axis=1)
    kept = full_states[:, levels != 3]  # atom-major: levels 1, 2 keep the effective ordering
    kept_norms = np.linalg.norm(kept, axis=1)
    projected = kept / np.where(kept_norms > 0.0, kept_norms, 1.0)[:, None]

    effective = effective_evolution(params, start, times, convention)
    fidelity = np.abs(np.einsum("ki,ki->k", effective.conj(), projected)) ** 2
    fidelity = np.clip(fidelity, 0.0, 1.0)

    strobe_mask = np.isin(indices, sorted(strobes))
    report = ReductionReport(
        params=params,
        convention=convention,
        sample_times=times,
        fidelity_history=fidelity,
        level3_history=level3,
        strobe_times=times[strobe_mask],
        strobe_fidelities=fidelity[strobe_mask],
        max_level3_population=float(np.clip(np.max(level3), 0.0, 1.0)),
        norm_drift=result.max_norm_drift,
        steps=steps,
    )
    if report.flagged:
        log.warning(
            "raman_reduction_breach",
            max_level3_population=report.max_level3_population,
            detuning_ratio=params.detuning_ratio,
        )
    log.info(
        "raman_validation_done",
        final_fidelity=report.final_fidelity,
        min_fidelity=report.min_fidelity,
        max_level3_population=report.max_level3_population,
    )
    return report
