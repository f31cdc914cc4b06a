"""
Ramsey interferometry around the cavity.

Two resonant zones rotate the atom by the pulse areas A1, A2; between them the
cavity passage imprints e^{i(gamma + xi)} on |2> and e^{-i xi} on |1>. The
passage can also be simulated exactly with the phi-swept JCM, which audits the
single-phase idealization of the model.

Rotation of area A in the basis (|1>, |2>):

    [[cos A/2,   i sin A/2],
     [i sin A/2, cos A/2  ]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from jcm_berry.dynamics import DEFAULT_STEP_MARGIN, evolve, evolve_adiabatic_loop, minimum_steps
from jcm_berry.errors import InvalidParameterError
from jcm_berry.geometry import berry_dissipative_analytic, berry_vacuum
from jcm_berry.hilbert import tensor_basis_state
from jcm_berry.log import get_logger
from jcm_berry.models.hamiltonians import jcm_loop_family
from jcm_berry.models.params import (
    Branch,
    GammaMode,
    JcmParams,
    RamanParams,
    StarkConvention,
)
from jcm_berry.spectra import mixing_angle

log = get_logger(__name__)

FRINGE_POINTS = 401


@dataclass(frozen=True, eq=False)
class AtomState:
    """Atom-only state, amplitudes over (|1>, |2>)."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.shape != (2,):
            raise InvalidParameterError(f"Atom state needs 2 amplitudes, got {amplitudes.shape}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def excited(cls) -> AtomState:
        return cls(np.array([0.0, 1.0]))

    @property
    def c1(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def c2(self) -> complex:
        return complex(self.amplitudes[1])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def population(self, level: int) -> float:
        if level not in (1, 2):
            raise InvalidParameterError(f"Atom level must be 1 or 2, got {level}")
        return abs(self.amplitudes[level - 1]) ** 2


class RamseyConfig(BaseModel):
    """One setting of the interferometer."""

    model_config = ConfigDict(frozen=True)

    pulse_area_1: float = Field(default=math.pi / 2.0, ge=0.0, le=2.0 * math.pi)
    pulse_area_2: float = Field(default=math.pi / 2.0, ge=0.0, le=2.0 * math.pi)
    xi: float = 0.0  # lambda_1 * tau, set as an independent dial
    gamma: float = 0.0
    gamma_mode: GammaMode = GammaMode.IDEAL


# =============================================================================
# Model protocol
# =============================================================================


def ramsey_rotation(area: float) -> np.ndarray:
    c, s = math.cos(area / 2.0), math.sin(area / 2.0)
    return np.array([[c, 1j * s], [1j * s, c]])


def ramsey_state_after_r1(pulse_area_1: float) -> AtomState:
    """cos(A1/2)|2> + i sin(A1/2)|1>, starting from |2>."""
    return AtomState(ramsey_rotation(pulse_area_1) @ AtomState.excited().amplitudes)


def cavity_passage_model(state: AtomState, xi: float, gamma: float) -> AtomState:
    phases = np.array([np.exp(-1j * xi), np.exp(1j * (gamma + xi))])
    return AtomState(phases * state.amplitudes)


def ramsey_state_after_r2(state: AtomState, pulse_area_2: float) -> AtomState:
    return AtomState(ramsey_rotation(pulse_area_2) @ state.amplitudes)


def ramsey_coefficients(config: RamseyConfig) -> tuple[complex, complex]:
    """(c1, c2) after the second zone, in closed form."""
    c_1, s_1 = math.cos(config.pulse_area_1 / 2.0), math.sin(config.pulse_area_1 / 2.0)
    c_2, s_2 = math.cos(config.pulse_area_2 / 2.0), math.sin(config.pulse_area_2 / 2.0)
    upper = np.exp(1j * (config.gamma + config.xi))
    lower = np.exp(-1j * config.xi)
    c1 = lower * 1j * s_1 * c_2 + upper * 1j * c_1 * s_2
    c2 = upper * c_2 * c_1 - lower * s_2 * s_1
    return complex(c1), complex(c2)


def detection_probability(config: RamseyConfig) -> float:
    """P2 = |c2|^2; (1 - cos(gamma + 2 xi))/2 when both areas are pi/2."""
    _, c2 = ramsey_coefficients(config)
    return min(1.0, max(0.0, abs(c2) ** 2))


def detection_probability_dissipative(config: RamseyConfig, params: JcmParams) -> float:
    """P2 with gamma replaced by the cavity-decay phase of `params`."""
    gamma = berry_dissipative_analytic(params).gamma
    update = {"gamma": gamma, "gamma_mode": GammaMode.DISSIPATIVE}
    return detection_probability(config.model_copy(update=update))


# =============================================================================
# Exact passage
# =============================================================================


@dataclass(frozen=True)
class ExactPassage:
    """Loop propagator elements and phase bookkeeping for one cavity passage.

    Amplitudes are raw (dynamical phases included). `passage_phase` is the
    population-weighted branch geometric phase; `raw_phase` is the
    interferometric phase arg(a22 / a11) with the weighted dynamical phases removed.
    """

    a22: complex  # <2,0|U|2,0>
    a11: complex  # <1,0|U|1,0>
    a12: complex  # <1,m|U|2,0>
    weights: tuple[float, float]
    gamma_plus: float
    gamma_minus: float
    dynamical_upper: float
    dynamical_lower: float
    subspace_leakage: float
    duration: float

    @property
    def passage_phase(self) -> float:
        return self.weights[0] * self.gamma_plus + self.weights[1] * self.gamma_minus

    @property
    def raw_phase(self) -> float:
        upper = np.angle(self.a22) - self.dynamical_upper
        phase = upper - (np.angle(self.a11) - self.dynamical_lower)
        return float(np.angle(np.exp(1j * phase)))

    @property
    def photon_leakage(self) -> float:
        return abs(self.a12) ** 2

    @property
    def contrast(self) -> float:
        """(Pmax - Pmin) / (Pmax + Pmin) of the pi/2 fringe."""
        total = abs(self.a22) ** 2 + abs(self.a11) ** 2 + self.photon_leakage
        return 2.0 * abs(self.a22) * abs(self.a11) / total

    def detection_probability(self, xi: float | np.ndarray) -> float | np.ndarray:
        """pi/2-area fringe with the passage phase on the |2> channel.

        The |1,m> part left behind by the passage reaches |2> with weight
        sin^2(A2/2) = 1/2 and does not interfere.
        """
        xi = np.asarray(xi, dtype=float)
        upper = abs(self.a22) * np.exp(1j * (self.passage_phase + xi))
        lower = abs(self.a11) * np.exp(-1j * xi)
        p2 = 0.25 * np.abs(upper - lower) ** 2 + 0.25 * self.photon_leakage
        return float(p2) if p2.ndim == 0 else p2


def cavity_passage_exact(
    params: JcmParams | RamanParams,
    T: float,
    steps: int | None = None,
    *,
    convention: StarkConvention = StarkConvention.ELIMINATED,
) -> ExactPassage:
    """Simulate one adiabatic phi-loop of duration T for |2,0> and |1,0> inputs.

    |2,0> is split into its dressed components, each carried around the loop
    with `evolve_adiabatic_loop`; the propagator is recombined by linearity.
    RamanParams are projected onto the one-photon JCM first.
    """
    jcm = params.to_jcm_params(convention) if isinstance(params, RamanParams) else params
    theta = mixing_angle(0, jcm)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    m = jcm.m

    plus = evolve_adiabatic_loop(jcm, 0, Branch.PLUS, T, steps)
    minus = evolve_adiabatic_loop(jcm, 0, Branch.MINUS, T, steps)
    space = plus.evolution.final_state.space
    evolved_upper = (
        c * plus.evolution.final_state.amplitudes - s * minus.evolution.final_state.amplitudes
    )
    a22 = complex(evolved_upper[space.index(2, 0)])
    a12 = complex(evolved_upper[space.index(1, m)])
    leakage = max(0.0, 1.0 - abs(a22) ** 2 - abs(a12) ** 2)

    lower_family = jcm_loop_family(space, jcm, T)
    lower_steps = steps or minimum_steps(lower_family, T, DEFAULT_STEP_MARGIN)
    lower = evolve(lower_family, tensor_basis_state(space, 1, 0), T, lower_steps)
    a11 = lower.final_state.amplitude(1, 0)

    passage = ExactPassage(
        a22=a22,
        a11=a11,
        a12=a12,
        weights=(c * c, s * s),
        gamma_plus=plus.geometric_phase,
        gamma_minus=minus.geometric_phase,
        dynamical_upper=c * c * plus.dynamical_phase + s * s * minus.dynamical_phase,
        dynamical_lower=-lower.accumulated_dynamical_phase,
        subspace_leakage=leakage,
        duration=T,
    )
    log.info(
        "cavity_passage_done",
        passage_phase=passage.passage_phase,
        raw_phase=passage.raw_phase,
        photon_leakage=passage.photon_leakage,
        contrast=passage.contrast,
    )
    return passage


# =============================================================================
# Fringes
# =============================================================================


def _model_gamma(gamma_mode: GammaMode, params: JcmParams) -> float:
    if gamma_mode is GammaMode.DISSIPATIVE:
        return berry_dissipative_analytic(params).gamma
    return berry_vacuum(params.m, params).gamma


def _ideal_fringe(xi: np.ndarray, gamma: float) -> np.ndarray:
    return np.array([detection_probability(RamseyConfig(xi=float(x), gamma=gamma)) for x in xi])


def fringe_scan(
    gamma_mode: GammaMode,
    params: JcmParams,
    xi_range: tuple[float, float] = (0.0, 2.0 * math.pi),
    points: int = FRINGE_POINTS,
    *,
    passage: ExactPassage | None = None,
) -> pd.DataFrame:
    """Fringes at pi/2 areas: no Berry phase, Berry phase from `gamma_mode`, cavity decay."""
    if points < 2:
        raise InvalidParameterError(f"points must be >= 2, got {points}")
    low, high = xi_range
    if not low < high:
        raise InvalidParameterError(f"xi range must be increasing, got {xi_range}")
    xi = np.linspace(low, high, points)

    if gamma_mode is GammaMode.EXACT_PASSAGE:
        if passage is None:
            raise InvalidParameterError("Exact-passage fringes need a simulated ExactPassage")
        p2_berry = np.asarray(passage.detection_probability(xi))
    else:
        p2_berry = _ideal_fringe(xi, _model_gamma(gamma_mode, params))
    gamma_dissipative = berry_dissipative_analytic(params).gamma
    return pd.DataFrame(
        {
            "xi": xi,
            "p2_no_berry": _ideal_fringe(xi, 0.0),
            "p2_berry": p2_berry,
            "p2_dissipative": _ideal_fringe(xi, gamma_dissipative),
        }
    )


def fringe_phase(xi: np.ndarray, p2: np.ndarray) -> float:
    """gamma in P2 = a - (contrast/2) cos(gamma + 2 xi), from a linear least-squares fit."""
    xi = np.asarray(xi, dtype=float)
    design = np.column_stack([np.ones_like(xi), np.cos(2.0 * xi), np.sin(2.0 * xi)])
    (_, b, c), *_ = np.linalg.lstsq(design, np.asarray(p2, dtype=float), rcond=None)
    return float(math.atan2(c, -b))


def fringe_offset(xi: np.ndarray, reference: np.ndarray, shifted: np.ndarray) -> float:
    """Shift in xi of `shifted` relative to `reference`: half their fringe phase difference."""
    difference = fringe_phase(xi, shifted) - fringe_phase(xi, reference)
    return float(np.angle(np.exp(1j * difference))) / 2.0
