"""
Berry phases of the phi-dependent JCM.

Four independent routes to the same numbers:

- closed forms for the dressed branches and the vacuum state
- discretized Wilson loops over eigenvectors of the phi-shifted Hamiltonian
  (biorthogonal when the cavity decays)
- the time-domain loop in `jcm_berry.dynamics.evolve_adiabatic_loop`
- the non-Hermitian closed form and its small-Gamma expansion

Phases are never reduced modulo 2 pi here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from jcm_berry.errors import InvalidParameterError, TrackingError
from jcm_berry.hilbert import SpaceSpec
from jcm_berry.log import get_logger
from jcm_berry.models.hamiltonians import build_jcm_dissipative
from jcm_berry.models.params import BerryMethod, Branch, JcmParams
from jcm_berry.settings import get_settings
from jcm_berry.spectra import complex_mixing_data, generalized_rabi_frequency, mixing_angle

log = get_logger(__name__)

MAX_STEP_INCREMENT = math.pi / 4.0
MIN_TRACKING_OVERLAP = 0.9


@dataclass(frozen=True)
class BerryResult:
    """A Berry phase and how it was obtained."""

    gamma: float
    method: BerryMethod
    m: int
    n: int = 0
    branch: Branch | None = None  # None for the vacuum superposition
    mesh: int | None = None
    max_step_increment: float | None = None
    gamma_complex: complex | None = None
    solid_angle: float | None = None
    weights: tuple[float, float] | None = None  # (+, -) dressed populations of |2,0>


# =============================================================================
# Closed forms
# =============================================================================


def berry_analytic(n: int, branch: Branch, params: JcmParams) -> BerryResult:
    """gamma_+ = m pi (1 - cos theta) + 2 pi n; gamma_- = -m pi (1 - cos theta) + 2 pi (n + m)."""
    theta = mixing_angle(n, params)
    geometric = params.m * math.pi * (1.0 - math.cos(theta))
    if branch is Branch.PLUS:
        gamma = geometric + 2.0 * math.pi * n
    else:
        gamma = -geometric + 2.0 * math.pi * (n + params.m)
    return BerryResult(gamma=gamma, method=BerryMethod.ANALYTIC, m=params.m, n=n, branch=branch)


def berry_vacuum(m: int, params: JcmParams) -> BerryResult:
    """Vacuum-induced phase of |2,0>: (m pi / 2)(1 - cos 2 theta_0m) = m Omega_m / 4."""
    if params.m != m:
        params = params.updated(m=m)
    theta = mixing_angle(0, params)
    cos_2theta = math.cos(2.0 * theta)
    solid_angle = 2.0 * math.pi * (1.0 - cos_2theta)
    weights = (math.cos(theta / 2.0) ** 2, math.sin(theta / 2.0) ** 2)
    return BerryResult(
        gamma=m * solid_angle / 4.0,
        method=BerryMethod.ANALYTIC,
        m=m,
        solid_angle=solid_angle,
        weights=weights,
    )


def dissipative_phase_value(
    delta: float, lambda_m: float, gamma_decay: float, m: int = 1, n: int = 0
) -> float:
    """(m pi / 2)(1 - Re z) for raw parameters; any sign of gamma_decay.

    Re z is even in gamma_decay, so a negative rate is evaluated at its magnitude.
    """
    params = JcmParams.from_detuning(
        delta_m=delta, lambda_m=lambda_m, m=m, gamma_decay=abs(gamma_decay)
    )
    z = complex_mixing_data(n, params)
    return m * math.pi / 2.0 * (1.0 - z.real)


def berry_dissipative_analytic(params: JcmParams) -> BerryResult:
    """Geometric phase of |2,0> under H - i Gamma a^dagger a / 2."""
    z = complex_mixing_data(0, params)
    gamma = params.m * math.pi / 2.0 * (1.0 - z.real)
    return BerryResult(gamma=gamma, method=BerryMethod.DISSIPATIVE_ANALYTIC, m=params.m)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Quadratic coefficient c in gamma_d = gamma_01 + c (Gamma/R)^2."""

    approximate: float  # (pi/4) cos^2 / (8 sin^2 + 16 sin^4 + cos^4)
    numerical: float  # central second difference of the closed form
    theta: float
    rabi: float  # R = sqrt(Delta^2 + 4 lambda^2)

    @property
    def discrepancy(self) -> float:
        return self.numerical - self.approximate


def gamma_expansion_coefficient(
    params: JcmParams, relative_step: float = 1e-3
) -> ExpansionCoefficients:
    """Approximate and numerical quadratic coefficients of the small-Gamma expansion."""
    base = params.updated(gamma_decay=0.0)
    theta = mixing_angle(0, base)
    rabi = generalized_rabi_frequency(0, base)
    sin2, cos2 = math.sin(theta) ** 2, math.cos(theta) ** 2
    approximate = (math.pi / 4.0) * cos2 / (8.0 * sin2 + 16.0 * sin2**2 + cos2**2)

    h = relative_step * rabi
    args = (base.delta_m, base.lambda_m)
    upper = dissipative_phase_value(*args, h, m=base.m)
    centre = dissipative_phase_value(*args, 0.0, m=base.m)
    lower = dissipative_phase_value(*args, -h, m=base.m)
    numerical = (upper - 2.0 * centre + lower) / (2.0 * relative_step**2)
    return ExpansionCoefficients(
        approximate=approximate, numerical=numerical, theta=theta, rabi=rabi
    )


def fit_expansion_coefficient(params: JcmParams, ratios: np.ndarray | None = None) -> float:
    """Least-squares c from a sweep of Gamma/R: (gamma_d - gamma_01)/u^2 = c + d u^2."""
    base = params.updated(gamma_decay=0.0)
    rabi = generalized_rabi_frequency(0, base)
    u = np.geomspace(1e-4, 1e-2, 25) if ratios is None else np.asarray(ratios, dtype=float)
    centre = dissipative_phase_value(base.delta_m, base.lambda_m, 0.0, m=base.m)
    shifts = np.array(
        [
            dissipative_phase_value(base.delta_m, base.lambda_m, r * rabi, m=base.m) - centre
            for r in u
        ]
    )
    slope, intercept = np.polyfit(u**2, shifts / u**2, 1)
    return float(intercept)


# =============================================================================
# Wilson loops
# =============================================================================


def _harmonic_parts(space: SpaceSpec, params: JcmParams) -> tuple[np.ndarray, np.ndarray]:
    """Split H(phi) = A + e^{i m phi} K + e^{-i m phi} K^dagger from three builder calls."""
    m = params.m
    h0 = build_jcm_dissipative(space, params, phi=0.0).matrix
    h_quarter = build_jcm_dissipative(space, params, phi=math.pi / (2.0 * m)).matrix
    h_half = build_jcm_dissipative(space, params, phi=math.pi / m).matrix
    static = 0.5 * (h0 + h_half)
    symmetric = 0.5 * (h0 - h_half)  # K + K^dagger
    antisymmetric = -1j * (h_quarter - static)  # K - K^dagger
    return static, 0.5 * (symmetric + antisymmetric)


@dataclass(frozen=True, eq=False)
class _LoopData:
    phase: complex
    max_increment: float
    mesh: int
    right0: np.ndarray
    left0: np.ndarray


def _sorted_eig(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values, vectors = np.linalg.eig(stack)
    order = np.argsort(values.real, axis=1)
    values = np.take_along_axis(values, order, axis=1)
    vectors = np.take_along_axis(vectors, order[:, None, :], axis=2)
    return values, vectors


def _wilson_once(
    static: np.ndarray,
    coupling: np.ndarray,
    photons: tuple[int, int],
    m: int,
    branch: Branch,
    mesh: int,
    dissipative: bool,
) -> _LoopData:
    phis = np.linspace(0.0, 2.0 * np.pi, mesh + 1)
    rotation = np.exp(1j * m * phis)[:, None, None]
    stack = static[None] + rotation * coupling[None] + np.conj(rotation) * coupling.conj().T[None]
    column = 1 if branch is Branch.PLUS else 0

    if dissipative:
        _, right_all = _sorted_eig(stack)
        _, left_all = _sorted_eig(np.conj(np.transpose(stack, (0, 2, 1))))
        right = right_all[:, :, column]
        left = left_all[:, :, column]
    else:
        _, vectors = np.linalg.eigh(stack)
        right = vectors[:, :, column]
        left = right
    right = right / np.linalg.norm(right, axis=1)[:, None]

    successive = np.abs(np.einsum("ki,ki->k", right[:-1].conj(), right[1:]))
    worst = float(np.min(successive))
    if worst < MIN_TRACKING_OVERLAP:
        raise TrackingError(
            f"Eigenvector path lost at mesh {mesh}: successive overlap {worst:.3f} < "
            f"{MIN_TRACKING_OVERLAP}",
            overlap=worst,
            mesh=mesh,
        )

    # single-valued gauge: anchor component carries exp(-i n_anchor phi)
    anchor = int(np.argmax(np.abs(right[0])))
    anchor_value = right[:, anchor]
    gauge = np.exp(-1j * photons[anchor] * phis) * np.conj(anchor_value) / np.abs(anchor_value)
    right = right * gauge[:, None]
    if dissipative:
        norms = np.einsum("ki,ki->k", left.conj(), right)
        left = left / np.conj(norms)[:, None]
    else:
        left = right

    # averaging forward and backward links cancels the non-telescoping O(dphi^2) terms
    forward = np.einsum("ki,ki->k", left[:-1].conj(), right[1:])
    backward = np.einsum("ki,ki->k", left[1:].conj(), right[:-1])
    steps = 0.5j * (np.log(forward) - np.log(backward))
    increments = steps.real
    phase = complex(np.sum(steps))
    return _LoopData(
        phase=phase,
        max_increment=float(np.max(np.abs(increments))),
        mesh=mesh,
        right0=right[0],
        left0=left[0],
    )


def _wilson_loop(
    n: int, branch: Branch, params: JcmParams, mesh: int, mesh_cap: int | None
) -> _LoopData:
    if mesh < 2:
        raise InvalidParameterError(f"Wilson mesh must be >= 2, got {mesh}")
    mixing_angle(n, params)  # rejects the degenerate sector
    cap = mesh_cap or get_settings().wilson_mesh_cap
    space = SpaceSpec(atom_levels=2, photon_cutoff=n + params.m)
    static, coupling = _harmonic_parts(space, params)
    indices = [space.index(2, n), space.index(1, n + params.m)]
    block = np.ix_(indices, indices)
    dissipative = params.gamma_decay > 0.0

    current = mesh
    while True:
        data = _wilson_once(
            static[block],
            coupling[block],
            (n, n + params.m),
            params.m,
            branch,
            current,
            dissipative,
        )
        if data.max_increment < MAX_STEP_INCREMENT:
            return data
        if current * 2 > cap:
            raise TrackingError(
                f"Wilson mesh cap {cap} reached with step increment {data.max_increment:.3f}",
                overlap=float("nan"),
                mesh=current,
            )
        current *= 2
        log.info("wilson_mesh_refined", mesh=current, max_increment=data.max_increment)


def berry_wilson(
    n: int,
    branch: Branch,
    params: JcmParams,
    mesh: int = 20000,
    *,
    mesh_cap: int | None = None,
) -> BerryResult:
    """Berry phase of a dressed branch from a discretized Wilson loop over phi in [0, 2 pi].

    With gamma_decay > 0 the loop uses biorthogonal left/right eigenvectors
    (<L|R> = 1) and `gamma_complex` carries the log-amplitude as imaginary part.
    Each step is i/2 (log <L_k|R_k+1> - log <L_k+1|R_k>), so the error falls as 1/mesh^2
    in both cases.
    """
    data = _wilson_loop(n, branch, params, mesh, mesh_cap)
    return BerryResult(
        gamma=data.phase.real,
        method=BerryMethod.WILSON,
        m=params.m,
        n=n,
        branch=branch,
        mesh=data.mesh,
        max_step_increment=data.max_increment,
        gamma_complex=data.phase if params.gamma_decay > 0.0 else None,
    )


def berry_wilson_vacuum(
    params: JcmParams, mesh: int = 20000, *, mesh_cap: int | None = None
) -> BerryResult:
    """Vacuum phase of |2,0> from both n=0 Wilson loops, weighted biorthogonally.

    Weights are <2,0|R><L|2,0> for each branch; their sum is 1.
    """
    upper = 0  # |2,0> is the first sector state
    phases: list[complex] = []
    weights: list[complex] = []
    increments: list[float] = []
    meshes: list[int] = []
    for branch in (Branch.PLUS, Branch.MINUS):
        data = _wilson_loop(0, branch, params, mesh, mesh_cap)
        phases.append(data.phase)
        weights.append(complex(data.right0[upper] * np.conj(data.left0[upper])))
        increments.append(data.max_increment)
        meshes.append(data.mesh)

    combined = weights[0] * phases[0] + weights[1] * phases[1]
    return BerryResult(
        gamma=combined.real,
        method=BerryMethod.WILSON,
        m=params.m,
        mesh=max(meshes),
        max_step_increment=max(increments),
        gamma_complex=combined,
        weights=(weights[0].real, weights[1].real),
    )
