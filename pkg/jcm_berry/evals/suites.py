"""
Cross-oracle verify suites.

berry        closed forms vs Wilson loops vs adiabatic evolution
raman        three-level model vs its effective reduction
ramsey       interferometer closed forms, fringe offsets, exact passage
dissipative  non-Hermitian closed form, its small-Gamma expansion, Wilson loops
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable

import numpy as np

from jcm_berry.dynamics import adiabatic_correction, evolve_adiabatic_loop
from jcm_berry.errors import InvalidParameterError
from jcm_berry.evals.checks import CheckResult, VerifyReport, at_least, at_most, compare
from jcm_berry.geometry import (
    berry_analytic,
    berry_dissipative_analytic,
    berry_vacuum,
    berry_wilson,
    berry_wilson_vacuum,
    dissipative_phase_value,
    fit_expansion_coefficient,
    gamma_expansion_coefficient,
)
from jcm_berry.hilbert import SpaceSpec, state_from_components, tensor_basis_state
from jcm_berry.log import get_logger
from jcm_berry.models.params import Branch, GammaMode, JcmParams, RamanParams
from jcm_berry.presets import get_preset
from jcm_berry.raman import effective_evolution, rabi_cycles_duration, validate_reduction
from jcm_berry.ramsey import (
    RamseyConfig,
    cavity_passage_exact,
    detection_probability,
    fringe_offset,
    fringe_phase,
    fringe_scan,
    ramsey_coefficients,
)
from jcm_berry.spectra import generalized_rabi_frequency, mixing_angle

log = get_logger(__name__)

DETUNING_GRID = np.linspace(-10.0, 10.0, 41)
MULTIPLICITIES = (1, 2, 3, 4)
SECTORS = (0, 1, 2, 3)
WILSON_MESH = 20000


def _grid() -> list[JcmParams]:
    return [
        JcmParams.from_detuning(delta_m=float(d), lambda_m=1.0, m=m)
        for m in MULTIPLICITIES
        for d in DETUNING_GRID
    ]


# =============================================================================
# berry
# =============================================================================


def berry_checks() -> list[CheckResult]:
    branch_sum = 0.0
    vacuum_mean = 0.0
    wilson_error = 0.0
    for params in _grid():
        for n in SECTORS:
            plus = berry_analytic(n, Branch.PLUS, params).gamma
            minus = berry_analytic(n, Branch.MINUS, params).gamma
            branch_sum = max(branch_sum, abs(plus + minus - 2.0 * math.pi * (2 * n + params.m)))
            for branch, exact in ((Branch.PLUS, plus), (Branch.MINUS, minus)):
                loop = berry_wilson(n, branch, params, WILSON_MESH).gamma
                wilson_error = max(wilson_error, abs(loop - exact))
        vacuum = berry_vacuum(params.m, params)
        weights = vacuum.weights or (math.nan, math.nan)
        plus0 = berry_analytic(0, Branch.PLUS, params).gamma
        minus0 = berry_analytic(0, Branch.MINUS, params).gamma
        mean = weights[0] * plus0 + weights[1] * minus0
        vacuum_mean = max(vacuum_mean, abs(vacuum.gamma - mean))

    checks = [
        at_most("branch_sum_identity", branch_sum, 1e-12),
        at_most("vacuum_weighted_mean", vacuum_mean, 1e-12),
        at_most("wilson_vs_analytic", wilson_error, 1e-6),
    ]

    detuned = JcmParams.from_detuning(delta_m=1.0, lambda_m=1.0)
    exact = berry_analytic(0, Branch.PLUS, detuned).gamma
    durations = (500.0, 1000.0, 2000.0)
    phases = [
        evolve_adiabatic_loop(detuned, 0, Branch.PLUS, T).geometric_phase for T in durations
    ]
    errors = [abs(phase - exact) for phase in phases]
    extrapolated = 2.0 * phases[1] - phases[0]
    checks.append(compare("adiabatic_vs_analytic", extrapolated, exact, 1e-3))
    checks.append(
        compare(
            "adiabatic_leading_correction",
            phases[0] - exact,
            -adiabatic_correction(0, detuned, durations[0]),
            0.1,
            relative=True,
        )
    )
    checks.append(
        at_least(
            "adiabatic_error_decreases",
            float(errors[0] > errors[1] > errors[2]),
            1.0,
            message=f"errors at T, 2T, 4T: {errors[0]:.2e}, {errors[1]:.2e}, {errors[2]:.2e}",
        )
    )
    checks.append(
        at_most(
            "adiabatic_raw_error",
            errors[0],
            1e-2,
            informational=True,
            message="first-order non-adiabatic shift is 3 pi^2 m^2 sin^2(theta) / (R T)",
        )
    )
    return checks


# =============================================================================
# raman
# =============================================================================


def raman_checks() -> list[CheckResult]:
    space = SpaceSpec(atom_levels=2, photon_cutoff=3)
    checks: list[CheckResult] = []

    superposition = state_from_components(
        space, {(2, 0): 1.0 / math.sqrt(2.0), (1, 0): 1.0 / math.sqrt(2.0)}
    )
    uncoupled = RamanParams(omega0=1.0, g=0.0, delta=10.0)
    stark_only = validate_reduction(uncoupled, superposition, 20.0)
    checks.append(at_least("uncoupled_stark_fidelity", stark_only.final_fidelity, 0.995))
    checks.append(at_most("full_model_norm_drift", stark_only.norm_drift, 1e-8))

    upper = tensor_basis_state(space, 2, 0)
    symmetric = RamanParams(omega0=1.0, g=1.0, delta=20.0)
    report = validate_reduction(symmetric, upper, rabi_cycles_duration(symmetric, 2))
    checks.append(at_least("resonant_transfer_fidelity", report.final_fidelity, 0.98))
    checks.append(at_most("resonant_level3_population", report.max_level3_population, 0.05))

    final_deficits = []
    worst_deficits = []
    for k in (3.0, 6.0, 12.0):
        scaled = RamanParams(omega0=k, g=k, delta=k * k)
        run = validate_reduction(scaled, upper, rabi_cycles_duration(scaled, 1))
        final_deficits.append(1.0 - run.final_fidelity)
        worst_deficits.append(1.0 - run.min_fidelity)
    checks.append(
        at_least(
            "deficit_shrinks_with_detuning",
            float(final_deficits[0] > final_deficits[1] > final_deficits[2]),
            1.0,
            message=", ".join(f"{d:.2e}" for d in final_deficits),
        )
    )
    checks.append(
        at_least(
            "worst_deficit_shrinks_with_detuning",
            float(worst_deficits[0] > worst_deficits[1] > worst_deficits[2]),
            1.0,
            informational=True,
            message=", ".join(f"{d:.2e}" for d in worst_deficits),
        )
    )

    times = np.linspace(0.0, 50.0, 101)
    base = effective_evolution(symmetric, upper, times)
    rotated = effective_evolution(symmetric.model_copy(update={"phi": 1.3}), upper, times)
    checks.append(
        at_most(
            "phase_invariant_populations",
            float(np.max(np.abs(np.abs(base) ** 2 - np.abs(rotated) ** 2))),
            1e-10,
        )
    )

    cavity_params = get_preset("paper-cavity").raman
    if cavity_params is None:
        raise InvalidParameterError("cavity preset carries no Raman parameters")
    cavity = validate_reduction(cavity_params, upper, rabi_cycles_duration(cavity_params, 10))
    note = "delta = 3 Omega0 leaves fourth-order Stark errors of order Omega0/27"
    checks.append(
        at_least(
            "cavity_preset_fidelity",
            cavity.final_fidelity,
            0.95,
            informational=True,
            message=note,
        )
    )
    checks.append(
        at_most(
            "cavity_preset_level3_population",
            cavity.max_level3_population,
            0.1,
            informational=True,
        )
    )
    return checks


# =============================================================================
# ramsey
# =============================================================================


def ramsey_checks() -> list[CheckResult]:
    areas = np.linspace(0.0, 2.0 * math.pi, 5)
    phases = np.linspace(-math.pi, math.pi, 5)
    unitarity = 0.0
    specialization = 0.0
    for a1, a2, gamma, xi in itertools.product(areas, areas, phases, phases):
        config = RamseyConfig(pulse_area_1=a1, pulse_area_2=a2, gamma=gamma, xi=xi)
        c1, c2 = ramsey_coefficients(config)
        unitarity = max(unitarity, abs(abs(c1) ** 2 + abs(c2) ** 2 - 1.0))
    for gamma, xi in itertools.product(phases, phases):
        p2 = detection_probability(RamseyConfig(gamma=gamma, xi=xi))
        specialization = max(specialization, abs(p2 - (1.0 - math.cos(gamma + 2.0 * xi)) / 2.0))

    checks = [
        at_most("ramsey_unitarity", unitarity, 1e-12),
        at_most("pi_half_specialization", specialization, 1e-12),
        compare(
            "berry_fringe_at_zero_xi",
            detection_probability(RamseyConfig(gamma=math.pi / 4.0)),
            (1.0 - math.cos(math.pi / 4.0)) / 2.0,
            1e-12,
        ),
    ]

    fringe_params = get_preset("paper-fig4").jcm
    table = fringe_scan(GammaMode.IDEAL, fringe_params)
    offset = fringe_offset(table["xi"], table["p2_no_berry"], table["p2_berry"])
    checks.append(compare("fringe_offset", offset, math.pi / 8.0, 0.01))
    difference = float(np.max(np.abs(table["p2_dissipative"] - table["p2_berry"])))
    checks.append(at_most("decay_fringe_difference", difference, 0.01))

    audit = JcmParams.from_detuning(delta_m=2.0 * math.sqrt(3.0), lambda_m=1.0)
    passage = cavity_passage_exact(audit, 500.0 * math.pi)
    xi = np.linspace(0.0, 2.0 * math.pi, 401)
    exact_phase = fringe_phase(xi, passage.detection_probability(xi))
    model_phase = berry_vacuum(1, audit).gamma
    checks.append(compare("exact_passage_fringe_phase", exact_phase, model_phase, 0.05))
    checks.append(
        at_most("exact_passage_photon_leakage", passage.photon_leakage, 1.0, informational=True)
    )
    checks.append(at_least("exact_passage_contrast", passage.contrast, 0.0, informational=True))
    checks.append(
        compare(
            "exact_passage_raw_phase",
            passage.raw_phase,
            model_phase,
            math.pi,
            informational=True,
            message="dynamical-phase-compensated interference phase",
        )
    )
    return checks


# =============================================================================
# dissipative
# =============================================================================


def dissipative_checks() -> list[CheckResult]:
    closed_gap = 0.0
    for delta in DETUNING_GRID:
        params = JcmParams.from_detuning(delta_m=float(delta), lambda_m=1.0)
        gap = berry_dissipative_analytic(params).gamma - berry_vacuum(1, params).gamma
        closed_gap = max(closed_gap, abs(gap))
    checks = [at_most("zero_decay_reduction", closed_gap, 1e-12)]

    base = JcmParams.from_detuning(delta_m=2.0 * math.sqrt(3.0), lambda_m=1.0)
    rabi = generalized_rabi_frequency(0, base)
    gamma0 = berry_vacuum(1, base).gamma
    ratios = np.geomspace(1e-3, 1e-2, 9)
    p_ideal = (1.0 - math.cos(gamma0)) / 2.0
    shifts = [
        abs(
            (1.0 - math.cos(dissipative_phase_value(base.delta_m, 1.0, r * rabi))) / 2.0 - p_ideal
        )
        for r in ratios
    ]
    slope = float(np.polyfit(np.log(ratios), np.log(shifts), 1)[0])
    checks.append(compare("decay_probability_slope", slope, 2.0, 0.1))

    coefficients = gamma_expansion_coefficient(base)
    fitted = fit_expansion_coefficient(base)
    checks.append(
        compare("expansion_fd_vs_fit", coefficients.numerical, fitted, 1e-4, relative=True)
    )
    theta = mixing_angle(0, base)
    closed = (math.pi / 4.0) * math.sin(theta) ** 2 * (1.0 - 4.0 * math.cos(theta) ** 2)
    checks.append(
        compare("expansion_closed_form", coefficients.numerical, closed, 1e-6, relative=True)
    )
    checks.append(
        compare(
            "approximate_expansion_coefficient",
            coefficients.approximate,
            coefficients.numerical,
            1e-6,
            relative=True,
            informational=True,
            message="approximate form vanishes at resonance where the exact value is pi/4",
        )
    )

    decaying = base.updated(gamma_decay=0.2)
    wilson = berry_wilson_vacuum(decaying)
    expected = berry_dissipative_analytic(decaying).gamma
    checks.append(compare("wilson_vs_dissipative_closed_form", wilson.gamma, expected, 1e-6))
    undamped = berry_wilson_vacuum(base).gamma
    checks.append(compare("wilson_vacuum_zero_decay", undamped, gamma0, 1e-6))

    fringe_params = get_preset("paper-fig4").jcm
    config = RamseyConfig(gamma=berry_vacuum(1, fringe_params).gamma)
    decayed = RamseyConfig(gamma=berry_dissipative_analytic(fringe_params).gamma)
    checks.append(
        at_most(
            "preset_decay_probability_shift",
            abs(detection_probability(decayed) - detection_probability(config)),
            0.01,
        )
    )
    return checks


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "berry": berry_checks,
    "raman": raman_checks,
    "ramsey": ramsey_checks,
    "dissipative": dissipative_checks,
}


def run_suite(name: str) -> VerifyReport:
    """Run one suite, or every suite for "all"."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        known = ", ".join([*SUITES, "all"])
        raise InvalidParameterError(f"Unknown verify suite {name!r}; choose one of: {known}")

    report = VerifyReport(suite=name)
    for suite in names:
        log.info("verify_suite_start", suite=suite)
        report.checks.extend(SUITES[suite]())
    log.info("verify_done", suite=name, passed=report.passed, checks=len(report.checks))
    return report
