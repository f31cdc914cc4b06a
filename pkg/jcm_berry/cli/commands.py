"""
Command implementations.

Each command computes a CsvTable from plain arguments and writes it; the
argparse layer in `main.py` only translates flags. Frequencies arrive in kHz
(ordinary frequency) and are converted to rad/s here.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from rich.console import Console
from rich.progress import Progress
from rich.table import Table

from jcm_berry.cli.tables import CsvTable, SweepSpec
from jcm_berry.dynamics import evolve_adiabatic_loop
from jcm_berry.errors import InvalidParameterError
from jcm_berry.evals.checks import VerifyReport
from jcm_berry.evals.suites import run_suite
from jcm_berry.geometry import (
    berry_analytic,
    berry_dissipative_analytic,
    berry_vacuum,
    berry_wilson,
)
from jcm_berry.hilbert import SpaceSpec, state_from_components
from jcm_berry.log import get_logger
from jcm_berry.models.params import (
    BerryMethod,
    Branch,
    GammaMode,
    GammaUnits,
    JcmParams,
    RamanParams,
    StarkConvention,
    gamma_from_khz,
    khz_to_angular,
)
from jcm_berry.presets import get_preset
from jcm_berry.raman import rabi_cycles_duration, validate_reduction
from jcm_berry.ramsey import (
    RamseyConfig,
    cavity_passage_exact,
    detection_probability,
    fringe_scan,
)
from jcm_berry.sweeps import run_sweep

log = get_logger(__name__)
console = Console(stderr=True)

OutPath = str | Path | None


def _emit(table: CsvTable, out_path: OutPath) -> CsvTable:
    table.write(out_path)
    log.info("table_written", rows=len(table.frame), out=str(out_path or "-"))
    return table


def _preset_jcm(
    preset: str, gamma_units: GammaUnits, gamma_decay_khz: float | None
) -> JcmParams:
    params = get_preset(preset, gamma_units).jcm
    if gamma_decay_khz is not None:
        params = params.updated(gamma_decay=gamma_from_khz(gamma_decay_khz, gamma_units))
    return params


# =============================================================================
# Figures
# =============================================================================


def cmd_fig1(
    m_list: Sequence[int] = (1, 2, 3, 4),
    delta_range: tuple[float, float] = (-10.0, 10.0),
    points: int = 401,
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> CsvTable:
    """Vacuum phase gamma_0m against Delta/lambda, one column per m."""
    if points < 2:
        raise InvalidParameterError(f"points must be >= 2, got {points}")
    if not m_list or min(m_list) < 1:
        raise InvalidParameterError(f"m values must be >= 1, got {list(m_list)}")
    ratios = np.linspace(delta_range[0], delta_range[1], points)
    columns: dict[str, np.ndarray] = {"delta_over_lambda": ratios}
    for m in m_list:
        grid = [JcmParams.from_detuning(delta_m=float(r), lambda_m=1.0, m=m) for r in ratios]
        columns[f"gamma_0{m}"] = np.array([berry_vacuum(m, p).gamma for p in grid])
    meta = {**(provenance or {}), "lambda": "1 (Delta in units of lambda)"}
    return _emit(CsvTable(pd.DataFrame(columns), meta), out_path)


def cmd_fig4(
    preset: str = "paper-fig4",
    xi_range: tuple[float, float] = (0.0, 2.0 * math.pi),
    points: int = 401,
    gamma_units: GammaUnits = GammaUnits.ORDINARY,
    gamma_decay_khz: float | None = None,
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> CsvTable:
    """Fringes without Berry phase, with it, and with cavity decay."""
    params = _preset_jcm(preset, gamma_units, gamma_decay_khz)
    frame = fringe_scan(GammaMode.IDEAL, params, xi_range, points)
    meta = {
        **(provenance or {}),
        "preset": preset,
        "gamma_units": gamma_units.value,
        "gamma_decay_rad_s": repr(params.gamma_decay),
    }
    return _emit(CsvTable(frame, meta), out_path)


# =============================================================================
# Single points
# =============================================================================


def cmd_berry(
    m: int = 1,
    n: int = 0,
    branch: Branch = Branch.PLUS,
    delta_over_lambda: float = 0.0,
    method: BerryMethod = BerryMethod.ANALYTIC,
    mesh: int = 20000,
    loop_time: float = 500.0,
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> CsvTable:
    """Berry phase of one dressed branch (lambda = 1; loop_time is lambda T)."""
    params = JcmParams.from_detuning(delta_m=delta_over_lambda, lambda_m=1.0, m=m)
    reference = berry_analytic(n, branch, params).gamma
    if method is BerryMethod.ANALYTIC:
        gamma = reference
    elif method is BerryMethod.WILSON:
        gamma = berry_wilson(n, branch, params, mesh).gamma
    elif method is BerryMethod.ADIABATIC:
        gamma = evolve_adiabatic_loop(params, n, branch, loop_time).geometric_phase
    else:
        raise InvalidParameterError(f"Method {method.value!r} does not apply to a dressed branch")
    frame = pd.DataFrame(
        {
            "m": [m],
            "n": [n],
            "branch": [branch.sign],
            "delta_over_lambda": [delta_over_lambda],
            "gamma": [gamma],
            "gamma_analytic": [reference],
            "residual": [abs(gamma - reference)],
        }
    )
    return _emit(CsvTable(frame, {**(provenance or {}), "method": method.value}), out_path)


def cmd_ramsey(
    pulse_area_1: float = math.pi / 2.0,
    pulse_area_2: float = math.pi / 2.0,
    xi: float = 0.0,
    gamma: float | None = None,
    gamma_mode: GammaMode = GammaMode.IDEAL,
    preset: str = "paper-fig4",
    gamma_units: GammaUnits = GammaUnits.ORDINARY,
    gamma_decay_khz: float | None = None,
    loop_time: float = 500.0 * math.pi,
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> CsvTable:
    """Detection probability P2 for one interferometer setting.

    Without an explicit `gamma`, the phase comes from the preset according to
    `gamma_mode`; exact-passage runs one simulated loop of lambda T = loop_time.
    """
    params = _preset_jcm(preset, gamma_units, gamma_decay_khz)
    if gamma_mode is GammaMode.EXACT_PASSAGE:
        quarter = math.pi / 2.0
        if not (math.isclose(pulse_area_1, quarter) and math.isclose(pulse_area_2, quarter)):
            raise InvalidParameterError("Exact-passage fringes are defined for pi/2 pulse areas")
        closed = params.updated(gamma_decay=0.0)
        passage = cavity_passage_exact(closed, loop_time / params.lambda_m)
        phase = passage.passage_phase
        p2 = float(passage.detection_probability(xi))
    else:
        if gamma is not None:
            phase = gamma
        elif gamma_mode is GammaMode.DISSIPATIVE:
            phase = berry_dissipative_analytic(params).gamma
        else:
            phase = berry_vacuum(params.m, params).gamma
        config = RamseyConfig(
            pulse_area_1=pulse_area_1,
            pulse_area_2=pulse_area_2,
            xi=xi,
            gamma=phase,
            gamma_mode=gamma_mode,
        )
        p2 = detection_probability(config)
    frame = pd.DataFrame(
        {
            "pulse_area_1": [pulse_area_1],
            "pulse_area_2": [pulse_area_2],
            "xi": [xi],
            "gamma": [phase],
            "p2": [p2],
        }
    )
    meta = {**(provenance or {}), "preset": preset, "gamma_mode": gamma_mode.value}
    return _emit(CsvTable(frame, meta), out_path)


def cmd_raman_validate(
    preset: str | None = "paper-cavity",
    omega0_khz: float | None = None,
    g_khz: float | None = None,
    delta_khz: float | None = None,
    phi: float = 0.0,
    cycles: float = 10.0,
    initial: str = "upper",
    convention: StarkConvention = StarkConvention.ELIMINATED,
    steps: int | None = None,
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> CsvTable:
    """Full vs effective Raman evolution; explicit kHz values override the preset."""
    base = get_preset(preset).raman if preset else None
    data: dict[str, float] = (
        base.model_dump(include={"omega0", "g", "delta"}) if base is not None else {}
    )
    overrides = {"omega0": omega0_khz, "g": g_khz, "delta": delta_khz}
    data.update({k: khz_to_angular(v) for k, v in overrides.items() if v is not None})
    missing = sorted({"omega0", "g", "delta"} - set(data))
    if missing:
        raise InvalidParameterError(f"Give a Raman preset or values for: {', '.join(missing)}")
    params = RamanParams(phi=phi, **data)

    space = SpaceSpec(atom_levels=2, photon_cutoff=3)
    states = {
        "upper": {(2, 0): 1.0},
        "superposition": {(2, 0): 1.0 / math.sqrt(2.0), (1, 0): 1.0 / math.sqrt(2.0)},
    }
    if initial not in states:
        raise InvalidParameterError(f"Unknown initial state {initial!r}")
    psi0 = state_from_components(space, states[initial])
    report = validate_reduction(
        params, psi0, rabi_cycles_duration(params, cycles), steps, convention=convention
    )

    strobe = np.isin(report.sample_times, report.strobe_times).astype(int)
    frame = pd.DataFrame(
        {
            "t": report.sample_times,
            "fidelity": report.fidelity_history,
            "level3_population": report.level3_history,
            "strobe": strobe,
        }
    )
    meta = {
        **(provenance or {}),
        "preset": preset or "none",
        "final_fidelity": repr(report.final_fidelity),
        "min_fidelity": repr(report.min_fidelity),
        "max_level3_population": repr(report.max_level3_population),
        "flagged": str(report.flagged).lower(),
    }
    return _emit(CsvTable(frame, meta), out_path)


# =============================================================================
# Verify and sweeps
# =============================================================================


def render_report(report: VerifyReport) -> None:
    """Show a verify report as a rich table on stderr."""
    table = Table(title=f"verify: {report.suite}")
    for column in ("check", "value", "reference", "tolerance", "status"):
        table.add_column(column)
    for check in report.checks:
        if check.informational:
            status = "[yellow]INFO[/yellow]"
        elif check.passed:
            status = "[green]PASS[/green]"
        else:
            status = "[red]FAIL[/red]"
        table.add_row(
            check.name,
            f"{check.value:.6g}",
            f"{check.reference:.6g}",
            f"{check.tolerance:.1e}",
            status,
        )
    console.print(table)


def cmd_verify(
    suite: str = "all",
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> tuple[VerifyReport, CsvTable]:
    report = run_suite(suite)
    render_report(report)
    frame = pd.DataFrame(report.to_rows(), columns=list(VerifyReport.COLUMNS))
    meta = {**(provenance or {}), "suite": suite, "passed": str(report.passed).lower()}
    return report, _emit(CsvTable(frame, meta), out_path)


def _sweep_point(spec: SweepSpec, value: float) -> dict[str, float]:
    settings = {
        "delta_over_lambda": 2.0 * math.sqrt(3.0),
        "gamma_decay": 0.0,
        "xi": 0.0,
        "m": 1.0,
    }
    settings.update(spec.fixed)
    settings[spec.variable] = value
    coupling = spec.fixed.get("lambda_m", 1.0)
    params = JcmParams.from_detuning(
        delta_m=settings["delta_over_lambda"] * coupling,
        lambda_m=coupling,
        m=int(round(settings["m"])),
        gamma_decay=settings["gamma_decay"],
    )
    vacuum = berry_vacuum(params.m, params).gamma
    dissipative = berry_dissipative_analytic(params).gamma
    xi = settings["xi"]
    return {
        spec.variable: value,
        "gamma_vacuum": vacuum,
        "gamma_dissipative": dissipative,
        "p2_ideal": detection_probability(RamseyConfig(xi=xi, gamma=vacuum)),
        "p2_dissipative": detection_probability(RamseyConfig(xi=xi, gamma=dissipative)),
    }


def cmd_sweep(
    spec: SweepSpec,
    workers: int | None = None,
    out_path: OutPath = None,
    provenance: dict[str, str] | None = None,
) -> CsvTable:
    """Vacuum and dissipative phases with their pi/2 fringes along one variable."""
    values = [float(v) for v in spec.values()]
    with Progress(console=console, transient=True) as progress:
        task = progress.add_task(f"sweep {spec.variable}", total=len(values))
        rows = run_sweep(
            lambda v: _sweep_point(spec, v),
            values,
            workers,
            on_result=lambda _index, _row: progress.advance(task),
        )
    fixed = ", ".join(f"{k}={v!r}" for k, v in sorted(spec.fixed.items())) or "defaults"
    meta = {**(provenance or {}), "variable": spec.variable, "fixed": fixed}
    return _emit(CsvTable(pd.DataFrame(rows), meta), out_path)
