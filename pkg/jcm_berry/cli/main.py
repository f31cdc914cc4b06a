"""
jcm-berry command line.

    jcm-berry fig1 --m-list 1,2,3,4 --out phases.csv
    jcm-berry fig4 --preset paper-fig4
    jcm-berry berry --m 2 --n 1 --branch - --delta-over-lambda 1.5 --method wilson
    jcm-berry ramsey --gamma-mode dissipative --xi 0
    jcm-berry raman-validate --preset paper-cavity --cycles 10
    jcm-berry verify berry
    jcm-berry sweep --variable gamma_decay --min 0 --max 0.1 --points 21 --fix delta_over_lambda=0

fig1 and fig4 also answer to their older names vacuum-phases and fringes.

Exit codes: 0 success, 1 verify failure, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from collections.abc import Sequence

from pydantic import ValidationError

from jcm_berry import __version__
from jcm_berry.cli import commands
from jcm_berry.cli.config_file import apply_config, read_config
from jcm_berry.cli.tables import SweepSpec
from jcm_berry.errors import InvalidParameterError, JcmBerryError
from jcm_berry.evals.suites import SUITES
from jcm_berry.log import configure_logging, get_logger
from jcm_berry.models.params import BerryMethod, Branch, GammaMode, GammaUnits, StarkConvention
from jcm_berry.presets import PRESET_ALIASES, RAMAN_PRESETS, preset_names
from jcm_berry.settings import get_settings

log = get_logger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2

COMMAND_ALIASES = {"vacuum-phases": "fig1", "fringes": "fig4"}


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.replace(" ", "").split(",") if item]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _range(text: str) -> tuple[float, float]:
    """'low:high' with numbers or the literal 'pi' multiples like '2pi'."""
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected low:high, got {text!r}")
    return _number(parts[0]), _number(parts[1])


def _number(text: str) -> float:
    text = text.strip().lower()
    try:
        if text.endswith("pi"):
            factor = text[:-2].rstrip("*") or "1"
            return float(factor) * math.pi
        return float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from e


def _fix_entry(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), _number(value)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="Output CSV path (default: stdout)")
    common.add_argument("--config", default=None, help="'key = value' file of flag defaults")
    common.add_argument("--log-level", default=None, help="structlog level (default: settings)")
    common.add_argument("--log-json", action="store_true", help="Render logs as JSON")
    return common


def _gamma_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", default="paper-fig4", choices=preset_names())
    parser.add_argument(
        "--gamma-units",
        type=GammaUnits,
        default=GammaUnits.ORDINARY,
        choices=list(GammaUnits),
        help="ordinary: Gamma = 2 pi f; angular: Gamma = f",
    )
    parser.add_argument("--gamma-decay-khz", type=float, default=None, help="Cavity decay in kHz")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """Top-level parser and its sub-command parsers by name."""
    parser = argparse.ArgumentParser(
        prog="jcm-berry",
        description="Vacuum-induced Berry phases of the multiphoton Jaynes-Cummings model",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    subparsers: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser(
        "fig1", aliases=["vacuum-phases"], parents=[common], help="gamma_0m against Delta/lambda"
    )
    p.add_argument("--m-list", type=_int_list, default=[1, 2, 3, 4])
    p.add_argument(
        "--delta-range", type=_range, default=(-10.0, 10.0), help="low:high (use =)"
    )
    p.add_argument("--points", type=int, default=401)
    subparsers["fig1"] = p

    p = sub.add_parser(
        "fig4", aliases=["fringes"], parents=[common], help="Ramsey fringes with and without phases"
    )
    _gamma_flags(p)
    p.add_argument("--xi-range", type=_range, default=(0.0, 2.0 * math.pi), help="low:high")
    p.add_argument("--points", type=int, default=401)
    subparsers["fig4"] = p

    p = sub.add_parser("berry", parents=[common], help="Berry phase of one dressed branch")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--branch", type=Branch.parse, default=Branch.PLUS, choices=list(Branch))
    p.add_argument("--delta-over-lambda", type=_number, default=0.0)
    p.add_argument(
        "--method",
        type=BerryMethod,
        default=BerryMethod.ANALYTIC,
        choices=[BerryMethod.ANALYTIC, BerryMethod.WILSON, BerryMethod.ADIABATIC],
    )
    p.add_argument("--mesh", type=int, default=20000)
    p.add_argument("--loop-time", type=_number, default=500.0, help="lambda T of the loop")
    subparsers["berry"] = p

    p = sub.add_parser("ramsey", parents=[common], help="Detection probability P2")
    _gamma_flags(p)
    p.add_argument("--pulse-area-1", type=_number, default=math.pi / 2.0)
    p.add_argument("--pulse-area-2", type=_number, default=math.pi / 2.0)
    p.add_argument("--xi", type=_number, default=0.0)
    p.add_argument("--gamma", type=_number, default=None, help="Override the geometric phase")
    p.add_argument(
        "--gamma-mode", type=GammaMode, default=GammaMode.IDEAL, choices=list(GammaMode)
    )
    p.add_argument("--loop-time", type=_number, default=500.0 * math.pi, help="lambda T")
    subparsers["ramsey"] = p

    p = sub.add_parser("raman-validate", parents=[common], help="Full vs effective Raman model")
    raman_choices = [n for n in preset_names() if PRESET_ALIASES.get(n, n) in RAMAN_PRESETS]
    p.add_argument("--preset", default="paper-cavity", choices=[*raman_choices, "none"])
    p.add_argument("--omega0-khz", type=float, default=None)
    p.add_argument("--g-khz", type=float, default=None)
    p.add_argument("--delta-khz", type=float, default=None)
    p.add_argument("--phi", type=_number, default=0.0)
    p.add_argument("--cycles", type=float, default=10.0, help="Effective Rabi cycles")
    p.add_argument("--initial", default="upper", choices=["upper", "superposition"])
    p.add_argument(
        "--convention",
        type=StarkConvention,
        default=StarkConvention.ELIMINATED,
        choices=list(StarkConvention),
    )
    p.add_argument("--steps", type=int, default=None)
    subparsers["raman-validate"] = p

    p = sub.add_parser("verify", parents=[common], help="Run cross-oracle checks")
    p.add_argument("suite", nargs="?", default="all", choices=[*SUITES, "all"])
    subparsers["verify"] = p

    p = sub.add_parser("sweep", parents=[common], help="Parameter sweep of phases and P2")
    p.add_argument("--variable", choices=["delta_over_lambda", "gamma_decay", "xi", "m"])
    p.add_argument("--min", type=_number, default=None)
    p.add_argument("--max", type=_number, default=None)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--fix", type=_fix_entry, action="append", default=[], help="key=value")
    p.add_argument("--workers", type=int, default=None)
    subparsers["sweep"] = p

    return parser, subparsers


def _provenance(argv: Sequence[str]) -> dict[str, str]:
    return {"command": " ".join(["jcm-berry", *argv])}


def _run(args: argparse.Namespace, argv: Sequence[str]) -> int:
    meta = _provenance(argv)
    out = args.out
    if args.command == "fig1":
        commands.cmd_fig1(args.m_list, args.delta_range, args.points, out, meta)
    elif args.command == "fig4":
        commands.cmd_fig4(
            args.preset,
            args.xi_range,
            args.points,
            args.gamma_units,
            args.gamma_decay_khz,
            out,
            meta,
        )
    elif args.command == "berry":
        commands.cmd_berry(
            args.m,
            args.n,
            args.branch,
            args.delta_over_lambda,
            args.method,
            args.mesh,
            args.loop_time,
            out,
            meta,
        )
    elif args.command == "ramsey":
        commands.cmd_ramsey(
            args.pulse_area_1,
            args.pulse_area_2,
            args.xi,
            args.gamma,
            args.gamma_mode,
            args.preset,
            args.gamma_units,
            args.gamma_decay_khz,
            args.loop_time,
            out,
            meta,
        )
    elif args.command == "raman-validate":
        commands.cmd_raman_validate(
            None if args.preset == "none" else args.preset,
            args.omega0_khz,
            args.g_khz,
            args.delta_khz,
            args.phi,
            args.cycles,
            args.initial,
            args.convention,
            args.steps,
            out,
            meta,
        )
    elif args.command == "verify":
        report, _ = commands.cmd_verify(args.suite, out, meta)
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED
    elif args.command == "sweep":
        missing = [k for k in ("variable", "min", "max") if getattr(args, k) is None]
        if missing:
            raise InvalidParameterError(f"sweep needs --{', --'.join(missing)}")
        spec = SweepSpec(
            variable=args.variable,
            min=args.min,
            max=args.max,
            points=args.points,
            fixed=dict(args.fix),
        )
        commands.cmd_sweep(spec, args.workers, out, meta)
    return EXIT_OK


def _parse(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    args.command = COMMAND_ALIASES.get(args.command, args.command)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    args = _parse(parser, argv)

    settings = get_settings()
    configure_logging(args.log_level or settings.log_level, args.log_json)
    try:
        if args.config:
            apply_config(subparsers[args.command], read_config(args.config))
            args = _parse(parser, argv)
            configure_logging(args.log_level or settings.log_level, args.log_json)
        return _run(args, argv)
    except ValidationError as e:
        log.error("invalid_parameters", command=args.command, error=str(e))
        return EXIT_INVALID
    except JcmBerryError as e:
        log.error("command_failed", command=args.command, error=str(e), kind=type(e).__name__)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
