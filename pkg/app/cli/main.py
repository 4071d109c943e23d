"""Command-line entry point.

Commands
--------
  solve      --structure {c,r} --config FILE [--override s.k=v ...] [--json]
  compare    --config FILE
  sweep      --structure --config --param --from --to --steps --out [--jobs]
  threshold  --config FILE [--structure r]
  boundary   --structure --config --alpha-from --alpha-to --alpha-steps --out
  reproduce  {fig4,fig5,fig6,fig7,fig8} --out DIR [--jobs]
  verify     [--scenarios N] [--seed S]

Exit codes: 0 success, 1 verification failure, 2 infeasible scenario,
3 non-convergence, 4 config error, 5 threshold/boundary detection failure.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import structlog

from app.cli.config_io import parse_config
from app.cli.csv_io import write_boundary_csv, write_csv
from app.cli.presets import PRESETS, reproduce
from app.cli.verify import run_verification
from app.config import get_settings
from app.engine.comparison import compare_structures, profit_breakdown
from app.engine.errors import ConfigError, EquilibriumError, RootNotBracketed
from app.engine.statics import dominance_boundary, dtau_turning_point, solve
from app.engine.sweep import run_sweep, sweep_values
from app.logging_setup import configure_logging
from app.models.enums import Structure, SweepParam

logger = structlog.get_logger("tesc")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="tesc",
        description="Equilibria of a multinational's tax-efficient supply chain",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level (stderr)")
    commands = parser.add_subparsers(dest="command", required=True)

    def scenario_args(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", required=True, type=Path, help="Scenario INI file")
        sub.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="Override a config value (repeatable)",
        )

    def structure_arg(sub: argparse.ArgumentParser, required: bool = True) -> None:
        sub.add_argument(
            "--structure",
            type=Structure.parse,
            required=required,
            default=None if required else Structure.LIMITED_RISK,
            help="c (commissionaire) or r (limited-risk)",
        )

    solve_cmd = commands.add_parser("solve", help="Solve one equilibrium")
    structure_arg(solve_cmd)
    scenario_args(solve_cmd)
    solve_cmd.add_argument("--json", action="store_true", help="Emit JSON instead of key=value lines")

    compare_cmd = commands.add_parser("compare", help="Solve both structures side by side")
    scenario_args(compare_cmd)

    sweep_cmd = commands.add_parser("sweep", help="Sweep one parameter")
    structure_arg(sweep_cmd)
    scenario_args(sweep_cmd)
    sweep_cmd.add_argument("--param", type=SweepParam, choices=list(SweepParam), required=True)
    sweep_cmd.add_argument("--from", dest="start", type=float, required=True)
    sweep_cmd.add_argument("--to", dest="stop", type=float, required=True)
    sweep_cmd.add_argument("--steps", type=int, required=True)
    sweep_cmd.add_argument("--out", type=Path, required=True)
    sweep_cmd.add_argument("--jobs", type=int, default=settings.default_jobs)

    threshold_cmd = commands.add_parser("threshold", help="Tax-difference turning point")
    structure_arg(threshold_cmd, required=False)
    scenario_args(threshold_cmd)

    boundary_cmd = commands.add_parser("boundary", help="Markup vs royalty dominance boundary")
    structure_arg(boundary_cmd)
    scenario_args(boundary_cmd)
    boundary_cmd.add_argument("--alpha-from", type=float, default=0.1)
    boundary_cmd.add_argument("--alpha-to", type=float, default=0.9)
    boundary_cmd.add_argument("--alpha-steps", type=int, default=9)
    boundary_cmd.add_argument("--out", type=Path, required=True)

    reproduce_cmd = commands.add_parser("reproduce", help="Reproduce a figure preset")
    reproduce_cmd.add_argument("figure", choices=sorted(PRESETS))
    reproduce_cmd.add_argument("--out", type=Path, required=True)
    reproduce_cmd.add_argument("--jobs", type=int, default=settings.default_jobs)

    verify_cmd = commands.add_parser("verify", help="Oracle equivalence and invariant checks")
    verify_cmd.add_argument("--scenarios", type=int, default=100)
    verify_cmd.add_argument("--seed", type=int, default=7)
    return parser


def _print_fields(data: dict, prefix: str = "") -> None:
    for key, value in data.items():
        if isinstance(value, dict):
            _print_fields(value, prefix=f"{prefix}{key}.")
        elif isinstance(value, float):
            print(f"{prefix}{key}={value:.9g}")
        else:
            print(f"{prefix}{key}={value}")


def _cmd_solve(args: argparse.Namespace) -> int:
    scenario = parse_config(args.config, args.override)
    equilibrium = solve(scenario, args.structure)
    data = equilibrium.to_dict()
    data["breakdown"] = profit_breakdown(scenario, args.structure, equilibrium).to_dict()
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        _print_fields(data)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    scenario = parse_config(args.config, args.override)
    comparison = compare_structures(scenario)
    data = comparison.to_dict()
    data["C"]["breakdown"] = profit_breakdown(scenario, Structure.COMMISSIONAIRE, comparison.commissionaire).to_dict()
    data["R"]["breakdown"] = profit_breakdown(scenario, Structure.LIMITED_RISK, comparison.limited_risk).to_dict()
    _print_fields(data)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = parse_config(args.config, args.override)
    values = sweep_values(args.start, args.stop, args.steps)
    records = run_sweep(scenario, args.structure, args.param, values, jobs=args.jobs)
    write_csv(records, args.out)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def _cmd_threshold(args: argparse.Namespace) -> int:
    scenario = parse_config(args.config, args.override)
    _print_fields(dtau_turning_point(scenario, args.structure).to_dict())
    return 0


def _cmd_boundary(args: argparse.Namespace) -> int:
    scenario = parse_config(args.config, args.override)
    alphas = sweep_values(args.alpha_from, args.alpha_to, args.alpha_steps)
    curve = dominance_boundary(scenario, args.structure, alphas)
    write_boundary_csv([curve], args.out)
    print(f"wrote {len(curve.points)} points ({len(curve.gaps)} gaps) to {args.out}")
    if len(curve.gaps) == len(curve.points):
        raise RootNotBracketed("no boundary point found on the alpha grid")
    return 0


def _cmd_reproduce(args: argparse.Namespace) -> int:
    for path in reproduce(args.figure, args.out, jobs=args.jobs):
        print(path)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    report = run_verification(args.scenarios, args.seed)
    for failure in report.failures:
        print(f"FAIL {failure}", file=sys.stderr)
    print(f"{report.checks} checks, {len(report.failures)} failures")
    return 0 if report.ok else 1


_COMMANDS = {
    "solve": _cmd_solve,
    "compare": _cmd_compare,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "boundary": _cmd_boundary,
    "reproduce": _cmd_reproduce,
    "verify": _cmd_verify,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the command and map engine errors to exit codes."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; --help exits 0
        return ConfigError.exit_code if exc.code else 0
    configure_logging(args.log_level, json=get_settings().log_json)
    try:
        return _COMMANDS[args.command](args)
    except EquilibriumError as exc:
        logger.error("command_failed", command=args.command, error=type(exc).__name__, detail=str(exc))
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
