"""
Command-line entry point.

Subcommands:
    metrics   analytic metrics of a mapping
    map       Pareto front (exhaustive) or one heuristic solution
    sweep     parameter sweep of one SVN, as curve data
    oracle    Monte Carlo cross-check of every analytic quantity
    pvns      primary-layer channel split and idle-channel laws

Exit codes: 0 ok, 1 usage, 2 input, 3 budget, 4 infeasible, 5 validation failure.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Iterable, List, NoReturn, Optional, Sequence, Tuple

import pandas as pd

from crvn import __version__
from crvn.analytics.metrics import evaluate_mapping
from crvn.analytics.pvn_layer import pvn_layer_report
from crvn.analytics.scenario import load_mapping, load_scenario
from crvn.core.config import settings
from crvn.core.errors import CrvnError, InfeasibleError, ScenarioValidationError, SweepError
from crvn.mappers.exhaustive import enumerate_pareto
from crvn.mappers.heuristic import heuristic_map
from crvn.schemas.scenario import Mapping
from crvn.schemas.sweep import SweepBase, SweepParameter, SweepSpec
from crvn.tasks.sweeps import PRESETS, preset_spec, run_sweep, sweep_base_from_scenario
from crvn.tasks.validation import run_oracle_validation


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION_FAILED = 5

METRIC_COLUMNS = ["svn_id", "collision", "blocking", "utilization", "handover_attempt", "handover"]
LAYER_ROW = "__layer__"

# First sweep column; the blocking sweep keeps "blocking" for the reported value.
PARAMETER_COLUMNS = {
    SweepParameter.rho: "rho",
    SweepParameter.channels: "channels",
    SweepParameter.blocking: "imposed_blocking",
}


class CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _weights(text: str) -> Tuple[float, float, float]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be numbers, got '{text}'")
    if len(values) != 3 or any(w < 0 or not math.isfinite(w) for w in values) or not any(values):
        raise argparse.ArgumentTypeError("weights must be three nonnegative numbers w_h,w_b,w_u, not all zero")
    return values  # type: ignore[return-value]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _add_output_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # Subcommands repeat the global flags without defaults so either position works.
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "--format",
        choices=["table", "csv"],
        default=argparse.SUPPRESS if suppress else "table",
        help="output format (default: table)",
    )
    parser.add_argument("--seed", type=_nonnegative_int, default=default, help="base random seed")
    parser.add_argument("--out", type=Path, default=default, help="write output to this file")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        default=default,
        help="logging level (default: LOG_LEVEL setting)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand."""
    parser = CliParser(prog="crvn", description="Cognitive-radio virtual network metrics and mapping")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_output_flags(parser, suppress=False)

    common = argparse.ArgumentParser(add_help=False)
    _add_output_flags(common, suppress=True)

    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    metrics = subparsers.add_parser("metrics", parents=[common], help="analytic metrics of a mapping")
    metrics.add_argument("scenario", type=Path)
    metrics.add_argument("mapping", type=Path)
    metrics.set_defaults(handler=cmd_metrics)

    mapping = subparsers.add_parser("map", parents=[common], help="solve the mapping problem")
    mapping.add_argument("scenario", type=Path)
    mapping.add_argument("--mode", choices=["exhaustive", "heuristic"], default="exhaustive")
    mapping.add_argument("--weights", type=_weights, default=None, help="w_h,w_b,w_u (default 1,1,1)")
    mapping.add_argument("--budget", type=_positive_int, default=None, help="exhaustive assignment budget")
    mapping.add_argument("--moves", type=_positive_int, default=None, help="heuristic move budget")
    mapping.set_defaults(handler=cmd_map)

    sweep = subparsers.add_parser("sweep", parents=[common], help="parameter sweep of one SVN")
    sweep.add_argument("scenario", type=Path, nargs="?", help="scenario supplying the base parameters")
    sweep.add_argument("--svn", default=None, help="SVN of the scenario to sweep (default: first)")
    sweep.add_argument("--preset", choices=sorted(PRESETS), default=None)
    sweep.add_argument("--parameter", choices=[p.value for p in SweepParameter], default=None)
    sweep.add_argument("--start", type=float, default=None)
    sweep.add_argument("--stop", type=float, default=None)
    sweep.add_argument("--steps", type=int, default=None)
    sweep.add_argument("--workers", type=_positive_int, default=None)
    sweep.set_defaults(handler=cmd_sweep)

    oracle = subparsers.add_parser("oracle", parents=[common], help="Monte Carlo cross-check")
    oracle.add_argument("scenario", type=Path)
    oracle.add_argument("mapping", type=Path)
    oracle.add_argument("--samples", type=_positive_int, default=None)
    oracle.add_argument("--horizon", type=float, default=None, help="CTMC horizon in seconds")
    oracle.add_argument("--workers", type=_positive_int, default=None)
    oracle.add_argument("--corrupt-analytic", type=float, default=0.0, help=argparse.SUPPRESS)
    oracle.set_defaults(handler=cmd_oracle)

    pvns = subparsers.add_parser("pvns", parents=[common], help="primary-layer channel split")
    pvns.add_argument("scenario", type=Path)
    pvns.set_defaults(handler=cmd_pvns)

    return parser


def render(frame: pd.DataFrame, fmt: str, comments: Iterable[str] = ()) -> str:
    """
    Render a result table.

    CSV uses '.' decimals, CSV_SIGNIFICANT_DIGITS significant digits and '#'
    comment lines before the header.
    """
    if fmt == "csv":
        header = "".join(f"# {line}\n" for line in comments)
        body = frame.to_csv(
            index=False,
            float_format=f"%.{settings.CSV_SIGNIFICANT_DIGITS}g",
            lineterminator="\n",
        )
        return header + body
    return frame.to_string(index=False) + "\n" + "".join(f"{line}\n" for line in comments)


def _emit(args: argparse.Namespace, frame: pd.DataFrame, comments: Sequence[str] = ()) -> None:
    text = render(frame, args.format, comments)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(frame)} row(s) to {args.out}")
    else:
        sys.stdout.write(text)


def _describe_mapping(mapping: Mapping) -> str:
    return ";".join(f"{svn_id}:{'+'.join(ids)}" for svn_id, ids in mapping.assignments.items())


def cmd_metrics(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    mapping = load_mapping(args.mapping, scenario)
    report = evaluate_mapping(scenario, mapping)

    rows = [
        [m.svn_id, m.collision_prob, m.blocking_prob, m.joint_utilization, m.handover_attempt_prob, m.handover_prob]
        for m in report.svns
    ]
    layer = report.layer
    rows.append(
        [
            LAYER_ROW,
            layer.mean_collision,
            layer.mean_blocking,
            layer.mean_utilization,
            layer.mean_handover_attempt,
            layer.mean_handover,
        ]
    )

    for m in report.svns:
        if m.utilization_above_one:
            logger.warning(f"SVN '{m.svn_id}': joint utilization {m.joint_utilization:.6g} exceeds 1")
    if report.feasibility is not None:
        for check in report.feasibility.violations():
            logger.warning(
                f"SVN '{check.svn_id}' violates the {check.constraint} constraint (margin {check.margin:.6g})"
            )

    _emit(args, pd.DataFrame(rows, columns=METRIC_COLUMNS))
    return EXIT_OK


def _violations_text(violations: Iterable) -> str:
    return ", ".join(f"{c.svn_id}/{c.constraint} (margin {c.margin:.6g})" for c in violations)


def cmd_map(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)

    if args.mode == "exhaustive":
        front = enumerate_pareto(scenario, budget=args.budget)
        if front.is_empty:
            raise InfeasibleError(
                f"no feasible mapping among {front.assignments_evaluated} assignments; "
                f"violated constraints: {', '.join(front.violated_constraints) or 'none'}"
            )
        rows = [
            [
                rank,
                _describe_mapping(member.mapping),
                member.objectives.mean_handover,
                member.objectives.mean_blocking,
                member.objectives.mean_utilization,
            ]
            for rank, member in enumerate(front.members, start=1)
        ]
        frame = pd.DataFrame(rows, columns=["rank", "mapping", "handover", "blocking", "utilization"])
        comments = [
            f"pareto front: {len(front)} member(s), {front.feasible_count} feasible of "
            f"{front.assignments_evaluated} assignments"
        ]
        _emit(args, frame, comments)
        return EXIT_OK

    solution = heuristic_map(scenario, weights=args.weights, move_budget=args.moves)
    objectives = solution.objectives
    values = objectives.as_tuple() if objectives is not None else (None, None, None)
    frame = pd.DataFrame(
        [[_describe_mapping(solution.mapping), *values, solution.scalarized]],
        columns=["mapping", "handover", "blocking", "utilization", "scalarized"],
    )
    weights = args.weights or settings.DEFAULT_WEIGHTS
    comments = [f"heuristic solution, weights {','.join(f'{w:g}' for w in weights)}"]
    if not solution.feasible:
        violations = _violations_text(solution.violation_report)
        # Best-effort row goes out before the failure exit.
        comments.append(f"infeasible best effort; violated: {violations}")
        _emit(args, frame, comments)
        raise InfeasibleError(f"no feasible mapping found; violated: {violations}")
    _emit(args, frame, comments)
    return EXIT_OK


def _sweep_spec(args: argparse.Namespace) -> SweepSpec:
    base = SweepBase()
    if args.scenario is not None:
        base = sweep_base_from_scenario(load_scenario(args.scenario), args.svn)

    if args.preset:
        if args.parameter is not None:
            raise SweepError("--preset and --parameter are mutually exclusive")
        return preset_spec(args.preset, base)

    if args.parameter is None or None in (args.start, args.stop, args.steps):
        raise SweepError("give --preset, or --parameter with --start, --stop and --steps")
    try:
        return SweepSpec(
            parameter=args.parameter,
            start=args.start,
            stop=args.stop,
            steps=args.steps,
            base=base,
        )
    except ValueError as e:
        raise SweepError(f"invalid sweep: {e}") from e


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = _sweep_spec(args)
    result = run_sweep(spec, workers=args.workers)

    frame = pd.DataFrame(
        [row.model_dump() for row in result.rows],
        columns=["value", "collision", "blocking", "utilization", "su_utilization", "handover_attempt", "handover"],
    ).rename(columns={"value": PARAMETER_COLUMNS[spec.parameter]})

    base = spec.base.model_dump()
    comments = [
        f"sweep {spec.name}: {spec.parameter.value} from {spec.start:g} to {spec.stop:g} in {spec.steps} steps",
        "base " + " ".join(f"{key}={value}" for key, value in base.items()),
    ]
    if result.skipped:
        comments.append("skipped " + " ".join(f"{v:g}" for v in result.skipped))
    _emit(args, frame, comments)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    mapping = load_mapping(args.mapping, scenario)
    report = run_oracle_validation(
        scenario,
        mapping,
        samples=args.samples,
        seed=args.seed,
        corrupt_offset=args.corrupt_analytic,
        horizon_s=args.horizon,
        workers=args.workers,
    )

    frame = pd.DataFrame(
        [
            [c.metric, c.subject, c.analytic, c.estimate, c.std_error, c.tolerance, "PASS" if c.passed else "FAIL"]
            for c in report.checks
        ],
        columns=["metric", "subject", "analytic", "estimate", "std_error", "tolerance", "status"],
    )
    comments = [
        f"samples {report.samples}, seed {report.seed}, acceptance {settings.ORACLE_SIGMA:g} sigma",
        f"occupancy process: {report.occupancy_process}",
    ]
    _emit(args, frame, comments)
    if not report.passed:
        logger.error(f"{len(report.failures())} oracle check(s) failed")
        return EXIT_VALIDATION_FAILED
    return EXIT_OK


def cmd_pvns(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    summaries = pvn_layer_report(scenario)
    digits = settings.CSV_SIGNIFICANT_DIGITS
    frame = pd.DataFrame(
        [
            [
                s.pvn_id,
                s.share,
                " ".join(s.channel_ids),
                s.expected_idle_channels,
                s.effective_rate_bps,
                " ".join(f"{p:.{digits}g}" for p in s.idle_distribution.pmf),
            ]
            for s in summaries
        ],
        columns=["pvn_id", "share", "channels", "expected_idle", "effective_rate_bps", "idle_pmf"],
    )
    _emit(args, frame)
    return EXIT_OK


def _configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=level or settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except ScenarioValidationError as e:
        for line in e.diagnostics:
            print(f"error: {line}", file=sys.stderr)
        return e.exit_code
    except CrvnError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
