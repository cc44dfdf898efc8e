"""Command-line interface.

Subcommands validate scenario documents, build and analyze chains, run
seeded simulations, ingest evaluation datasets into detection profiles, and
sweep detection investments. Exit codes: 0 on success, 1 on any validation
failure, 2 when an analysis failed to converge. Diagnostics go to stderr;
data goes to files or stdout, never mixed.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .analysis import (
    DEFAULT_HORIZON,
    START_INDEX,
    empirical_first_passage,
    first_passage_distribution,
    occupancy_fractions,
    simulate,
    steady_state,
    unimpeded_success_probability,
)
from .builder import build_chain_distributions, build_chain_evals, export_dot
from .evals import (
    DatasetError,
    DefenderLevel,
    DetectionProfile,
    build_detection_profile,
    load_bundled_profiles,
)
from .model import Method, ScenarioError, ScenarioSpec, linearize
from .sensitivity import InvestmentModel, Objective, allocate_budget, sweep_detection

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGENCE = 2


class CLIError(ValueError):
    """Invalid command-line usage or arguments."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise CLIError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gpladd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a scenario document")
    p_validate.add_argument("scenario", help="path to a scenario JSON document")
    p_validate.set_defaults(handler=_cmd_validate)

    p_analyze = sub.add_parser("analyze", help="build a chain and write analysis artifacts")
    p_analyze.add_argument("scenario")
    p_analyze.add_argument("--profile", default="inline", help="inline, bundled:<NAME>, or file:<path>")
    p_analyze.add_argument("--steady", action="store_true", help="write the steady-state occupancy")
    p_analyze.add_argument("--fpt", action="store_true", help="write the first-passage series")
    p_analyze.add_argument("--unimpeded", action="store_true", help="record the unimpeded success probability")
    p_analyze.add_argument("--dot", action="store_true", help="write the transition diagram in DOT form")
    p_analyze.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p_analyze.add_argument("--dot-threshold", type=float, default=0.0)
    p_analyze.add_argument("--max-iterations", type=int, default=1_000_000)
    p_analyze.add_argument("--out-dir", default=".")
    p_analyze.set_defaults(handler=_cmd_analyze)

    p_simulate = sub.add_parser("simulate", help="run seeded trajectory and first-passage simulations")
    p_simulate.add_argument("scenario")
    p_simulate.add_argument("--profile", default="inline")
    p_simulate.add_argument("--steps", type=int, required=True, help="trajectory length in time steps")
    p_simulate.add_argument("--trials", type=int, required=True, help="independent first-passage trials")
    p_simulate.add_argument("--seed", type=int, required=True)
    p_simulate.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p_simulate.add_argument("--out-dir", default=".")
    p_simulate.set_defaults(handler=_cmd_simulate)

    p_ingest = sub.add_parser("ingest", help="infer a detection profile from an evaluation dataset")
    p_ingest.add_argument("evals", help="path to an evaluation dataset JSON file")
    p_ingest.add_argument("mapping", help="path to a chain-mapping JSON file")
    p_ingest.add_argument("--level", required=True, help="defender level: blue0, blue1, or blue2")
    p_ingest.add_argument("--out", required=True, help="path of the detection profile to write")
    p_ingest.add_argument("--chain", default=None, help="chain name recorded in provenance")
    p_ingest.set_defaults(handler=_cmd_ingest)

    p_sens = sub.add_parser("sensitivity", help="sweep detection increments and allocate a budget")
    p_sens.add_argument("scenario")
    p_sens.add_argument("--profile", default="inline")
    which = p_sens.add_mutually_exclusive_group(required=True)
    which.add_argument("--step", type=int, help="sweep a single step")
    which.add_argument("--all", action="store_true", help="sweep every step")
    p_sens.add_argument("--grid", required=True, help="delta grid as start:step:stop, e.g. 0:0.05:0.5")
    p_sens.add_argument("--budget", type=int, default=None)
    p_sens.add_argument("--increment", type=float, default=0.25, help="detection added per budget unit")
    p_sens.add_argument(
        "--objective",
        default=Objective.MIN_READY_RESIDENCE.value,
        choices=[o.value for o in Objective],
    )
    p_sens.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p_sens.add_argument("--out-dir", default=".")
    p_sens.set_defaults(handler=_cmd_sensitivity)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except (CLIError, ScenarioError, DatasetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _resolve_profile(selector: str) -> DetectionProfile | None:
    """None means inline: analyze the scenario's own distributions data."""
    if selector == "inline":
        return None
    if selector.startswith("bundled:"):
        name = selector.split(":", 1)[1]
        profiles = load_bundled_profiles()
        if name not in profiles:
            raise CLIError(f"unknown bundled profile {name!r}; choose from {sorted(profiles)}")
        return profiles[name]
    if selector.startswith("file:"):
        return io.load_detection_profile(selector.split(":", 1)[1])
    raise CLIError(f"unknown profile selector {selector!r}; use inline, bundled:<NAME>, or file:<path>")


def _build_matrix(spec: ScenarioSpec, selector: str):
    profile = _resolve_profile(selector)
    if profile is None:
        if spec.method is not Method.DISTRIBUTIONS:
            raise CLIError("profile 'inline' needs a scenario with method 'distributions'")
        return build_chain_distributions(spec), None
    if spec.method is not Method.EVALUATIONS:
        spec = dataclasses.replace(spec, method=Method.EVALUATIONS)
    return build_chain_evals(spec, profile), profile


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _note(path: Path) -> None:
    print(f"wrote {path}", file=sys.stderr)


def _cmd_validate(args) -> int:
    spec = io.load_scenario(args.scenario)
    states = linearize(spec.graph)
    print(f"{len(states)} steps, ready={spec.ready_id}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    if not (args.steady or args.fpt or args.unimpeded or args.dot):
        raise CLIError("no outputs requested; pass at least one of --steady --fpt --unimpeded --dot")
    spec = io.load_scenario(args.scenario)
    matrix, _ = _build_matrix(spec, args.profile)
    out = _out_dir(args)
    exit_code = EXIT_OK
    metrics: dict[str, object] = {}

    if args.steady:
        stationary = steady_state(matrix, max_iterations=args.max_iterations)
        path = out / "steady_state.csv"
        io.write_csv(
            path,
            ["state", "label", "occupancy"],
            [
                (i + 1, matrix.labels[i], float(stationary.occupancy[i]))
                for i in range(matrix.n_states)
            ],
        )
        _note(path)
        metrics["ready_residence"] = stationary.ready_residence
        metrics["steady_converged"] = stationary.converged
        metrics["steady_iterations"] = stationary.iterations_used
        if not stationary.converged:
            print("warning: steady-state iteration did not converge", file=sys.stderr)
            exit_code = EXIT_NONCONVERGENCE

    if args.fpt:
        if args.horizon < 1:
            raise CLIError("--horizon must be at least 1")
        series = first_passage_distribution(matrix, START_INDEX, matrix.ready_index, args.horizon)
        path = out / "first_passage.csv"
        io.write_csv(
            path,
            ["t", "probability"],
            [(t + 1, float(series.probabilities[t])) for t in range(series.horizon)],
        )
        _note(path)
        metrics["fpt_horizon"] = series.horizon
        metrics["fpt_reach_probability"] = series.reach_probability
        metrics["fpt_mean"] = series.mean
        metrics["fpt_median"] = series.median

    if args.unimpeded:
        metrics["unimpeded_success"] = unimpeded_success_probability(matrix)

    if args.dot:
        path = out / "transitions.dot"
        io.write_text(path, export_dot(matrix, threshold=args.dot_threshold))
        _note(path)

    if metrics:
        path = out / "metrics.json"
        io.write_text(path, io.canonical_json(metrics))
        _note(path)
    return exit_code


def _cmd_simulate(args) -> int:
    if args.steps < 1:
        raise CLIError("--steps must be at least 1")
    if args.trials < 1:
        raise CLIError("--trials must be at least 1")
    if args.horizon < 1:
        raise CLIError("--horizon must be at least 1")
    spec = io.load_scenario(args.scenario)
    matrix, _ = _build_matrix(spec, args.profile)
    out = _out_dir(args)

    trajectory = simulate(matrix, args.steps, args.seed)
    path = out / "trajectory.csv"
    io.write_csv(
        path,
        ["t", "state", "label"],
        [
            (t, int(state) + 1, matrix.labels[int(state)])
            for t, state in enumerate(trajectory.states)
        ],
    )
    _note(path)

    occupancy = occupancy_fractions(trajectory, matrix.n_states)
    path = out / "occupancy.csv"
    io.write_csv(
        path,
        ["state", "label", "fraction"],
        [(i + 1, matrix.labels[i], float(occupancy[i])) for i in range(matrix.n_states)],
    )
    _note(path)

    series = empirical_first_passage(matrix, args.trials, args.horizon, args.seed)
    path = out / "empirical_first_passage.csv"
    io.write_csv(
        path,
        ["t", "probability"],
        [(t + 1, float(series.probabilities[t])) for t in range(series.horizon)],
    )
    _note(path)

    summary = {
        "seed": args.seed,
        "steps": args.steps,
        "trials": args.trials,
        "horizon": args.horizon,
        "reach_probability": series.reach_probability,
        "mean": series.mean,
        "median": series.median,
    }
    path = out / "simulation_summary.json"
    io.write_text(path, io.canonical_json(summary))
    _note(path)
    return EXIT_OK


def _cmd_ingest(args) -> int:
    try:
        level = DefenderLevel(args.level)
    except ValueError:
        raise CLIError(
            f"unknown defender level {args.level!r}; choose from {[l.value for l in DefenderLevel]}"
        ) from None
    dataset = io.load_evaluations_dataset(args.evals)
    mapping = io.load_chain_mapping(args.mapping, name=args.chain)
    profile = build_detection_profile(dataset, mapping, level)
    io.write_detection_profile(args.out, profile)
    _note(Path(args.out))
    return EXIT_OK


def _parse_grid(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise CLIError(f"grid {text!r} must look like start:step:stop")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise CLIError(f"grid {text!r} has non-numeric parts") from None
    if step <= 0 or start > stop:
        raise CLIError("grid must have a positive step and start <= stop")
    if not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise CLIError("grid deltas must lie in [0, 1]")
    values = []
    v = start
    while v <= stop + 1e-9:
        values.append(min(v, 1.0))
        v = start + len(values) * step
    return tuple(values)


def _cmd_sensitivity(args) -> int:
    spec = io.load_scenario(args.scenario)
    profile = _resolve_profile(args.profile)
    if profile is None:
        # Inline sensitivity uses the scenario's own detection vector.
        profile = DetectionProfile(
            probabilities=dict(spec.strategy.defender.detection), provenance="manual"
        )
    grid = _parse_grid(args.grid)
    if args.horizon < 1:
        raise CLIError("--horizon must be at least 1")
    steps = sorted(profile.probabilities) if args.all else [args.step]
    out = _out_dir(args)

    for step in steps:
        result = sweep_detection(spec, profile, step, grid)
        path = out / f"sweep_step_{step}.csv"
        io.write_csv(
            path,
            ["delta", "detection", "ready_residence", "unimpeded_success"],
            list(
                zip(result.deltas, result.detection, result.ready_residence, result.unimpeded_success)
            ),
        )
        _note(path)

    if args.budget is not None:
        if args.budget < 0:
            raise CLIError("--budget must be non-negative")
        plan = allocate_budget(
            spec,
            profile,
            args.budget,
            InvestmentModel(increment=args.increment),
            Objective(args.objective),
            horizon=args.horizon,
        )
        document = {
            "units": {str(k): v for k, v in sorted(plan.units.items())},
            "budget": plan.budget,
            "objective": plan.objective.value,
            "objective_value": plan.objective_value,
            "base_value": plan.base_value,
            "increment": args.increment,
        }
        path = out / "allocation.json"
        io.write_text(path, io.canonical_json(document))
        _note(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
