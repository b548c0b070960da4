"""Command-line entry point.

Subcommands: simulate, optimize, indicators, front-grid, plot.
Exit codes: 0 success, 1 validation error, 2 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, defaults, indicators as ind, plotting
from .config import (ConfigError, ExperimentConfig, config_to_dict,
                     default_config, load_config)
from .indicators import Front, combine_reference_front, read_front_csv, write_front_csv
from .moea import RunConfig, TriggerProblem, run_algorithm
from .policy import PolicyError
from .simulate import (DomainError, IntegrationError, Scenario, Trajectory,
                       TriggerEvaluator, integrate, objectives)

TRAJECTORY_COLUMNS = ("t", "S", "Sq", "E", "Eq", "I", "Iq", "R", "GDP")

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class CliError(Exception):
    """Validation-level CLI failure (exit code 1)."""


def _mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base_seed: int, algorithm_index: int, run_index: int) -> int:
    """Deterministic per-run seed: a splitmix-style mix of the base seed
    with the algorithm and run indices."""
    z = _mix64(base_seed + _GOLDEN * (algorithm_index + 1))
    return _mix64(z + _GOLDEN * (run_index + 1))


def config_hash(config: ExperimentConfig) -> str:
    payload = json.dumps(config_to_dict(config), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _scenario_from_config(config: ExperimentConfig,
                          triggers: tuple[float, float] | None) -> Scenario:
    sc = config.scenario
    if triggers is None:
        policies = ()
    else:
        t_sd, t_ld = triggers
        policies = (dataclasses.replace(sc.social_distancing, trigger_time=t_sd),
                    dataclasses.replace(sc.lockdown, trigger_time=t_ld))
    return Scenario(initial=sc.initial_state, params=sc.params,
                    policies=policies, t_max=sc.t_max, dt=sc.dt)


def _evaluator_from_config(config: ExperimentConfig) -> TriggerEvaluator:
    sc = config.scenario
    base = Scenario(initial=sc.initial_state, params=sc.params,
                    policies=(), t_max=sc.t_max, dt=sc.dt)
    return TriggerEvaluator(base, bounds=config.optimization.bounds,
                            shapes=(sc.social_distancing, sc.lockdown))


def _write_trajectory_csv(path: Path, trajectory: Trajectory) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for t, row in zip(trajectory.times, trajectory.states):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])


def _read_trajectory_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    times, states = [], []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TRAJECTORY_COLUMNS:
            raise CliError(f"{path}: expected header {','.join(TRAJECTORY_COLUMNS)}")
        for k, row in enumerate(reader, start=2):
            try:
                values = [float(v) for v in row]
            except ValueError as exc:
                raise CliError(f"{path}: row {k}: {exc}") from exc
            if len(values) != 9:
                raise CliError(f"{path}: row {k}: expected 9 columns")
            times.append(values[0])
            states.append(values[1:])
    return np.array(times), np.array(states)


def _load_config_arg(path: str | None) -> ExperimentConfig:
    if path is None:
        return default_config()
    return load_config(path)


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    if (args.t_sd is None) != (args.t_ld is None):
        raise CliError("provide both --t-sd and --t-ld, or neither")
    triggers = None if args.t_sd is None else (args.t_sd, args.t_ld)
    if triggers is not None:
        lo, hi = config.optimization.bounds
        for name, value in (("--t-sd", triggers[0]), ("--t-ld", triggers[1])):
            if not lo <= value <= hi:
                raise CliError(f"{name}={value} outside bounds [{lo}, {hi}]")

    scenario = _scenario_from_config(config, triggers)
    if args.dt is not None:
        if args.dt <= 0:
            raise CliError("--dt must be > 0")
        scenario = dataclasses.replace(scenario, dt=args.dt)
    trajectory = integrate(scenario)
    obj = objectives(trajectory)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_trajectory_csv(out / "trajectory.csv", trajectory)
    with open(out / "objectives.json", "w", encoding="utf-8") as handle:
        json.dump({"f1": obj.f1, "f2": obj.f2, "gdp_min": -obj.f2,
                   "t_sd": None if triggers is None else triggers[0],
                   "t_ld": None if triggers is None else triggers[1]},
                  handle, indent=2)
        handle.write("\n")

    if args.dt is not None and args.dt != config.scenario.dt:
        # step-size check against the configured step
        reference = objectives(integrate(
            dataclasses.replace(scenario, dt=config.scenario.dt)))
        deviation = max(abs(obj.f1 - reference.f1), abs(obj.f2 - reference.f2))
        print(f"max objective deviation vs dt={config.scenario.dt}: "
              f"{deviation:.3e}")

    if args.plot:
        series = [(label, trajectory.times, trajectory.states[:, j])
                  for j, label in enumerate(TRAJECTORY_COLUMNS[1:])]
        plotting.line_plot(out / "trajectory.svg", series,
                           xlabel="time [days]", ylabel="population fraction / GDP",
                           title="Compartments and GDP")
    print(f"f1 (peak E+Eq+I+Iq) = {obj.f1:.4f}   "
          f"f2 (-min GDP) = {obj.f2:.4f}   -> {out}")
    return 0


# ---------------------------------------------------------------------------
# optimize

def _execute_run(config: ExperimentConfig, algorithm: str,
                 algorithm_index: int, run_index: int):
    seed = derive_seed(config.optimization.base_seed, algorithm_index,
                       run_index)
    evaluator = _evaluator_from_config(config)
    problem = TriggerProblem(evaluator, bounds=config.optimization.bounds)
    run_config = RunConfig(
        algorithm=algorithm,
        population_size=config.optimization.population_size,
        max_evaluations=config.optimization.max_evaluations,
        seed=seed)
    result = run_algorithm(algorithm, problem, run_config)
    order = np.lexsort((result.f[:, 1], result.f[:, 0]))
    return seed, result.x[order], result.f[order], result.history


_WORKER_CONFIG: ExperimentConfig | None = None


def _worker_init(config_dict: dict) -> None:
    global _WORKER_CONFIG
    from .config import config_from_dict
    _WORKER_CONFIG = config_from_dict(config_dict)


def _worker_run(task: tuple[str, int, int]):
    algorithm, algorithm_index, run_index = task
    seed, x, f, history = _execute_run(_WORKER_CONFIG, algorithm,
                                       algorithm_index, run_index)
    return algorithm, run_index, seed, x, f, history


def cmd_optimize(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    if args.seed is not None:
        config = dataclasses.replace(
            config, optimization=dataclasses.replace(
                config.optimization, base_seed=args.seed))
    out = Path(args.out if args.out is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    opt = config.optimization

    tasks = [(alg, ai, ri) for ai, alg in enumerate(opt.algorithms)
             for ri in range(opt.runs)]
    started = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    manifest_runs = []
    results: dict[tuple[str, int], tuple] = {}

    if args.workers > 1:
        with ProcessPoolExecutor(
                max_workers=args.workers, initializer=_worker_init,
                initargs=(config_to_dict(config),)) as pool:
            futures = {pool.submit(_worker_run, t): t for t in tasks}
            for future, task in futures.items():
                alg, _, ri = task
                try:
                    _, _, seed, x, f, history = future.result()
                    results[(alg, ri)] = (seed, x, f, history)
                except Exception as exc:  # noqa: BLE001 - recorded, not fatal
                    results[(alg, ri)] = exc
    else:
        for alg, ai, ri in tasks:
            try:
                seed, x, f, history = _execute_run(config, alg, ai, ri)
                results[(alg, ri)] = (seed, x, f, history)
            except Exception as exc:  # noqa: BLE001 - recorded, not fatal
                results[(alg, ri)] = exc

    per_alg_fronts: dict[str, list[Front]] = {alg: [] for alg in opt.algorithms}
    for alg in opt.algorithms:
        for ri in range(opt.runs):
            outcome = results[(alg, ri)]
            if not isinstance(outcome, Exception):
                per_alg_fronts[alg].append(Front(f=outcome[2], x=outcome[1]))
    # convergence curves are normalized against the campaign-wide front
    successful = [fr for fronts in per_alg_fronts.values() for fr in fronts]
    reference = combine_reference_front(successful) if successful else None

    for ai, alg in enumerate(opt.algorithms):
        front_iter = iter(per_alg_fronts[alg])
        for ri in range(opt.runs):
            run_dir = out / alg / f"run_{ri}"
            entry = {"algorithm": alg, "run": ri,
                     "seed": derive_seed(opt.base_seed, ai, ri)}
            outcome = results[(alg, ri)]
            if isinstance(outcome, Exception):
                entry["status"] = "failed"
                entry["error"] = f"{type(outcome).__name__}: {outcome}"
                manifest_runs.append(entry)
                continue
            _, _, _, history = outcome
            front = next(front_iter)
            write_front_csv(run_dir / "front.csv", front)
            with open(run_dir / "hv_history.csv", "w", encoding="utf-8",
                      newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(("evaluations", "hv"))
                for n_evals, snap in history:
                    writer.writerow([n_evals, repr(
                        ind.normalized_hypervolume(snap, reference))])
            entry.update({
                "status": "ok",
                "front": str(run_dir / "front.csv"),
                "hv_history": str(run_dir / "hv_history.csv"),
            })
            manifest_runs.append(entry)

    combined_paths = {}
    for alg in opt.algorithms:
        if per_alg_fronts[alg]:
            combined = combine_reference_front(per_alg_fronts[alg])
            write_front_csv(out / alg / "combined.csv", combined)
            combined_paths[alg] = str(out / alg / "combined.csv")
    if reference is not None:
        write_front_csv(out / "reference_front.csv", reference)

    manifest = {
        "version": __version__,
        "config_hash": config_hash(config),
        "base_seed": opt.base_seed,
        "started": started,
        "finished": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "runs": manifest_runs,
        "combined": combined_paths,
        "reference_front": (str(out / "reference_front.csv")
                            if reference is not None else None),
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")

    n_failed = sum(1 for r in manifest_runs if r["status"] == "failed")
    print(f"completed {len(manifest_runs) - n_failed}/{len(manifest_runs)} "
          f"runs -> {out}")
    if n_failed:
        return 2
    return 0


# ---------------------------------------------------------------------------
# indicators

def cmd_indicators(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    out = Path(args.out if args.out is not None else config.output_dir)
    if not out.exists():
        raise CliError(f"output directory not found: {out}")

    run_fronts: dict[str, list[Front]] = {}
    for alg in config.optimization.algorithms:
        alg_dir = out / alg
        if not alg_dir.exists():
            continue
        fronts = []
        for run_dir in sorted(alg_dir.glob("run_*"),
                              key=lambda p: int(p.name.split("_")[1])):
            front_path = run_dir / "front.csv"
            if not front_path.exists():
                raise CliError(f"missing front file: {front_path}")
            fronts.append(read_front_csv(front_path))
        if fronts:
            run_fronts[alg] = fronts
    if not run_fronts:
        raise CliError(f"no run fronts found under {out}")

    reference = None
    if args.reference is not None:
        reference = read_front_csv(args.reference)
    report = ind.indicator_report(
        run_fronts, reference_front=reference,
        ref_point=config.indicators.reference_point,
        alpha=config.indicators.alpha)

    with open(out / "indicators.json", "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2)
        handle.write("\n")
    print(report.format_table())
    print(f"-> {out / 'indicators.json'}")
    return 0


# ---------------------------------------------------------------------------
# front-grid

def cmd_front_grid(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    if args.resolution < 2:
        raise CliError("--resolution must be >= 2")
    out = Path(args.out if args.out is not None else config.output_dir)
    evaluator = _evaluator_from_config(config)
    lo, hi = config.optimization.bounds
    grid = np.linspace(lo, hi, args.resolution)
    xs, fs = [], []
    for t_sd in grid:
        for t_ld in grid:
            obj = evaluator(t_sd, t_ld)
            xs.append((t_sd, t_ld))
            fs.append(obj.as_tuple())
    front = combine_reference_front(
        [Front(f=np.array(fs), x=np.array(xs))])
    write_front_csv(out / "grid_front.csv", front)
    print(f"evaluated {args.resolution ** 2} trigger pairs; "
          f"front size {len(front)} -> {out / 'grid_front.csv'}")
    return 0


# ---------------------------------------------------------------------------
# plot

def cmd_plot(args: argparse.Namespace) -> int:
    out = Path(args.out)
    kind = args.kind
    paths = [Path(p) for p in args.inputs]
    for p in paths:
        if not p.exists():
            raise CliError(f"input not found: {p}")

    if kind == "front":
        series = []
        for p in paths:
            front = read_front_csv(p)
            series.append((p.stem, front.f[:, 0], front.f[:, 1]))
        plotting.scatter_plot(out / "front.svg", series,
                              xlabel="f1: peak infected + exposed",
                              ylabel="f2: -min GDP",
                              title="Pareto front")
        target = out / "front.svg"
    elif kind == "set":
        series = []
        for p in paths:
            front = read_front_csv(p)
            if front.x is None:
                raise CliError(f"{p}: no decision columns (t_sd, t_ld)")
            series.append((p.stem, front.x[:, 0], front.x[:, 1]))
        plotting.scatter_plot(out / "set.svg", series,
                              xlabel="social distancing trigger [days]",
                              ylabel="lockdown trigger [days]",
                              title="Pareto set")
        target = out / "set.svg"
    elif kind == "trajectory":
        if len(paths) != 1:
            raise CliError("trajectory plots take exactly one CSV")
        times, states = _read_trajectory_csv(paths[0])
        series = [(label, times, states[:, j])
                  for j, label in enumerate(TRAJECTORY_COLUMNS[1:])]
        plotting.line_plot(out / "trajectory.svg", series,
                           xlabel="time [days]",
                           ylabel="population fraction / GDP",
                           title="Compartments and GDP")
        target = out / "trajectory.svg"
    else:  # hv-history
        series = []
        for p in paths:
            with open(p, encoding="utf-8", newline="") as handle:
                reader = csv.reader(handle)
                header = next(reader, None)
                if header is None or tuple(header) != ("evaluations", "hv"):
                    raise CliError(f"{p}: expected header evaluations,hv")
                evals, hvs = [], []
                for k, row in enumerate(reader, start=2):
                    try:
                        evals.append(float(row[0]))
                        hvs.append(float(row[1]))
                    except (ValueError, IndexError) as exc:
                        raise CliError(f"{p}: row {k}: {exc}") from exc
            series.append((p.stem, evals, hvs))
        plotting.line_plot(out / "hv_history.svg", series,
                           xlabel="evaluations", ylabel="hypervolume",
                           title="HV vs. evaluations")
        target = out / "hv_history.svg"
    print(f"-> {target}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hedopt",
        description="Pandemic health-economy trade-off simulation and "
                    "multi-objective optimization toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one scenario")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--t-sd", type=float, default=None,
                   help="social distancing trigger time [days]")
    p.add_argument("--t-ld", type=float, default=None,
                   help="lockdown trigger time [days]")
    p.add_argument("--dt", type=float, default=None,
                   help="override integration step; also prints the "
                        "objective deviation vs the configured step")
    p.add_argument("--plot", action="store_true", help="emit trajectory SVG")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", help="run the optimization campaign")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override base seed")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel run workers")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("indicators", help="compute front-quality indicators")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--out", default=None,
                   help="campaign output directory to read fronts from")
    p.add_argument("--reference", default=None,
                   help="external reference front CSV (default: combined)")
    p.set_defaults(func=cmd_indicators)

    p = sub.add_parser("front-grid", help="brute-force grid front (oracle)")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--resolution", type=int, default=101,
                   help="grid points per axis")
    p.set_defaults(func=cmd_front_grid)

    p = sub.add_parser("plot", help="render CSVs as SVG figures")
    p.add_argument("inputs", nargs="+", help="input CSV files")
    p.add_argument("--kind", required=True,
                   choices=("front", "set", "trajectory", "hv-history"))
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError, DomainError, PolicyError,
            ind.IndicatorError, plotting.PlotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, IntegrationError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
