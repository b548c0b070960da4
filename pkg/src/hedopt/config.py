"""Experiment configuration: JSON schema, validation, and defaults.

An empty JSON object loads as the default experiment (the published
parameter table), so ``{}`` reproduces the reference study end to end.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import defaults
from .model import (CompartmentState, EconomyParams, ModelParams,
                    PandemicParams)
from .moea import ALGORITHMS
from .policy import PolicySpec, lockdown, social_distancing


class ConfigError(ValueError):
    """Invalid configuration: names the offending field and constraint."""


@dataclass(frozen=True)
class OptimizationConfig:
    algorithms: tuple[str, ...] = defaults.DEFAULT_ALGORITHMS
    population_size: int = defaults.DEFAULT_POPULATION_SIZE
    max_evaluations: int = defaults.DEFAULT_MAX_EVALUATIONS
    runs: int = defaults.DEFAULT_RUNS
    bounds: tuple[float, float] = defaults.DEFAULT_BOUNDS
    base_seed: int = defaults.DEFAULT_BASE_SEED

    def __post_init__(self) -> None:
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError(
                    f"optimization.algorithms: unknown algorithm {name!r}; "
                    f"expected one of {sorted(ALGORITHMS)}")
        if self.population_size <= 0:
            raise ConfigError("optimization.population_size must be > 0")
        if self.max_evaluations < self.population_size:
            raise ConfigError(
                "optimization.max_evaluations must be >= population_size")
        if self.runs < 1:
            raise ConfigError("optimization.runs must be >= 1")
        if not self.bounds[0] < self.bounds[1]:
            raise ConfigError(
                "optimization.bounds: lower bound must be < upper bound")
        if self.base_seed < 0:
            raise ConfigError("optimization.base_seed must be >= 0")


@dataclass(frozen=True)
class IndicatorConfig:
    reference_point: tuple[float, float] = defaults.DEFAULT_REFERENCE_POINT
    alpha: float = defaults.DEFAULT_ALPHA

    def __post_init__(self) -> None:
        if not (self.reference_point[0] > 0 and self.reference_point[1] > 0):
            raise ConfigError(
                "indicators.reference_point coordinates must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("indicators.alpha must be in (0, 1)")


@dataclass(frozen=True)
class ScenarioConfig:
    initial_state: CompartmentState = field(
        default_factory=defaults.default_initial_state)
    params: ModelParams = field(default_factory=defaults.default_model_params)
    social_distancing: PolicySpec = field(
        default_factory=lambda: social_distancing(0.0))
    lockdown: PolicySpec = field(default_factory=lambda: lockdown(0.0))
    t_max: float = defaults.DEFAULT_T_MAX
    dt: float = defaults.DEFAULT_DT

    def __post_init__(self) -> None:
        if self.t_max <= 0:
            raise ConfigError("scenario.t_max must be > 0")
        if not 0 < self.dt <= self.t_max:
            raise ConfigError("scenario.dt must be in (0, t_max]")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    optimization: OptimizationConfig = field(default_factory=OptimizationConfig)
    indicators: IndicatorConfig = field(default_factory=IndicatorConfig)
    output_dir: str = "out"


def default_config() -> ExperimentConfig:
    return ExperimentConfig()


def _check_unknown(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(
            f"{where}: unknown field(s) {sorted(unknown)}; "
            f"expected a subset of {sorted(allowed)}")


def _build(cls, section: dict, where: str, **extra):
    """Instantiate a validated dataclass from a JSON section, translating
    its own ValueError into a ConfigError that names the section."""
    _check_unknown(section, {f.name for f in dataclasses.fields(cls)}, where)
    try:
        return cls(**{**{k: v for k, v in section.items()}, **extra})
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _policy_from_dict(section: dict, factory, where: str) -> PolicySpec:
    base = factory(0.0)
    allowed = {"amplitude", "buildup", "peak", "fade"}
    _check_unknown(section, allowed, where)
    try:
        return dataclasses.replace(base, **section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    _check_unknown(data, {"scenario", "optimization", "indicators",
                          "output_dir"}, "config")

    scenario_raw = dict(data.get("scenario", {}))
    _check_unknown(scenario_raw,
                   {"initial_state", "pandemic", "economy", "policies",
                    "t_max", "dt"}, "scenario")
    # unset fields fall back to the published defaults
    initial_defaults = dataclasses.asdict(defaults.default_initial_state())
    initial = _build(CompartmentState,
                     {**initial_defaults, **scenario_raw.get("initial_state", {})},
                     "scenario.initial_state")
    pandemic_defaults = dataclasses.asdict(defaults.default_pandemic_params())
    economy_defaults = dataclasses.asdict(defaults.default_economy_params())
    pandemic = _build(PandemicParams,
                      {**pandemic_defaults, **scenario_raw.get("pandemic", {})},
                      "scenario.pandemic")
    economy = _build(EconomyParams,
                     {**economy_defaults, **scenario_raw.get("economy", {})},
                     "scenario.economy")
    policies_raw = dict(scenario_raw.get("policies", {}))
    _check_unknown(policies_raw, {"social_distancing", "lockdown"},
                   "scenario.policies")
    sd = _policy_from_dict(policies_raw.get("social_distancing", {}),
                           social_distancing, "scenario.policies.social_distancing")
    ld = _policy_from_dict(policies_raw.get("lockdown", {}),
                           lockdown, "scenario.policies.lockdown")

    try:
        scenario = ScenarioConfig(
            initial_state=initial,
            params=ModelParams(pandemic=pandemic, economy=economy),
            social_distancing=sd, lockdown=ld,
            t_max=float(scenario_raw.get("t_max", defaults.DEFAULT_T_MAX)),
            dt=float(scenario_raw.get("dt", defaults.DEFAULT_DT)))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"scenario: {exc}") from exc

    opt_raw = dict(data.get("optimization", {}))
    if "algorithms" in opt_raw:
        opt_raw["algorithms"] = tuple(opt_raw["algorithms"])
    if "bounds" in opt_raw:
        bounds = opt_raw["bounds"]
        if not (isinstance(bounds, (list, tuple)) and len(bounds) == 2):
            raise ConfigError(
                "optimization.bounds must be a [lower, upper] pair")
        opt_raw["bounds"] = (float(bounds[0]), float(bounds[1]))
    optimization = _build(OptimizationConfig, opt_raw, "optimization")

    ind_raw = dict(data.get("indicators", {}))
    if "reference_point" in ind_raw:
        rp = ind_raw["reference_point"]
        if not (isinstance(rp, (list, tuple)) and len(rp) == 2):
            raise ConfigError(
                "indicators.reference_point must be an [r1, r2] pair")
        ind_raw["reference_point"] = (float(rp[0]), float(rp[1]))
    indicators = _build(IndicatorConfig, ind_raw, "indicators")

    output_dir = data.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("output_dir must be a non-empty string")

    return ExperimentConfig(scenario=scenario, optimization=optimization,
                            indicators=indicators, output_dir=output_dir)


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    return config_from_dict(data)


def config_to_dict(config: ExperimentConfig) -> dict:
    """Serialize to the same JSON schema accepted by load_config."""
    sc = config.scenario
    return {
        "scenario": {
            "initial_state": dataclasses.asdict(sc.initial_state),
            "pandemic": dataclasses.asdict(sc.params.pandemic),
            "economy": dataclasses.asdict(sc.params.economy),
            "policies": {
                "social_distancing": {
                    "amplitude": sc.social_distancing.amplitude,
                    "buildup": sc.social_distancing.buildup,
                    "peak": sc.social_distancing.peak,
                    "fade": sc.social_distancing.fade,
                },
                "lockdown": {
                    "amplitude": sc.lockdown.amplitude,
                    "buildup": sc.lockdown.buildup,
                    "peak": sc.lockdown.peak,
                    "fade": sc.lockdown.fade,
                },
            },
            "t_max": sc.t_max,
            "dt": sc.dt,
        },
        "optimization": {
            "algorithms": list(config.optimization.algorithms),
            "population_size": config.optimization.population_size,
            "max_evaluations": config.optimization.max_evaluations,
            "runs": config.optimization.runs,
            "bounds": list(config.optimization.bounds),
            "base_seed": config.optimization.base_seed,
        },
        "indicators": {
            "reference_point": list(config.indicators.reference_point),
            "alpha": config.indicators.alpha,
        },
        "output_dir": config.output_dir,
    }


def save_config(config: ExperimentConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(config_to_dict(config), handle, indent=2)
        handle.write("\n")
