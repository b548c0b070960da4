"""Pandemic health-economy trade-off simulation and optimization toolkit."""

__version__ = "0.1.0"

from .model import (CompartmentState, EconomyParams, ModelParams,
                    PandemicParams, gdp_derivative, pandemic_derivatives,
                    total_population)
from .policy import (InfluenceCurve, PolicySpec, bezier_point,
                     build_influence_curve, effective_params, influence_at,
                     lockdown, social_distancing)
from .simulate import (ObjectiveVector, Scenario, Trajectory, TriggerEvaluator,
                       default_scenario, evaluate_triggers, integrate,
                       objectives)
from .config import ExperimentConfig, default_config, load_config
from .indicators import (Front, combine_reference_front, hypervolume_2d, igd,
                         indicator_report, normalized_hypervolume, spread)

__all__ = [
    "ExperimentConfig", "default_config", "load_config",
    "Front", "combine_reference_front", "hypervolume_2d", "igd",
    "indicator_report", "normalized_hypervolume", "spread",
    "CompartmentState", "EconomyParams", "ModelParams", "PandemicParams",
    "gdp_derivative", "pandemic_derivatives", "total_population",
    "InfluenceCurve", "PolicySpec", "bezier_point", "build_influence_curve",
    "effective_params", "influence_at", "lockdown", "social_distancing",
    "ObjectiveVector", "Scenario", "Trajectory", "TriggerEvaluator",
    "default_scenario", "evaluate_triggers", "integrate", "objectives",
]
