"""Multi-objective optimizers over the intervention-trigger search space."""

from __future__ import annotations

from .common import (RunConfig, RunResult, TriggerProblem, crowding_distance,
                     dominates, fast_nondominated_sort, nondominated_filter,
                     polynomial_mutation, sbx_crossover)
from .moead import run_moead, tchebycheff
from .mopso import run_mopso
from .nsga2 import run_nsga2
from .nsga3 import reference_directions, run_nsga3

ALGORITHMS = {
    "nsga2": run_nsga2,
    "nsga3": run_nsga3,
    "moead": run_moead,
    "mopso": run_mopso,
}


def run_algorithm(name: str, problem: TriggerProblem,
                  config: RunConfig) -> RunResult:
    """Dispatch a single optimization run by algorithm name."""
    try:
        runner = ALGORITHMS[name]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {name!r}; expected one of "
            f"{sorted(ALGORITHMS)}") from None
    return runner(problem, config)


__all__ = [
    "ALGORITHMS", "RunConfig", "RunResult", "TriggerProblem",
    "crowding_distance", "dominates", "fast_nondominated_sort",
    "nondominated_filter", "polynomial_mutation", "reference_directions",
    "run_algorithm", "run_moead", "run_mopso", "run_nsga2", "run_nsga3",
    "sbx_crossover", "tchebycheff",
]
