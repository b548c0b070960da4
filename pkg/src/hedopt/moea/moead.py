"""MOEA/D: decomposition into Tchebycheff subproblems with neighborhood
mating and replacement.

Each of the population_size weight vectors (w, 1 - w) owns one solution;
variation draws parents from the T nearest weight vectors and an improved
child replaces neighbors it beats on their own scalarized subproblem.
"""

from __future__ import annotations

import numpy as np

from .common import (RunConfig, RunResult, TriggerProblem, nondominated_filter,
                     polynomial_mutation, random_population, sbx_crossover,
                     snapshot)


def tchebycheff(f: np.ndarray, weight: np.ndarray, ideal: np.ndarray) -> float:
    """Weighted Tchebycheff scalarization; zero weights are floored so the
    corresponding objective still contributes."""
    w = np.maximum(weight, 1e-6)
    return float(np.max(w * np.abs(f - ideal)))


def _weights(n: int) -> np.ndarray:
    w = np.arange(n) / max(n - 1, 1)
    return np.column_stack([w, 1.0 - w])


def _neighborhoods(weights: np.ndarray, t: int) -> np.ndarray:
    d = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    return np.argsort(d, kind="stable", axis=1)[:, :t]


def run_moead(problem: TriggerProblem, config: RunConfig) -> RunResult:
    rng = np.random.default_rng(config.seed)
    n = config.population_size
    lower, upper = problem.lower, problem.upper
    p_m = config.mutation_prob if config.mutation_prob is not None else 1.0 / problem.n_var
    t = min(config.neighborhood_size, n)

    weights = _weights(n)
    neighbors = _neighborhoods(weights, t)

    x = random_population(n, lower, upper, rng)
    f = problem.evaluate(x)
    ideal = f.min(axis=0)
    history: list[tuple[int, np.ndarray]] = []
    snapshot(history, problem.n_evaluations, f)

    while problem.n_evaluations < config.max_evaluations:
        budget = config.max_evaluations - problem.n_evaluations
        order = rng.permutation(n)[: min(n, budget)]
        for i in order:
            a, b = neighbors[i][rng.integers(0, t, size=2)]
            c1, c2 = sbx_crossover(x[a], x[b], config.sbx_eta,
                                   config.sbx_prob, lower, upper, rng)
            child = c1 if rng.random() < 0.5 else c2
            child = polynomial_mutation(child, config.mutation_eta, p_m,
                                        lower, upper, rng)
            cf = problem.evaluate(child[None, :])[0]
            ideal = np.minimum(ideal, cf)
            for j in neighbors[i]:
                if (tchebycheff(cf, weights[j], ideal)
                        <= tchebycheff(f[j], weights[j], ideal)):
                    x[j] = child
                    f[j] = cf
        snapshot(history, problem.n_evaluations, f)

    idx = nondominated_filter(f)
    return RunResult(x=x[idx].copy(), f=f[idx].copy(), history=history,
                     n_evaluations=problem.n_evaluations)
