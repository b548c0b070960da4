"""NSGA-II: elitist nondominated sorting with crowding-distance selection."""

from __future__ import annotations

import numpy as np

from .common import (RunConfig, RunResult, TriggerProblem, crowding_distance,
                     fast_nondominated_sort, nondominated_filter,
                     polynomial_mutation, random_population, sbx_crossover,
                     snapshot)


def _rank_and_crowding(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = np.empty(f.shape[0], dtype=int)
    crowd = np.empty(f.shape[0])
    for r, front in enumerate(fast_nondominated_sort(f)):
        idx = np.array(front)
        ranks[idx] = r
        crowd[idx] = crowding_distance(f[idx])
    return ranks, crowd


def _tournament(ranks, crowd, rng) -> int:
    a, b = rng.integers(0, len(ranks), size=2)
    if ranks[a] != ranks[b]:
        return a if ranks[a] < ranks[b] else b
    if crowd[a] != crowd[b]:
        return a if crowd[a] > crowd[b] else b
    return a if rng.random() < 0.5 else b


def _environmental_selection(x, f, n):
    """Elitist truncation to n by (rank, crowding)."""
    keep = []
    for front in fast_nondominated_sort(f):
        if len(keep) + len(front) <= n:
            keep.extend(front)
            continue
        idx = np.array(front)
        crowd = crowding_distance(f[idx])
        order = np.argsort(-crowd, kind="stable")
        keep.extend(idx[order[: n - len(keep)]].tolist())
        break
    keep = np.array(keep)
    return x[keep], f[keep]


def run_nsga2(problem: TriggerProblem, config: RunConfig) -> RunResult:
    rng = np.random.default_rng(config.seed)
    n = config.population_size
    lower, upper = problem.lower, problem.upper
    p_m = config.mutation_prob if config.mutation_prob is not None else 1.0 / problem.n_var

    x = random_population(n, lower, upper, rng)
    f = problem.evaluate(x)
    history: list[tuple[int, np.ndarray]] = []
    snapshot(history, problem.n_evaluations, f)

    while problem.n_evaluations < config.max_evaluations:
        budget = config.max_evaluations - problem.n_evaluations
        ranks, crowd = _rank_and_crowding(f)
        children = []
        while len(children) < min(n, budget):
            i = _tournament(ranks, crowd, rng)
            j = _tournament(ranks, crowd, rng)
            c1, c2 = sbx_crossover(x[i], x[j], config.sbx_eta,
                                   config.sbx_prob, lower, upper, rng)
            children.append(polynomial_mutation(c1, config.mutation_eta, p_m,
                                                lower, upper, rng))
            if len(children) < min(n, budget):
                children.append(polynomial_mutation(c2, config.mutation_eta,
                                                    p_m, lower, upper, rng))
        cx = np.array(children)
        cf = problem.evaluate(cx)
        x, f = _environmental_selection(np.vstack([x, cx]),
                                        np.vstack([f, cf]), n)
        snapshot(history, problem.n_evaluations, f)

    idx = nondominated_filter(f)
    return RunResult(x=x[idx].copy(), f=f[idx].copy(), history=history,
                     n_evaluations=problem.n_evaluations)
