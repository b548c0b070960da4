"""NSGA-III: nondominated sorting with reference-direction niching.

With two objectives and a population of 100, the simplex-lattice directions
reduce to 100 evenly spaced weight pairs (i/99, 1 - i/99).
"""

from __future__ import annotations

import numpy as np

from .common import (RunConfig, RunResult, TriggerProblem,
                     fast_nondominated_sort, nondominated_filter,
                     polynomial_mutation, random_population, sbx_crossover,
                     snapshot)


def reference_directions(divisions: int, n_obj: int = 2) -> np.ndarray:
    """Simplex-lattice (Das-Dennis) directions; C(divisions + n_obj - 1,
    n_obj - 1) vectors, each summing to one."""
    if n_obj != 2:
        raise NotImplementedError("only the bi-objective lattice is needed")
    w = np.arange(divisions + 1) / divisions
    return np.column_stack([w, 1.0 - w])


def _normalize(f: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Translate by the ideal point and scale by intercepts estimated from
    the extreme points (achievement-scalarizing extremes, with a nadir
    fallback when the intercepts degenerate)."""
    shifted = f - ideal
    n_obj = f.shape[1]
    weights = np.eye(n_obj) + 1e-6
    extremes = np.empty((n_obj, n_obj))
    for j in range(n_obj):
        asf = np.max(shifted / weights[j], axis=1)
        extremes[j] = shifted[np.argmin(asf)]
    try:
        plane = np.linalg.solve(extremes, np.ones(n_obj))
        intercepts = 1.0 / plane
        if np.any(intercepts <= 1e-12) or not np.all(np.isfinite(intercepts)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        intercepts = shifted.max(axis=0)
    intercepts = np.where(intercepts <= 1e-12, 1.0, intercepts)
    return shifted / intercepts


def _associate(norm_f: np.ndarray, dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closest reference direction per point and the perpendicular distance."""
    norms = np.linalg.norm(dirs, axis=1)
    proj = norm_f @ dirs.T / norms  # scalar projection onto each direction
    proj = np.maximum(proj, 0.0)
    d2 = (norm_f**2).sum(axis=1, keepdims=True) - proj**2
    d = np.sqrt(np.maximum(d2, 0.0))
    which = np.argmin(d, axis=1)
    return which, d[np.arange(len(which)), which]


def _niching(last_front: list[int], niche_count: np.ndarray,
             assoc: dict[int, int], dist: dict[int, float], n_missing: int,
             rng: np.random.Generator) -> list[int]:
    """Fill the remaining slots one at a time from the least-occupied
    niches; an empty niche takes its closest member, an occupied one a
    random member."""
    chosen: list[int] = []
    pool = list(last_front)
    while len(chosen) < n_missing:
        active = sorted({assoc[i] for i in pool})
        min_count = min(niche_count[j] for j in active)
        candidates = [j for j in active if niche_count[j] == min_count]
        j = candidates[int(rng.integers(0, len(candidates)))]
        members = [i for i in pool if assoc[i] == j]
        if niche_count[j] == 0:
            pick = min(members, key=lambda i: dist[i])
        else:
            pick = members[int(rng.integers(0, len(members)))]
        chosen.append(pick)
        pool.remove(pick)
        niche_count[j] += 1
    return chosen


def run_nsga3(problem: TriggerProblem, config: RunConfig) -> RunResult:
    rng = np.random.default_rng(config.seed)
    n = config.population_size
    lower, upper = problem.lower, problem.upper
    p_m = config.mutation_prob if config.mutation_prob is not None else 1.0 / problem.n_var
    dirs = reference_directions(max(n - 1, 1))

    x = random_population(n, lower, upper, rng)
    f = problem.evaluate(x)
    ideal = f.min(axis=0)
    history: list[tuple[int, np.ndarray]] = []
    snapshot(history, problem.n_evaluations, f)

    while problem.n_evaluations < config.max_evaluations:
        budget = config.max_evaluations - problem.n_evaluations
        children = []
        while len(children) < min(n, budget):
            i, j = rng.integers(0, n, size=2)
            c1, c2 = sbx_crossover(x[i], x[j], config.sbx_eta,
                                   config.sbx_prob, lower, upper, rng)
            children.append(polynomial_mutation(c1, config.mutation_eta, p_m,
                                                lower, upper, rng))
            if len(children) < min(n, budget):
                children.append(polynomial_mutation(c2, config.mutation_eta,
                                                    p_m, lower, upper, rng))
        cx = np.array(children)
        cf = problem.evaluate(cx)
        ax = np.vstack([x, cx])
        af = np.vstack([f, cf])
        ideal = np.minimum(ideal, af.min(axis=0))

        fronts = fast_nondominated_sort(af)
        keep: list[int] = []
        last: list[int] = []
        for front in fronts:
            if len(keep) + len(front) <= n:
                keep.extend(front)
            else:
                last = front
                break
        if len(keep) < n and last:
            considered = keep + last
            norm_f = _normalize(af[considered], ideal)
            assoc_all, dist_all = _associate(norm_f, dirs)
            assoc = {idx: int(assoc_all[k]) for k, idx in enumerate(considered)}
            dist = {idx: float(dist_all[k]) for k, idx in enumerate(considered)}
            niche_count = np.zeros(len(dirs), dtype=int)
            for idx in keep:
                niche_count[assoc[idx]] += 1
            keep.extend(_niching(last, niche_count, assoc, dist,
                                 n - len(keep), rng))
        keep_arr = np.array(keep)
        x, f = ax[keep_arr], af[keep_arr]
        snapshot(history, problem.n_evaluations, f)

    idx = nondominated_filter(f)
    return RunResult(x=x[idx].copy(), f=f[idx].copy(), history=history,
                     n_evaluations=problem.n_evaluations)
