"""Shared machinery for the evolutionary optimizers: Pareto dominance,
nondominated sorting, crowding distance, SBX crossover, polynomial
mutation, the evaluation-counting problem wrapper, and run bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import defaults
from ..simulate import TriggerEvaluator


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = "nsga2"
    population_size: int = defaults.DEFAULT_POPULATION_SIZE
    max_evaluations: int = defaults.DEFAULT_MAX_EVALUATIONS
    seed: int = 0
    # variation operator constants (canonical published defaults)
    sbx_eta: float = 20.0
    sbx_prob: float = 1.0
    mutation_eta: float = 20.0
    mutation_prob: float | None = None  # default 1/n_var
    # MOEA/D
    neighborhood_size: int = 10
    # MOPSO
    inertia: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    grid_divisions: int = 10
    archive_size: int | None = None  # default population_size

    def __post_init__(self) -> None:
        if self.population_size <= 0:
            raise ValueError("population_size must be > 0")
        if self.max_evaluations < self.population_size:
            raise ValueError("max_evaluations must be >= population_size")


@dataclass
class RunResult:
    """Final nondominated set plus evaluation-indexed front snapshots."""

    x: np.ndarray          # (n, 2) decision vectors
    f: np.ndarray          # (n, 2) objective vectors
    history: list[tuple[int, np.ndarray]] = field(default_factory=list)
    n_evaluations: int = 0


class TriggerProblem:
    """Counts evaluations and enforces box bounds around a TriggerEvaluator."""

    n_var = 2
    n_obj = 2

    def __init__(self, evaluator: TriggerEvaluator | None = None,
                 bounds: tuple[float, float] = defaults.DEFAULT_BOUNDS):
        self.evaluator = evaluator if evaluator is not None else TriggerEvaluator()
        self.lower, self.upper = bounds
        self.n_evaluations = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evaluate a (k, 2) batch of decision vectors; returns (k, 2)."""
        x = np.atleast_2d(x)
        out = np.empty((x.shape[0], 2))
        for i, row in enumerate(x):
            o = self.evaluator(row[0], row[1])
            out[i, 0] = o.f1
            out[i, 1] = o.f2
        self.n_evaluations += x.shape[0]
        return out


def dominates(a, b) -> bool:
    """Pareto dominance for minimization: a is at least as good everywhere
    and strictly better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def fast_nondominated_sort(f: np.ndarray) -> list[list[int]]:
    """Partition row indices of objective matrix ``f`` into fronts."""
    f = np.atleast_2d(f)
    n = f.shape[0]
    # pairwise dominance via broadcasting
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    dom = le & lt  # dom[p, q]: p dominates q
    n_dominators = dom.sum(axis=0)
    dominated_by = [np.nonzero(dom[p])[0] for p in range(n)]

    fronts: list[list[int]] = []
    current = [p for p in range(n) if n_dominators[p] == 0]
    remaining = n_dominators.copy()
    while current:
        fronts.append(current)
        nxt = []
        for p in current:
            for q in dominated_by[p]:
                remaining[q] -= 1
                if remaining[q] == 0:
                    nxt.append(int(q))
        current = nxt
    return fronts


def nondominated_filter(f: np.ndarray) -> np.ndarray:
    """Indices of the nondominated rows of ``f``."""
    f = np.atleast_2d(f)
    if f.shape[0] == 0:
        return np.empty(0, dtype=int)
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    return np.nonzero(~np.any(le & lt, axis=0))[0]


def crowding_distance(f: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance of a mutually nondominated objective set:
    boundary points get +inf, interior points the sum of normalized
    neighbor gaps per objective."""
    f = np.atleast_2d(f)
    n, m = f.shape
    d = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(m):
        order = np.argsort(f[:, j], kind="stable")
        fj = f[order, j]
        d[order[0]] = np.inf
        d[order[-1]] = np.inf
        span = fj[-1] - fj[0]
        if span <= 0:
            continue
        d[order[1:-1]] += (fj[2:] - fj[:-2]) / span
    return d


def sbx_crossover(p1: np.ndarray, p2: np.ndarray, eta: float, prob: float,
                  lower: float, upper: float,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover; children are clamped to the bounds.
    With probability 1 - prob the parents are returned unchanged."""
    c1 = p1.astype(float).copy()
    c2 = p2.astype(float).copy()
    if rng.random() > prob:
        return c1, c2
    for j in range(len(p1)):
        if rng.random() > 0.5:
            continue
        if abs(p1[j] - p2[j]) < 1e-14:
            continue
        u = rng.random()
        if u <= 0.5:
            beta = (2.0 * u) ** (1.0 / (eta + 1.0))
        else:
            beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0))
        mean = 0.5 * (p1[j] + p2[j])
        diff = 0.5 * abs(p1[j] - p2[j])
        if rng.random() < 0.5:
            c1[j] = mean - beta * diff
            c2[j] = mean + beta * diff
        else:
            c1[j] = mean + beta * diff
            c2[j] = mean - beta * diff
    return (np.clip(c1, lower, upper), np.clip(c2, lower, upper))


def polynomial_mutation(x: np.ndarray, eta: float, prob: float,
                        lower: float, upper: float,
                        rng: np.random.Generator) -> np.ndarray:
    """Per-variable polynomial mutation; the result stays within bounds."""
    y = x.astype(float).copy()
    span = upper - lower
    for j in range(len(y)):
        if rng.random() > prob:
            continue
        u = rng.random()
        delta1 = (y[j] - lower) / span
        delta2 = (upper - y[j]) / span
        if u < 0.5:
            xy = 1.0 - delta1
            val = 2.0 * u + (1.0 - 2.0 * u) * xy ** (eta + 1.0)
            delta = val ** (1.0 / (eta + 1.0)) - 1.0
        else:
            xy = 1.0 - delta2
            val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy ** (eta + 1.0)
            delta = 1.0 - val ** (1.0 / (eta + 1.0))
        y[j] += delta * span
    return np.clip(y, lower, upper)


def random_population(n: int, lower: float, upper: float,
                      rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(lower, upper, size=(n, 2))


def snapshot(history: list[tuple[int, np.ndarray]], n_evals: int,
             f: np.ndarray) -> None:
    """Record the nondominated objective set at an evaluation count."""
    idx = nondominated_filter(f)
    history.append((n_evals, f[idx].copy()))
