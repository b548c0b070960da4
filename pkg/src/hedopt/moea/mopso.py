"""MOPSO: particle swarm with an external nondominated archive.

Leaders are drawn from the archive with a roulette biased toward sparsely
populated cells of an adaptive objective-space grid; when the archive
overflows, members of the most crowded cells are evicted first. A
turbulence (mutation) operator with decaying reach keeps early exploration
alive.
"""

from __future__ import annotations

import numpy as np

from .common import (RunConfig, RunResult, TriggerProblem, dominates,
                     nondominated_filter, random_population, snapshot)


def _grid_cells(f: np.ndarray, divisions: int) -> np.ndarray:
    """Flattened adaptive-grid cell index for every archive member."""
    lo = f.min(axis=0)
    hi = f.max(axis=0)
    span = np.where(hi - lo <= 0, 1.0, hi - lo)
    coord = np.floor((f - lo) / span * divisions).astype(int)
    coord = np.clip(coord, 0, divisions - 1)
    return coord[:, 0] * divisions + coord[:, 1]


def _select_leader(archive_f: np.ndarray, divisions: int,
                   rng: np.random.Generator) -> int:
    cells = _grid_cells(archive_f, divisions)
    unique, counts = np.unique(cells, return_counts=True)
    fitness = 10.0 / counts  # fewer occupants -> more attractive cell
    probs = fitness / fitness.sum()
    cell = unique[rng.choice(len(unique), p=probs)]
    members = np.nonzero(cells == cell)[0]
    return int(members[rng.integers(0, len(members))])


def _truncate_archive(archive_x: list[np.ndarray], archive_f: list[np.ndarray],
                      size: int, divisions: int,
                      rng: np.random.Generator) -> None:
    while len(archive_f) > size:
        cells = _grid_cells(np.array(archive_f), divisions)
        unique, counts = np.unique(cells, return_counts=True)
        cell = unique[np.argmax(counts)]
        members = np.nonzero(cells == cell)[0]
        drop = int(members[rng.integers(0, len(members))])
        archive_x.pop(drop)
        archive_f.pop(drop)


def _archive_add(archive_x: list[np.ndarray], archive_f: list[np.ndarray],
                 x: np.ndarray, f: np.ndarray) -> None:
    for g in archive_f:
        if dominates(g, f) or np.array_equal(g, f):
            return
    keep = [k for k in range(len(archive_f)) if not dominates(f, archive_f[k])]
    archive_x[:] = [archive_x[k] for k in keep]
    archive_f[:] = [archive_f[k] for k in keep]
    archive_x.append(x.copy())
    archive_f.append(f.copy())


def run_mopso(problem: TriggerProblem, config: RunConfig) -> RunResult:
    rng = np.random.default_rng(config.seed)
    n = config.population_size
    lower, upper = problem.lower, problem.upper
    span = upper - lower
    archive_size = config.archive_size if config.archive_size is not None else n
    divisions = config.grid_divisions
    n_gens = max(config.max_evaluations // n - 1, 1)

    x = random_population(n, lower, upper, rng)
    v = np.zeros_like(x)
    f = problem.evaluate(x)
    pbest_x = x.copy()
    pbest_f = f.copy()

    archive_x: list[np.ndarray] = []
    archive_f: list[np.ndarray] = []
    for k in range(n):
        _archive_add(archive_x, archive_f, x[k], f[k])
    _truncate_archive(archive_x, archive_f, archive_size, divisions, rng)

    history: list[tuple[int, np.ndarray]] = []
    snapshot(history, problem.n_evaluations, np.array(archive_f))

    gen = 0
    while problem.n_evaluations < config.max_evaluations:
        budget = config.max_evaluations - problem.n_evaluations
        batch = min(n, budget)
        af = np.array(archive_f)
        for k in range(batch):
            lead = archive_x[_select_leader(af, divisions, rng)]
            r1, r2 = rng.random(2)
            v[k] = (config.inertia * v[k]
                    + config.c1 * r1 * (pbest_x[k] - x[k])
                    + config.c2 * r2 * (lead - x[k]))
            x[k] = x[k] + v[k]
            # reflect at the box bounds
            for j in range(x.shape[1]):
                if x[k, j] < lower:
                    x[k, j] = lower
                    v[k, j] *= -1.0
                elif x[k, j] > upper:
                    x[k, j] = upper
                    v[k, j] *= -1.0
        # turbulence with linearly decaying reach and rate
        decay = max(1.0 - gen / n_gens, 0.0)
        for k in range(batch):
            if rng.random() < 0.5 * decay:
                j = rng.integers(0, x.shape[1])
                reach = 0.5 * span * decay
                x[k, j] = np.clip(x[k, j] + rng.uniform(-reach, reach),
                                  lower, upper)

        new_f = problem.evaluate(x[:batch])
        f[:batch] = new_f
        for k in range(batch):
            _archive_add(archive_x, archive_f, x[k], f[k])
            if dominates(f[k], pbest_f[k]):
                pbest_x[k] = x[k].copy()
                pbest_f[k] = f[k].copy()
            elif not dominates(pbest_f[k], f[k]) and rng.random() < 0.5:
                pbest_x[k] = x[k].copy()
                pbest_f[k] = f[k].copy()
        _truncate_archive(archive_x, archive_f, archive_size, divisions, rng)
        snapshot(history, problem.n_evaluations, np.array(archive_f))
        gen += 1

    ax = np.array(archive_x)
    af = np.array(archive_f)
    idx = nondominated_filter(af)
    return RunResult(x=ax[idx].copy(), f=af[idx].copy(), history=history,
                     n_evaluations=problem.n_evaluations)
