"""Acceptance suite: one test per criterion, each at its stated tolerance.

Runs the real reproduction workloads (reference strategies, a 10-run
NSGA-II / MOEA/D campaign at 4,000 evaluations, the 101x101 grid oracle),
so this file takes a couple of minutes. Each criterion reports exactly one
pass/fail line via its test outcome.
"""

import time

import numpy as np
import pytest

from hedopt.cli import derive_seed
from hedopt.indicators import (combine_reference_front, hypervolume_2d, igd,
                               kruskal_wallis, mann_whitney_u,
                               normalized_hypervolume)
from hedopt.moea import (RunConfig, TriggerProblem, dominates,
                         fast_nondominated_sort, run_moead, run_nsga2)
from hedopt.policy import build_influence_curve, lockdown, social_distancing
from hedopt.simulate import (TriggerEvaluator, default_scenario, integrate,
                             objectives, triggered_scenario)

BASE_SEED = 42
N_RUNS = 10


@pytest.fixture(scope="module")
def evaluator():
    ev = TriggerEvaluator()
    ev(0.0, 0.0)  # trigger JIT compilation outside the timed sections
    return ev


@pytest.fixture(scope="module")
def nsga2_campaign(evaluator):
    """10 NSGA-II runs at the published budget, with wall-clock timing."""
    results = []
    start = time.perf_counter()
    for k in range(N_RUNS):
        problem = TriggerProblem(evaluator)
        config = RunConfig(algorithm="nsga2",
                           seed=derive_seed(BASE_SEED, 0, k))
        results.append(run_nsga2(problem, config))
    elapsed = time.perf_counter() - start
    return results, elapsed


@pytest.fixture(scope="module")
def moead_campaign(evaluator):
    results = []
    for k in range(N_RUNS):
        problem = TriggerProblem(evaluator)
        config = RunConfig(algorithm="moead",
                           seed=derive_seed(BASE_SEED, 2, k))
        results.append(run_moead(problem, config))
    return results


@pytest.fixture(scope="module")
def reference_front(nsga2_campaign, moead_campaign):
    runs, _ = nsga2_campaign
    return combine_reference_front(
        [r.f for r in runs] + [r.f for r in moead_campaign])


@pytest.fixture(scope="module")
def grid_front(evaluator):
    """101x101 brute-force trigger grid, reduced to its nondominated set."""
    grid = np.linspace(0.0, 100.0, 101)
    f = np.empty((101 * 101, 2))
    k = 0
    for t_sd in grid:
        for t_ld in grid:
            f[k] = evaluator(t_sd, t_ld).as_tuple()
            k += 1
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    return f[~np.any(le & lt, axis=0)]


def _timed_objectives(scenario):
    start = time.perf_counter()
    obj = objectives(integrate(scenario))
    return obj, time.perf_counter() - start


def test_criterion_1_no_policy_baseline(evaluator):
    obj, elapsed = _timed_objectives(default_scenario())
    problems = []
    if abs(obj.f1 - 0.5403) > 0.01:
        problems.append(f"peak infected+exposed {obj.f1:.4f} "
                        f"not within 0.5403 +/- 0.01")
    if abs(-obj.f2 - (-0.1178)) > 0.01:
        problems.append(f"GDP minimum {-obj.f2:.4f} not within "
                        f"-0.1178 +/- 0.01")
    assert elapsed < 1.0, f"baseline took {elapsed:.2f}s"
    if problems:
        pytest.fail("; ".join(problems))


def test_criterion_2_health_optimal_strategy(evaluator):
    obj, elapsed = _timed_objectives(triggered_scenario(61.0113, 7.8652))
    assert elapsed < 1.0
    assert obj.f1 == pytest.approx(0.2650, abs=0.02)
    assert obj.f2 == pytest.approx(0.5752, abs=0.02)


def test_criterion_3_economy_optimal_strategy(evaluator):
    obj, elapsed = _timed_objectives(triggered_scenario(0.0516, 96.4521))
    assert elapsed < 1.0
    assert obj.f2 <= 0.005
    assert obj.f1 == pytest.approx(0.4223, abs=0.02)


def test_criterion_4_trade_off_strategy(evaluator):
    obj, elapsed = _timed_objectives(triggered_scenario(0.0584, 15.0575))
    assert elapsed < 1.0
    assert obj.f1 == pytest.approx(0.3306, abs=0.02)
    assert obj.f2 == pytest.approx(0.4181, abs=0.02)


def test_criterion_5_optimization_reproduction(nsga2_campaign, moead_campaign,
                                               reference_front):
    runs, elapsed = nsga2_campaign
    assert elapsed < 120.0, f"10-run NSGA-II campaign took {elapsed:.0f}s"
    hv = [normalized_hypervolume(r.f, reference_front) for r in runs]
    mean_hv = float(np.mean(hv))
    assert 0.195 <= mean_hv <= 0.205, f"mean HV {mean_hv:.4f}"
    igd_nsga2 = float(np.mean([igd(r.f, reference_front) for r in runs]))
    igd_moead = float(np.mean([igd(r.f, reference_front)
                               for r in moead_campaign]))
    assert igd_moead >= 5.0 * igd_nsga2, (
        f"IGD ratio {igd_moead / igd_nsga2:.2f} below 5 "
        f"(NSGA-II {igd_nsga2:.2e}, MOEA/D {igd_moead:.2e})")


def test_criterion_6_grid_oracle_equivalence(grid_front, nsga2_campaign):
    runs, _ = nsga2_campaign
    combined = combine_reference_front([r.f for r in runs]).f
    eps = 0.005
    # every grid-front point within eps (per objective) of the combined front
    gap = np.max(np.abs(grid_front[:, None, :] - combined[None, :, :]),
                 axis=2).min(axis=1)
    # no optimizer point dominated by a grid point by more than eps
    margin = np.array([
        np.min(np.maximum(grid_front[:, 0] - p[0], grid_front[:, 1] - p[1]))
        for p in combined])
    assert np.min(margin) >= -eps, (
        f"optimizer point dominated by grid by {-np.min(margin):.4f}")
    assert np.max(gap) <= eps, (
        f"grid point {gap.argmax()} is {np.max(gap):.4f} from the "
        f"optimizer front (> {eps})")


def test_criterion_7_property_suites(evaluator):
    # conservation along trajectories
    for triggers in ((None), (10.0, 5.0), (80.0, 90.0)):
        scenario = (default_scenario() if triggers is None
                    else triggered_scenario(*triggers))
        totals = integrate(scenario).states[:, :7].sum(axis=1)
        assert np.max(np.abs(totals - 1.0)) <= 1e-9

    # nondominated sort against the O(n^3) oracle
    rng = np.random.default_rng(0)
    for _ in range(200):
        f = rng.random((rng.integers(2, 20), 2))
        fronts = fast_nondominated_sort(f)
        for rank, front in enumerate(fronts):
            for p in front:
                higher = [q for fr in fronts[:rank] for q in fr]
                assert any(dominates(f[q], f[p]) for q in higher) or rank == 0
                assert not any(dominates(f[q], f[p]) for q in front)

    # staircase HV against Monte-Carlo
    for k in range(100):
        f = rng.random((20, 2))
        exact = hypervolume_2d(f, (1.0, 1.0))
        pts = rng.random((20000, 2))
        covered = np.zeros(len(pts), dtype=bool)
        for p in f:
            covered |= (pts[:, 0] >= p[0]) & (pts[:, 1] >= p[1])
        frac = covered.mean()
        sigma = np.sqrt(frac * (1 - frac) / len(pts))
        assert abs(exact - frac) <= 3 * max(sigma, 1e-12)

    # seed determinism is byte-exact
    def short_run(seed):
        return run_nsga2(TriggerProblem(evaluator),
                         RunConfig(max_evaluations=300, seed=seed))
    a, b = short_run(123), short_run(123)
    assert a.x.tobytes() == b.x.tobytes()
    assert a.f.tobytes() == b.f.tobytes()

    # curve peak equals the policy amplitude
    for spec in (social_distancing(0.0), lockdown(0.0)):
        curve = build_influence_curve(spec)
        extremum = curve.ys.min() if spec.amplitude < 0 else curve.ys.max()
        assert abs(extremum - spec.amplitude) <= 1e-6

    # step halving moves the objectives by at most 1e-3
    import dataclasses
    coarse = objectives(integrate(triggered_scenario(20.0, 10.0)))
    fine = objectives(integrate(dataclasses.replace(
        triggered_scenario(20.0, 10.0), dt=0.025)))
    assert abs(coarse.f1 - fine.f1) <= 1e-3
    assert abs(coarse.f2 - fine.f2) <= 1e-3


def test_criterion_8_statistical_tests(nsga2_campaign, moead_campaign,
                                       reference_front):
    u, p = mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert u == 0.0 and p == pytest.approx(0.1)

    h, p_kw = kruskal_wallis([[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]])
    assert h == 0.0

    runs, _ = nsga2_campaign
    hv_nsga2 = [normalized_hypervolume(r.f, reference_front) for r in runs]
    hv_moead = [normalized_hypervolume(r.f, reference_front)
                for r in moead_campaign]
    _, p_pair = mann_whitney_u(hv_nsga2, hv_moead)
    assert p_pair <= 0.01, f"NSGA-II vs MOEA/D HV p-value {p_pair:.4g}"
