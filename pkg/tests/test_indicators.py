"""Tests for the front-quality indicators, significance tests, and front
CSV exchange. Hypervolume exactness is checked against a Monte-Carlo
oracle; the statistical tests against enumeration / hand computation."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hedopt.indicators import (Front, IndicatorError, combine_reference_front,
                               hv_history, hypervolume_2d, igd,
                               indicator_report, kruskal_wallis,
                               mann_whitney_u, normalized_hypervolume,
                               read_front_csv, spread, write_front_csv)


# ---------------------------------------------------------------------------
# hypervolume

def test_hv_empty_front():
    assert hypervolume_2d([], (0.4223, 0.5752)) == 0.0


def test_hv_single_rectangle():
    # (0.4223 - 0.2) * (0.5752 - 0.3)
    assert hypervolume_2d([[0.2, 0.3]], (0.4223, 0.5752)) == pytest.approx(
        0.06117696, abs=1e-12)


def test_hv_two_point_staircase():
    # rectangles: (0.5-0.2)*(1-0.6) + (1-0.5)*(1-0.3)
    hv = hypervolume_2d([[0.2, 0.6], [0.5, 0.3]], (1.0, 1.0))
    assert hv == pytest.approx(0.3 * 0.4 + 0.5 * 0.7, abs=1e-12)


def test_hv_excludes_points_outside_reference_box():
    with pytest.warns(UserWarning, match="outside the reference box"):
        hv = hypervolume_2d([[0.2, 0.3], [0.6, 0.1]], (0.4223, 0.5752))
    assert hv == pytest.approx(0.06117696, abs=1e-12)


def test_hv_point_on_reference_contributes_zero():
    assert hypervolume_2d([[1.0, 1.0]], (1.0, 1.0)) == 0.0


def _mc_hypervolume(f, ref, n=10**6, seed=0):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2)) * ref
    covered = np.zeros(n, dtype=bool)
    for p in f:
        covered |= (pts[:, 0] >= p[0]) & (pts[:, 1] >= p[1])
    frac = covered.mean()
    area = ref[0] * ref[1]
    sigma = area * np.sqrt(frac * (1 - frac) / n)
    return frac * area, sigma


def test_hv_matches_monte_carlo_on_random_fronts():
    rng = np.random.default_rng(42)
    ref = (1.0, 1.0)
    for k in range(100):
        f = rng.random((30, 2))
        exact = hypervolume_2d(f, ref)
        estimate, sigma = _mc_hypervolume(f, ref, n=10**5, seed=k)
        assert abs(exact - estimate) <= 3 * max(sigma, 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0.0, 0.99), st.floats(0.0, 0.99)),
                min_size=1, max_size=15),
       st.tuples(st.floats(0.0, 0.99), st.floats(0.0, 0.99)))
def test_hv_monotone_under_added_point(points, new_point):
    ref = (1.0, 1.0)
    before = hypervolume_2d(points, ref)
    after = hypervolume_2d(points + [new_point], ref)
    assert after >= before - 1e-12


def test_normalized_hv_of_reference_itself():
    ref = [[0.1, 0.5], [0.2, 0.3], [0.4, 0.1]]
    hv = normalized_hypervolume(ref, ref)
    # scaled objectives live in [0, 1/1.1]; the hypervolume is positive
    # and bounded by 1
    assert 0.0 < hv < 1.0
    # shrinking the front toward the ideal point raises the indicator
    better = [[0.05, 0.25], [0.1, 0.15], [0.2, 0.05]]
    assert normalized_hypervolume(better, ref) > hv


# ---------------------------------------------------------------------------
# IGD and spread

def test_igd_identity():
    f = np.random.default_rng(1).random((20, 2))
    assert igd(f, f) == 0.0


def test_igd_single_pair():
    assert igd([[3.0, 4.0]], [[0.0, 0.0]]) == pytest.approx(5.0)


def test_igd_empty_front_is_infinite():
    assert igd([], [[0.0, 0.0]]) == np.inf


def test_igd_is_mean_of_nearest_distances():
    reference = [[0.0, 0.0], [1.0, 1.0]]
    front = [[0.0, 1.0]]
    assert igd(front, reference) == pytest.approx(1.0)


def test_spread_two_points_at_reference_extremes():
    ref = [[0.0, 1.0], [1.0, 0.0]]
    assert spread(ref, ref) == pytest.approx(0.0)


def test_spread_uniform_front_matching_extremes():
    ref = [[0.0, 1.0], [0.25, 0.75], [0.5, 0.5], [0.75, 0.25], [1.0, 0.0]]
    assert spread(ref, ref) == pytest.approx(0.0, abs=1e-12)


def test_spread_increases_for_clustered_front():
    ref = [[0.0, 1.0], [0.25, 0.75], [0.5, 0.5], [0.75, 0.25], [1.0, 0.0]]
    clustered = [[0.0, 1.0], [0.45, 0.55], [0.5, 0.5], [0.55, 0.45],
                 [1.0, 0.0]]
    assert spread(clustered, ref) > spread(ref, ref)


def test_spread_requires_two_points():
    with pytest.raises(IndicatorError):
        spread([[0.5, 0.5]], [[0.0, 1.0], [1.0, 0.0]])


# ---------------------------------------------------------------------------
# combining fronts

def test_combine_single_front_is_identity():
    f = Front(f=np.array([[0.1, 0.9], [0.5, 0.5], [0.9, 0.1]]))
    combined = combine_reference_front([f])
    assert np.array_equal(combined.f, f.f)


def test_combine_disjoint_mutually_nondominated():
    a = Front(f=np.array([[0.1, 0.9], [0.5, 0.5]]))
    b = Front(f=np.array([[0.3, 0.7], [0.9, 0.1]]))
    combined = combine_reference_front([a, b])
    assert combined.f.shape == (4, 2)


def test_combine_removes_dominated_and_duplicates():
    a = Front(f=np.array([[0.1, 0.9], [0.5, 0.5], [0.5, 0.5]]))
    b = Front(f=np.array([[0.6, 0.6]]))  # dominated by (0.5, 0.5)
    combined = combine_reference_front([a, b])
    assert combined.f.shape == (2, 2)


def test_combine_carries_decision_vectors():
    a = Front(f=np.array([[0.1, 0.9]]), x=np.array([[1.0, 2.0]]))
    b = Front(f=np.array([[0.9, 0.1]]), x=np.array([[3.0, 4.0]]))
    combined = combine_reference_front([a, b])
    assert combined.x is not None
    assert combined.x.shape == (2, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_combine_idempotent(seed):
    rng = np.random.default_rng(seed)
    fronts = [Front(f=rng.random((rng.integers(1, 12), 2)))
              for _ in range(rng.integers(1, 5))]
    once = combine_reference_front(fronts)
    twice = combine_reference_front([once])
    assert np.array_equal(once.f, twice.f)


# ---------------------------------------------------------------------------
# significance tests

def test_mann_whitney_separated_samples_exact():
    u, p = mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert u == 0.0
    assert p == pytest.approx(0.1)  # 2/20 rank assignments are as extreme


def test_mann_whitney_identical_samples():
    _, p = mann_whitney_u([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert p == pytest.approx(1.0)


def test_mann_whitney_symmetry_exact_and_approximate():
    rng = np.random.default_rng(5)
    for n in (4, 12):  # below and above the exact-enumeration cutoff
        a = rng.normal(0.0, 1.0, n)
        b = rng.normal(0.5, 1.0, n)
        ua, pa = mann_whitney_u(a, b)
        ub, pb = mann_whitney_u(b, a)
        assert pa == pytest.approx(pb, abs=1e-12)
        assert ua + ub == pytest.approx(n * n)


def test_mann_whitney_large_separated_samples_significant():
    a = list(range(0, 20))
    b = list(range(100, 120))
    _, p = mann_whitney_u(a, b)
    assert p <= 0.01


def test_mann_whitney_empty_sample_rejected():
    with pytest.raises(IndicatorError):
        mann_whitney_u([], [1.0])


def test_kruskal_wallis_identical_groups():
    h, p = kruskal_wallis([[1.0, 1.0], [1.0, 1.0]])
    assert h == 0.0
    assert p == 1.0


def test_kruskal_wallis_hand_computation():
    # groups {1,1}, {2,2}, {3,3}: midranks 1.5, 3.5, 5.5;
    # uncorrected H = 12/(6*7) * 2*(1.5^2+3.5^2+5.5^2) - 3*7 = 4.5714...;
    # tie correction 1 - 18/210 divides it up to exactly 5
    h, p = kruskal_wallis([[1, 1], [2, 2], [3, 3]])
    assert h == pytest.approx(5.0, abs=1e-9)
    assert 0.05 < p < 0.1


def test_kruskal_wallis_needs_two_groups():
    with pytest.raises(IndicatorError):
        kruskal_wallis([[1.0, 2.0]])


# ---------------------------------------------------------------------------
# history and reporting

def test_hv_history_single_snapshot():
    history = [(100, np.array([[0.2, 0.3]]))]
    out = hv_history(history, (0.4223, 0.5752))
    assert out == [(100, pytest.approx(0.06117696))]


def test_hv_history_preserves_order():
    history = [(100, np.array([[0.5, 0.5]])),
               (200, np.array([[0.4, 0.4]])),
               (300, np.array([[0.2, 0.2]]))]
    out = hv_history(history, (1.0, 1.0))
    hvs = [hv for _, hv in out]
    assert hvs == sorted(hvs)


def test_indicator_report_structure():
    rng = np.random.default_rng(0)
    fronts = {
        "a": [rng.random((10, 2)) * 0.3 for _ in range(5)],
        "b": [0.3 + rng.random((10, 2)) * 0.3 for _ in range(5)],
    }
    report = indicator_report(fronts)
    assert set(report.algorithms) == {"a", "b"}
    assert report.n_runs == 5
    assert set(report.kruskal) == {"hv", "igd", "spread"}
    assert ("hv", "a", "b") in report.pairwise
    d = report.to_dict()
    assert d["algorithms"]["a"]["hv"]["mean"] > d["algorithms"]["b"]["hv"]["mean"]
    table = report.format_table()
    assert "a" in table and "Kruskal-Wallis" in table


def test_indicator_report_identical_sets_not_significant():
    rng = np.random.default_rng(3)
    shared = [rng.random((8, 2)) for _ in range(4)]
    report = indicator_report({"a": shared, "b": list(shared)})
    for (_metric, _a, _b), (_u, p) in report.pairwise.items():
        assert p > 0.05


# ---------------------------------------------------------------------------
# CSV exchange

def test_front_csv_round_trip(tmp_path):
    front = Front(f=np.array([[0.25, 0.5], [0.3, 0.4]]),
                  x=np.array([[10.5, 20.25], [30.0, 40.0]]))
    path = tmp_path / "front.csv"
    write_front_csv(path, front)
    back = read_front_csv(path)
    assert np.array_equal(back.f, front.f)
    assert np.array_equal(back.x, front.x)


def test_front_csv_format(tmp_path):
    path = tmp_path / "front.csv"
    write_front_csv(path, Front(f=np.array([[0.25, 0.5]]),
                                x=np.array([[1.0, 2.0]])))
    raw = path.read_bytes()
    assert raw.startswith(b"t_sd,t_ld,f1,f2\n")
    assert b"\r" not in raw  # LF line endings


def test_front_csv_without_decisions(tmp_path):
    path = tmp_path / "front.csv"
    write_front_csv(path, Front(f=np.array([[0.25, 0.5]])))
    back = read_front_csv(path)
    assert back.x is None
    assert np.array_equal(back.f, np.array([[0.25, 0.5]]))


def test_front_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c,d\n1,2,3,4\n", encoding="utf-8")
    with pytest.raises(IndicatorError, match="header"):
        read_front_csv(path)
