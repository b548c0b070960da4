"""Front-quality indicators and nonparametric significance tests.

Provides the exact bi-objective hypervolume (raw and normalized flavors),
inverted generational distance, Deb's spread, reference-front combination,
Mann-Whitney U and Kruskal-Wallis tests, and CSV front exchange.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from . import defaults


class IndicatorError(ValueError):
    """Raised when an indicator's preconditions are not met."""


@dataclass(frozen=True)
class Front:
    """A set of solutions: trigger times ``x`` (n, 2) and objectives
    ``f`` (n, 2). ``x`` may be empty when only objectives are known."""

    f: np.ndarray
    x: np.ndarray | None = None

    def __post_init__(self) -> None:
        f = np.atleast_2d(np.asarray(self.f, dtype=float))
        object.__setattr__(self, "f", f.reshape(-1, 2) if f.size else
                           np.empty((0, 2)))
        if self.x is not None:
            x = np.atleast_2d(np.asarray(self.x, dtype=float))
            x = x.reshape(-1, 2) if x.size else np.empty((0, 2))
            if x.shape[0] != self.f.shape[0]:
                raise IndicatorError("x and f row counts differ")
            object.__setattr__(self, "x", x)

    def __len__(self) -> int:
        return self.f.shape[0]


def _objectives(front) -> np.ndarray:
    """Accept a Front or a bare (n, 2) objective array."""
    if isinstance(front, Front):
        return front.f
    f = np.atleast_2d(np.asarray(front, dtype=float))
    return f.reshape(-1, 2) if f.size else np.empty((0, 2))


def _nondominated(f: np.ndarray) -> np.ndarray:
    if f.shape[0] == 0:
        return f
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    return f[~np.any(le & lt, axis=0)]


def combine_reference_front(fronts: Iterable) -> Front:
    """Union of all members with dominated and duplicate rows removed.
    Decision vectors are carried along when every input provides them."""
    f_parts: list[np.ndarray] = []
    x_parts: list[np.ndarray] | None = []
    for front in fronts:
        f_parts.append(_objectives(front))
        if x_parts is not None and isinstance(front, Front) and front.x is not None:
            x_parts.append(front.x)
        else:
            x_parts = None
    if not f_parts:
        return Front(f=np.empty((0, 2)))
    f = np.vstack(f_parts)
    x = np.vstack(x_parts) if x_parts is not None else None

    f_unique, keep_idx = np.unique(f, axis=0, return_index=True)
    le = np.all(f_unique[:, None, :] <= f_unique[None, :, :], axis=2)
    lt = np.any(f_unique[:, None, :] < f_unique[None, :, :], axis=2)
    mask = ~np.any(le & lt, axis=0)
    order = np.lexsort((f_unique[mask, 1], f_unique[mask, 0]))
    f_out = f_unique[mask][order]
    x_out = x[keep_idx][mask][order] if x is not None else None
    return Front(f=f_out, x=x_out)


def hypervolume_2d(front, ref: tuple[float, float] = defaults.DEFAULT_REFERENCE_POINT) -> float:
    """Exact dominated area of a minimization front with respect to a
    reference point: the union of rectangles [f1, r1] x [f2, r2], computed
    as a staircase sweep over the nondominated members. Members outside
    the reference box are excluded (with a warning)."""
    f = _objectives(front)
    if f.shape[0] == 0:
        return 0.0
    r1, r2 = float(ref[0]), float(ref[1])
    inside = (f[:, 0] <= r1) & (f[:, 1] <= r2)
    if not np.all(inside):
        warnings.warn(
            f"{int((~inside).sum())} front member(s) outside the reference "
            "box were excluded from the hypervolume", stacklevel=2)
        f = f[inside]
    f = _nondominated(f)
    if f.shape[0] == 0:
        return 0.0
    f = f[np.argsort(f[:, 0], kind="stable")]
    area = 0.0
    for i in range(f.shape[0]):
        next_f1 = f[i + 1, 0] if i + 1 < f.shape[0] else r1
        area += (next_f1 - f[i, 0]) * (r2 - f[i, 1])
    return float(area)


def normalized_hypervolume(front, reference) -> float:
    """Hypervolume after dividing each objective by 1.1 times its maximum
    over the reference front (the bounds of the combined front), measured
    against the unit reference point (1, 1). This is the normalization
    convention of the usual indicator toolkits and puts ideal-to-nadir
    fronts on a comparable ~0-1 scale."""
    ref = _objectives(reference)
    if ref.shape[0] == 0:
        raise IndicatorError("reference front must be non-empty")
    scale = 1.1 * ref.max(axis=0)
    if np.any(scale <= 0):
        raise IndicatorError("reference front bounds must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return hypervolume_2d(_objectives(front) / scale, (1.0, 1.0))


def igd(front, reference) -> float:
    """Mean Euclidean distance from each reference member to its nearest
    front member. An empty front is infinitely far away."""
    ref = _objectives(reference)
    if ref.shape[0] == 0:
        raise IndicatorError("reference front must be non-empty")
    f = _objectives(front)
    if f.shape[0] == 0:
        return math.inf
    d = np.linalg.norm(ref[:, None, :] - f[None, :, :], axis=2)
    return float(d.min(axis=1).mean())


def spread(front, reference) -> float:
    """Deb's bi-objective spread Delta:
    (d_f + d_l + sum |d_i - dbar|) / (d_f + d_l + (n - 1) * dbar),
    where d_f, d_l are the distances from the front's f1-sorted extremes
    to the reference front's extremes and d_i are consecutive gaps along
    the sorted front. Zero means perfectly uniform coverage out to the
    reference extremes."""
    f = _objectives(front)
    if f.shape[0] < 2:
        raise IndicatorError("spread requires a front of at least 2 points")
    ref = _objectives(reference)
    if ref.shape[0] == 0:
        raise IndicatorError("reference front must be non-empty")
    f = f[np.argsort(f[:, 0], kind="stable")]
    ref = ref[np.argsort(ref[:, 0], kind="stable")]
    d_f = float(np.linalg.norm(f[0] - ref[0]))
    d_l = float(np.linalg.norm(f[-1] - ref[-1]))
    gaps = np.linalg.norm(np.diff(f, axis=0), axis=1)
    mean_gap = float(gaps.mean())
    denom = d_f + d_l + (f.shape[0] - 1) * mean_gap
    if denom <= 0:
        return 0.0
    return (d_f + d_l + float(np.abs(gaps - mean_gap).sum())) / denom


def _rank_u(a: np.ndarray, b: np.ndarray) -> float:
    """U statistic of sample a via midranks of the pooled data."""
    pooled = np.concatenate([a, b])
    ranks = stats.rankdata(pooled)
    r_a = ranks[: len(a)].sum()
    return float(r_a - len(a) * (len(a) + 1) / 2.0)


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Two-sided Mann-Whitney U test. Exact enumeration of all rank
    assignments when both samples have fewer than 8 observations; the
    tie-corrected normal approximation with continuity correction
    otherwise. Returns (U of the first sample, p-value)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise IndicatorError("both samples must be non-empty")
    n1, n2 = len(a), len(b)
    u1 = _rank_u(a, b)
    u2 = n1 * n2 - u1
    u_min = min(u1, u2)

    if min(n1, n2) < 8:
        # exact: U distribution over every way of assigning the pooled
        # (mid)ranks to the first sample
        pooled = np.concatenate([a, b])
        ranks = stats.rankdata(pooled)
        offset = n1 * (n1 + 1) / 2.0
        count = 0
        total = 0
        for idx in combinations(range(n1 + n2), n1):
            u = ranks[list(idx)].sum() - offset
            total += 1
            if min(u, n1 * n2 - u) <= u_min + 1e-9:
                count += 1
        p = min(1.0, count / total)
        return u1, p

    tie_counts = np.unique(np.concatenate([a, b]), return_counts=True)[1]
    n = n1 + n2
    tie_term = ((tie_counts**3 - tie_counts).sum()) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return u1, 1.0
    mu = n1 * n2 / 2.0
    z = (abs(u1 - mu) - 0.5) / math.sqrt(var)
    z = max(z, 0.0)
    p = 2.0 * stats.norm.sf(z)
    return u1, min(1.0, p)


def kruskal_wallis(samples: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Kruskal-Wallis H with tie correction and a chi-squared p-value on
    k - 1 degrees of freedom."""
    if len(samples) < 2:
        raise IndicatorError("kruskal_wallis requires at least 2 groups")
    groups = [np.asarray(s, dtype=float) for s in samples]
    if any(g.size == 0 for g in groups):
        raise IndicatorError("every group must be non-empty")
    if all(np.all(g == groups[0][0]) for g in groups):
        # scipy rejects the all-identical degenerate case; by convention
        # there is no evidence of a difference
        return 0.0, 1.0
    h, p = stats.kruskal(*groups)
    return float(h), float(p)


def hv_history(history: Sequence[tuple[int, np.ndarray]],
               ref: tuple[float, float] = defaults.DEFAULT_REFERENCE_POINT,
               ) -> list[tuple[int, float]]:
    """Hypervolume of each recorded snapshot, as (evaluations, HV) pairs."""
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n_evals, f in history:
            out.append((int(n_evals), hypervolume_2d(f, ref)))
    return out


# ---------------------------------------------------------------------------
# aggregate reporting

@dataclass(frozen=True)
class AlgorithmIndicators:
    """Per-run indicator samples for one algorithm."""

    algorithm: str
    hv: np.ndarray
    igd: np.ndarray
    spread: np.ndarray

    def summary(self) -> dict[str, tuple[float, float]]:
        return {
            "hv": (float(self.hv.mean()), float(self.hv.std(ddof=1)) if len(self.hv) > 1 else 0.0),
            "igd": (float(self.igd.mean()), float(self.igd.std(ddof=1)) if len(self.igd) > 1 else 0.0),
            "spread": (float(self.spread.mean()), float(self.spread.std(ddof=1)) if len(self.spread) > 1 else 0.0),
        }


@dataclass
class IndicatorReport:
    """Mean/std indicator table plus the significance-test outcomes."""

    algorithms: dict[str, AlgorithmIndicators]
    kruskal: dict[str, tuple[float, float]] = field(default_factory=dict)
    pairwise: dict[tuple[str, str, str], tuple[float, float]] = field(default_factory=dict)
    n_runs: int = 0
    alpha: float = defaults.DEFAULT_ALPHA

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "alpha": self.alpha,
            "algorithms": {
                name: {metric: {"mean": m, "std": s}
                       for metric, (m, s) in alg.summary().items()}
                for name, alg in self.algorithms.items()
            },
            "kruskal_wallis": {metric: {"H": h, "p": p}
                               for metric, (h, p) in self.kruskal.items()},
            "mann_whitney": [
                {"metric": metric, "a": a, "b": b, "U": u, "p": p,
                 "significant": p <= self.alpha}
                for (metric, a, b), (u, p) in self.pairwise.items()
            ],
        }

    def format_table(self) -> str:
        lines = [f"{'algorithm':<10} {'HV':>22} {'IGD':>22} {'Spread':>22}"]
        for name, alg in self.algorithms.items():
            s = alg.summary()
            cells = [f"{s[m][0]:.4e} ({s[m][1]:.1e})"
                     for m in ("hv", "igd", "spread")]
            lines.append(f"{name:<10} {cells[0]:>22} {cells[1]:>22} {cells[2]:>22}")
        for metric, (h, p) in self.kruskal.items():
            lines.append(f"Kruskal-Wallis [{metric}]: H={h:.4f} p={p:.4g}")
        return "\n".join(lines)


def indicator_report(run_fronts: Mapping[str, Sequence],
                     reference_front=None,
                     ref_point: tuple[float, float] = defaults.DEFAULT_REFERENCE_POINT,
                     alpha: float = defaults.DEFAULT_ALPHA,
                     normalized_hv: bool = True) -> IndicatorReport:
    """Compute per-run HV/IGD/spread for each algorithm's fronts, the
    Kruskal-Wallis test across algorithms, and pairwise Mann-Whitney U
    tests. The reference front defaults to the combination of every run
    front supplied."""
    if reference_front is None:
        reference_front = combine_reference_front(
            front for fronts in run_fronts.values() for front in fronts)
    ref = _objectives(reference_front)

    algorithms: dict[str, AlgorithmIndicators] = {}
    counts = set()
    for name, fronts in run_fronts.items():
        hv_vals, igd_vals, sp_vals = [], [], []
        for front in fronts:
            if normalized_hv:
                hv_vals.append(normalized_hypervolume(front, ref))
            else:
                hv_vals.append(hypervolume_2d(front, ref_point))
            igd_vals.append(igd(front, ref))
            sp_vals.append(spread(front, ref))
        algorithms[name] = AlgorithmIndicators(
            algorithm=name, hv=np.array(hv_vals), igd=np.array(igd_vals),
            spread=np.array(sp_vals))
        counts.add(len(fronts))

    report = IndicatorReport(algorithms=algorithms,
                             n_runs=max(counts) if counts else 0, alpha=alpha)
    names = list(algorithms)
    if len(names) >= 2:
        for metric in ("hv", "igd", "spread"):
            groups = [getattr(algorithms[n], metric) for n in names]
            report.kruskal[metric] = kruskal_wallis(groups)
            for a, b in combinations(names, 2):
                report.pairwise[(metric, a, b)] = mann_whitney_u(
                    getattr(algorithms[a], metric),
                    getattr(algorithms[b], metric))
    return report


# ---------------------------------------------------------------------------
# front CSV exchange

FRONT_COLUMNS = ("t_sd", "t_ld", "f1", "f2")


def write_front_csv(path: str | Path, front: Front) -> None:
    """Write a front as UTF-8 CSV with header t_sd,t_ld,f1,f2 and LF line
    endings; missing decision vectors are written as empty cells."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(FRONT_COLUMNS)
        for k in range(len(front)):
            if front.x is not None:
                row = [repr(float(front.x[k, 0])), repr(float(front.x[k, 1]))]
            else:
                row = ["", ""]
            row += [repr(float(front.f[k, 0])), repr(float(front.f[k, 1]))]
            writer.writerow(row)


def read_front_csv(path: str | Path) -> Front:
    """Read a front written by :func:`write_front_csv`."""
    xs, fs = [], []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != FRONT_COLUMNS:
            raise IndicatorError(
                f"{path}: expected header {','.join(FRONT_COLUMNS)}")
        has_x = True
        for row in reader:
            if len(row) != 4:
                raise IndicatorError(f"{path}: malformed row {row!r}")
            if row[0] == "" or row[1] == "":
                has_x = False
            else:
                xs.append((float(row[0]), float(row[1])))
            fs.append((float(row[2]), float(row[3])))
    f = np.array(fs).reshape(-1, 2)
    x = np.array(xs).reshape(-1, 2) if has_x and xs else None
    return Front(f=f, x=x)
