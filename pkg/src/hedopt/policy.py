"""Time-dependent control policies as scaled Bezier influence curves.

A policy adds a time-varying offset to a single pandemic parameter. Its
shape is a degree-5 Bezier curve over the control polygon

    (0, 0), (buildup, 0), (buildup, 1), (buildup+peak, 1),
    (buildup+peak, 0), (buildup+peak+fade, 0)

rescaled in height so the curve's extremum equals the policy amplitude.
Social distancing lowers the contact rate (amplitude -5); lockdown raises
the preventive quarantine rate (amplitude +1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import PandemicParams

# number of uniform samples in the curve parameter; bounds the linear
# interpolation error far below model tolerances
CURVE_SAMPLES = 2048

# pandemic parameters that a policy may target, and which of them are
# probabilities (clamped to [0,1] instead of just >= 0)
TARGETABLE_PARAMS = ("c_r", "t_p", "c_dp", "p_qr", "p_qer",
                     "i_lr", "i_r", "d_r", "i_rr", "i_qrr")
PROBABILITY_PARAMS = frozenset({"t_p", "c_dp"})


class PolicyError(ValueError):
    """Raised for invalid policy specifications or targets."""


@dataclass(frozen=True)
class PolicySpec:
    """Five shape variables of one control policy."""

    target: str
    amplitude: float
    trigger_time: float
    buildup: float
    peak: float
    fade: float

    def __post_init__(self) -> None:
        if self.target not in TARGETABLE_PARAMS:
            raise PolicyError(f"unknown target parameter {self.target!r}")
        if self.trigger_time < 0:
            raise PolicyError(f"trigger_time must be >= 0, got {self.trigger_time}")
        for name in ("buildup", "peak", "fade"):
            if getattr(self, name) < 0:
                raise PolicyError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.buildup + self.peak + self.fade <= 0:
            raise PolicyError("total policy duration must be > 0")

    @property
    def duration(self) -> float:
        return self.buildup + self.peak + self.fade


def social_distancing(trigger_time: float) -> PolicySpec:
    """Fixed-shape social distancing policy (targets the contact rate)."""
    return PolicySpec(target="c_r", amplitude=-5.0, trigger_time=trigger_time,
                      buildup=5.0, peak=40.0, fade=400.0)


def lockdown(trigger_time: float) -> PolicySpec:
    """Fixed-shape lockdown policy (targets the preventive quarantine rate)."""
    return PolicySpec(target="p_qr", amplitude=1.0, trigger_time=trigger_time,
                      buildup=5.0, peak=10.0, fade=40.0)


def control_polygon(buildup: float, peak: float, fade: float) -> list[tuple[float, float]]:
    """The six control points of the unscaled influence curve."""
    return [
        (0.0, 0.0),
        (buildup, 0.0),
        (buildup, 1.0),
        (buildup + peak, 1.0),
        (buildup + peak, 0.0),
        (buildup + peak + fade, 0.0),
    ]


def bezier_point(control_points, u: float) -> tuple[float, float]:
    """Evaluate the degree-5 Bernstein combination of six control points."""
    if len(control_points) != 6:
        raise PolicyError(f"expected six control points, got {len(control_points)}")
    if not 0.0 <= u <= 1.0:
        raise PolicyError(f"curve parameter must be in [0,1], got {u}")
    x = 0.0
    y = 0.0
    for k, (px, py) in enumerate(control_points):
        w = math.comb(5, k) * u**k * (1.0 - u) ** (5 - k)
        x += w * px
        y += w * py
    return (x, y)


@dataclass(frozen=True)
class InfluenceCurve:
    """Precomputed, amplitude-scaled influence lookup for one policy.

    ``xs`` are relative times (non-decreasing, spanning [0, duration]),
    ``ys`` the scaled influence values. Both endpoints carry influence 0.
    """

    xs: np.ndarray
    ys: np.ndarray
    scale: float
    duration: float

    def __eq__(self, other) -> bool:  # arrays make the default eq unusable
        return self is other


def build_influence_curve(spec: PolicySpec, samples: int = CURVE_SAMPLES) -> InfluenceCurve:
    """Sample the Bezier shape and rescale it so the extremum equals the
    policy amplitude exactly (attained at >= 1 sampled point)."""
    points = control_polygon(spec.buildup, spec.peak, spec.fade)
    u = np.linspace(0.0, 1.0, samples)
    px = np.array([p[0] for p in points])
    py = np.array([p[1] for p in points])
    weights = np.stack([
        math.comb(5, k) * u**k * (1.0 - u) ** (5 - k) for k in range(6)
    ])
    xs = weights.T @ px
    ys_unscaled = weights.T @ py
    max_y = float(ys_unscaled.max())
    if max_y <= 0.0:
        raise PolicyError("unscaled curve has no positive peak; cannot scale")
    scale = spec.amplitude / max_y
    return InfluenceCurve(xs=xs, ys=ys_unscaled * scale, scale=scale,
                          duration=spec.duration)


def influence_at(curve: InfluenceCurve, t: float, trigger: float) -> float:
    """Influence value at absolute time ``t`` for a policy triggered at
    ``trigger``; zero outside the policy's active window."""
    rel = t - trigger
    if rel < 0.0 or rel > curve.duration:
        return 0.0
    return float(np.interp(rel, curve.xs, curve.ys))


def effective_params(
    base: PandemicParams,
    policies,
    t: float,
) -> PandemicParams:
    """Base parameters plus the summed influences of all active policies,
    clamped to the physical domain of each parameter.

    ``policies`` is a sequence of (PolicySpec, InfluenceCurve) pairs.
    """
    offsets: dict[str, float] = {}
    for spec, curve in policies:
        offsets[spec.target] = offsets.get(spec.target, 0.0) + influence_at(
            curve, t, spec.trigger_time)
    if not offsets:
        return base
    updates = {}
    for name, delta in offsets.items():
        value = getattr(base, name) + delta
        value = max(value, 0.0)
        if name in PROBABILITY_PARAMS:
            value = min(value, 1.0)
        updates[name] = value
    return replace(base, **updates)
