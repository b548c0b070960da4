"""Fixed-step RK4 integration of the policy-modulated system and the two
optimization objectives (peak infected+exposed fraction, negated GDP
minimum), both taken over the stored time grid."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _engine, defaults
from .model import CompartmentState, ModelParams
from .policy import PolicySpec, build_influence_curve, lockdown, social_distancing


class IntegrationError(RuntimeError):
    """Raised when the integrator encounters a non-finite state."""


class DomainError(ValueError):
    """Raised for out-of-bounds trigger times."""


@dataclass(frozen=True)
class Scenario:
    initial: CompartmentState
    params: ModelParams
    policies: tuple[PolicySpec, ...] = ()
    t_max: float = defaults.DEFAULT_T_MAX
    dt: float = defaults.DEFAULT_DT

    def __post_init__(self) -> None:
        if self.t_max <= 0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if not 0 < self.dt <= self.t_max:
            raise ValueError(f"dt must be in (0, t_max], got {self.dt}")


def default_scenario(policies: tuple[PolicySpec, ...] = (), *,
                     dt: float = defaults.DEFAULT_DT,
                     t_max: float = defaults.DEFAULT_T_MAX) -> Scenario:
    return Scenario(initial=defaults.default_initial_state(),
                    params=defaults.default_model_params(),
                    policies=policies, t_max=t_max, dt=dt)


@dataclass(frozen=True)
class Trajectory:
    """States on the grid 0, dt, ..., t_max; column layout as in _engine."""

    times: np.ndarray
    states: np.ndarray

    def state_at(self, index: int) -> CompartmentState:
        row = self.states[index]
        return CompartmentState(s=row[0], s_q=row[1], e=row[2], e_q=row[3],
                                i=row[4], i_q=row[5], r=row[6], gdp=row[7])

    @property
    def infected_exposed(self) -> np.ndarray:
        return self.states[:, 2:6].sum(axis=1)

    @property
    def gdp(self) -> np.ndarray:
        return self.states[:, 7]


@dataclass(frozen=True)
class ObjectiveVector:
    f1: float  # peak simultaneous infected + exposed fraction
    f2: float  # negated GDP minimum

    def as_tuple(self) -> tuple[float, float]:
        return (self.f1, self.f2)


def _pack_params(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    p = params.pandemic
    e = params.economy
    pand = np.array([p.c_r, p.t_p, p.c_dp, p.p_qr, p.p_qer,
                     p.i_lr, p.i_r, p.d_r, p.i_rr, p.i_qrr])
    econ = np.array([e.b_g, e.p_i, e.s_qi, e.e_qi, e.i_i, e.i_qi])
    return pand, econ


def _pack_state(state: CompartmentState) -> np.ndarray:
    return np.array([state.s, state.s_q, state.e, state.e_q,
                     state.i, state.i_q, state.r, state.gdp])


def _pack_policies(policies) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    n = len(policies)
    targets = np.empty(n, dtype=np.int64)
    triggers = np.empty(n)
    m = 0
    curves = []
    for spec in policies:
        curve = build_influence_curve(spec)
        curves.append(curve)
        m = max(m, curve.xs.shape[0])
    xs = np.zeros((n, max(m, 2)))
    ys = np.zeros((n, max(m, 2)))
    for k, (spec, curve) in enumerate(zip(policies, curves)):
        targets[k] = _engine.PARAM_INDEX[spec.target]
        triggers[k] = spec.trigger_time
        xs[k, :curve.xs.shape[0]] = curve.xs
        ys[k, :curve.ys.shape[0]] = curve.ys
        # pad with the final point so interpolation past it stays at zero
        xs[k, curve.xs.shape[0]:] = curve.xs[-1]
    return targets, triggers, xs, ys


def _grid(t_max: float, dt: float) -> tuple[int, np.ndarray]:
    n_steps = int(round(t_max / dt))
    times = np.arange(n_steps + 1) * dt
    return n_steps, times


def integrate(scenario: Scenario) -> Trajectory:
    """Classical RK4 with fixed step; policy influences are evaluated at the
    exact stage times. Pandemic compartments are clamped to >= 0 after each
    step; no conservation renormalization is applied."""
    y0 = _pack_state(scenario.initial)
    pand, econ = _pack_params(scenario.params)
    targets, triggers, xs, ys = _pack_policies(scenario.policies)
    n_steps, times = _grid(scenario.t_max, scenario.dt)
    states, fail = _engine._rk4_trajectory(y0, pand, econ, targets, triggers,
                                           xs, ys, scenario.dt, n_steps)
    if fail >= 0:
        raise IntegrationError(
            f"non-finite state at t = {fail * scenario.dt:.6g}")
    return Trajectory(times=times, states=states)


def objectives(trajectory: Trajectory) -> ObjectiveVector:
    if trajectory.states.shape[0] == 0:
        raise ValueError("empty trajectory")
    f1 = float(trajectory.infected_exposed.max())
    f2 = -float(trajectory.gdp.min())
    return ObjectiveVector(f1=f1, f2=f2)


class TriggerEvaluator:
    """Deterministic objective evaluation of (t_sd, t_ld) trigger pairs.

    Instantiates the two fixed-shape policies at the given triggers on top
    of a base scenario and integrates. Precomputes everything that does not
    depend on the triggers.
    """

    def __init__(self, base: Scenario | None = None,
                 bounds: tuple[float, float] = defaults.DEFAULT_BOUNDS,
                 shapes: tuple[PolicySpec, ...] | None = None):
        if base is None:
            base = default_scenario()
        self.base = base
        self.bounds = bounds
        self._y0 = _pack_state(base.initial)
        self._pand, self._econ = _pack_params(base.params)
        self._n_steps, _ = _grid(base.t_max, base.dt)
        if shapes is None:
            shapes = (social_distancing(0.0), lockdown(0.0))
        if len(shapes) != 2:
            raise ValueError("shapes must hold exactly two policy specs")
        self.shapes = shapes
        self._targets, _, self._xs, self._ys = _pack_policies(shapes)

    def __call__(self, t_sd: float, t_ld: float) -> ObjectiveVector:
        lo, hi = self.bounds
        if not (lo <= t_sd <= hi and lo <= t_ld <= hi):
            raise DomainError(
                f"triggers ({t_sd}, {t_ld}) outside bounds [{lo}, {hi}]")
        triggers = np.array([t_sd, t_ld])
        f1, f2, fail = _engine._rk4_objectives(
            self._y0, self._pand, self._econ, self._targets, triggers,
            self._xs, self._ys, self.base.dt, self._n_steps)
        if fail >= 0:
            raise IntegrationError(
                f"non-finite state at t = {fail * self.base.dt:.6g}")
        return ObjectiveVector(f1=f1, f2=f2)


def evaluate_triggers(t_sd: float, t_ld: float,
                      base: Scenario | None = None) -> ObjectiveVector:
    return TriggerEvaluator(base)(t_sd, t_ld)


def triggered_scenario(t_sd: float, t_ld: float,
                       base: Scenario | None = None) -> Scenario:
    """The base scenario with both fixed-shape policies instantiated."""
    if base is None:
        base = default_scenario()
    return replace(base, policies=(social_distancing(t_sd), lockdown(t_ld)))
