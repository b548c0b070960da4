"""Combined pandemic-economy compartment model.

Seven pandemic compartments (susceptible, susceptible quarantined, exposed,
exposed quarantined, infectious, infectious quarantined, recovered) plus a
relative GDP index. The pandemic dynamics form a closed system: every flow
term appears once with a plus and once with a minus sign, so the total
population is conserved. The GDP reads the pandemic state but never feeds
back into it.
"""

from __future__ import annotations

from dataclasses import dataclass


class ModelError(ValueError):
    """Raised when a state or parameter set violates its invariants."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ModelError(msg)


@dataclass(frozen=True)
class CompartmentState:
    """Population fractions at one instant, plus the relative GDP index."""

    s: float
    s_q: float
    e: float
    e_q: float
    i: float
    i_q: float
    r: float
    gdp: float = 0.0

    # slack matches the integration tolerance: compartments may round a hair
    # below zero during stepping before being clamped
    _TOL = 1e-9

    def __post_init__(self) -> None:
        for name in ("s", "s_q", "e", "e_q", "i", "i_q", "r"):
            _require(getattr(self, name) >= -self._TOL,
                     f"compartment {name} must be >= 0, got {getattr(self, name)}")

    def pandemic_fields(self) -> tuple[float, float, float, float, float, float, float]:
        return (self.s, self.s_q, self.e, self.e_q, self.i, self.i_q, self.r)


@dataclass(frozen=True)
class PandemicParams:
    """The ten rate/probability parameters of the pandemic dynamics."""

    c_r: float     # contact rate, contacts per person per time unit
    t_p: float     # transmission probability
    c_dp: float    # contact detection probability
    p_qr: float    # preventive quarantine rate
    p_qer: float   # preventive quarantine end rate
    i_lr: float    # immunity loss rate
    i_r: float     # incubation rate
    d_r: float     # diagnosis rate
    i_rr: float    # infected recovery rate
    i_qrr: float   # infected quarantined recovery rate

    def __post_init__(self) -> None:
        _require(0.0 <= self.t_p <= 1.0, f"t_p must be in [0,1], got {self.t_p}")
        _require(0.0 <= self.c_dp <= 1.0, f"c_dp must be in [0,1], got {self.c_dp}")
        for name in ("c_r", "p_qr", "p_qer", "i_lr", "i_r", "d_r", "i_rr", "i_qrr"):
            _require(getattr(self, name) >= 0.0,
                     f"rate {name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class EconomyParams:
    """GDP growth and the per-compartment economic impact weights."""

    b_g: float    # baseline GDP growth per time unit
    p_i: float    # overall pandemic-influence scaling factor
    s_qi: float   # susceptible quarantined impact
    e_qi: float   # exposed quarantined impact
    i_i: float    # infected impact
    i_qi: float   # infected quarantined impact

    def __post_init__(self) -> None:
        for name in ("p_i", "s_qi", "e_qi", "i_i", "i_qi"):
            _require(getattr(self, name) >= 0.0,
                     f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class ModelParams:
    pandemic: PandemicParams
    economy: EconomyParams


def pandemic_derivatives(
    state: CompartmentState, p: PandemicParams
) -> tuple[float, float, float, float, float, float, float]:
    """Time derivatives (S', Sq', E', Eq', I', Iq', R') of the closed system.

    The seven values sum to zero algebraically: every flow below is added to
    exactly one compartment and subtracted from exactly one other.
    """
    s, s_q, e, e_q, i, i_q, r = state.pandemic_fields()

    contact_quarantine = p.c_r * (1.0 - p.t_p) * p.c_dp * i * s   # S -> Sq
    contact_exposed = p.c_r * p.t_p * (1.0 - p.c_dp) * i * s      # S -> E
    contact_exposed_q = p.c_r * p.t_p * p.c_dp * i * s            # S -> Eq
    preventive_s = p.p_qr * s                                     # S -> Sq
    preventive_e = p.p_qr * e                                     # E -> Eq
    quarantine_end_s = p.p_qer * s_q                              # Sq -> S
    quarantine_end_e = p.p_qer * e_q                              # Eq -> E
    incubation = p.i_r * e                                        # E -> I
    incubation_q = p.i_r * e_q                                    # Eq -> Iq
    diagnosis = p.d_r * i                                         # I -> Iq
    recovery = p.i_rr * i                                         # I -> R
    recovery_q = p.i_qrr * i_q                                    # Iq -> R
    immunity_loss = p.i_lr * r                                    # R -> S

    ds = (-contact_quarantine - contact_exposed - contact_exposed_q
          - preventive_s + quarantine_end_s + immunity_loss)
    ds_q = contact_quarantine + preventive_s - quarantine_end_s
    de = contact_exposed + quarantine_end_e - preventive_e - incubation
    de_q = contact_exposed_q + preventive_e - quarantine_end_e - incubation_q
    di = incubation - diagnosis - recovery
    di_q = incubation_q + diagnosis - recovery_q
    dr = recovery + recovery_q - immunity_loss
    return (ds, ds_q, de, de_q, di, di_q, dr)


def gdp_derivative(state: CompartmentState, e: EconomyParams) -> float:
    """GDP rate: baseline growth minus the scaled economic load of the
    quarantined and infected sub-populations."""
    load = (e.s_qi * state.s_q + e.e_qi * state.e_q
            + e.i_i * state.i + e.i_qi * state.i_q)
    return e.b_g - e.p_i * load


def total_population(state: CompartmentState) -> float:
    return sum(state.pandemic_fields())
