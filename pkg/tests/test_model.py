"""Unit tests for the compartment model: defaults, validation, derivative
values, and conservation of the closed pandemic system."""

import dataclasses

import pytest
from hypothesis import given, strategies as st

from hedopt import defaults
from hedopt.model import (CompartmentState, EconomyParams, ModelError,
                          PandemicParams, gdp_derivative,
                          pandemic_derivatives, total_population)


def test_default_pandemic_params_match_experiment_table():
    p = defaults.default_pandemic_params()
    assert p.c_r == 10.0
    assert p.t_p == 0.1
    assert p.c_dp == 0.05
    assert p.p_qr == 0.0
    assert p.i_lr == pytest.approx(1.0 / 90.0)
    assert p.i_r == pytest.approx(1.0 / 7.0)
    assert p.d_r == pytest.approx(1.0 / 14.0)
    assert p.i_rr == pytest.approx(1.0 / 14.0)
    assert p.i_qrr == pytest.approx(1.0 / 14.0)


def test_default_economy_params_match_experiment_table():
    e = defaults.default_economy_params()
    assert e.b_g == 0.02
    assert e.p_i == 0.12
    assert e.s_qi == 0.4
    assert e.e_qi == 0.4
    assert e.i_i == 0.8


def test_default_initial_state():
    s = defaults.default_initial_state()
    assert s.s == 0.98
    assert s.e == 0.01
    assert s.i == 0.01
    assert s.s_q == s.e_q == s.i_q == s.r == 0.0
    assert s.gdp == 0.0
    assert total_population(s) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("field,value", [
    ("t_p", 1.5), ("t_p", -0.1), ("c_dp", 2.0),
    ("c_r", -1.0), ("i_r", -0.01), ("p_qer", -1.0),
])
def test_pandemic_param_validation_names_field(field, value):
    base = dataclasses.asdict(defaults.default_pandemic_params())
    base[field] = value
    with pytest.raises(ModelError, match=field):
        PandemicParams(**base)


def test_economy_param_validation():
    with pytest.raises(ModelError, match="i_qi"):
        EconomyParams(b_g=0.02, p_i=0.12, s_qi=0.4, e_qi=0.4, i_i=0.8,
                      i_qi=-0.5)


def test_negative_compartment_rejected():
    with pytest.raises(ModelError, match="s_q"):
        CompartmentState(s=0.9, s_q=-0.2, e=0.0, e_q=0.0, i=0.0, i_q=0.0,
                         r=0.0)


def test_derivatives_at_default_initial_state():
    # hand-computed flows at the default state and parameters:
    # contact terms 10*0.9*0.05*0.0098, 10*0.1*0.95*0.0098, 10*0.1*0.05*0.0098
    state = defaults.default_initial_state()
    p = defaults.default_pandemic_params()
    ds, ds_q, de, de_q, di, di_q, dr = pandemic_derivatives(state, p)
    assert ds == pytest.approx(-0.01421, abs=1e-12)
    assert ds_q == pytest.approx(0.00441, abs=1e-12)
    assert de == pytest.approx(0.00931 - 0.01 / 7.0, abs=1e-12)
    assert de_q == pytest.approx(0.00049, abs=1e-12)
    assert di == pytest.approx(0.0, abs=1e-15)  # incubation == diagnosis+recovery
    assert di_q == pytest.approx(0.01 / 14.0, abs=1e-12)
    assert dr == pytest.approx(0.01 / 14.0, abs=1e-12)


def test_gdp_derivative_at_default_initial_state():
    state = defaults.default_initial_state()
    e = defaults.default_economy_params()
    assert gdp_derivative(state, e) == pytest.approx(0.02 - 0.12 * 0.8 * 0.01,
                                                     abs=1e-15)


def test_gdp_without_pandemic_grows_at_baseline():
    state = CompartmentState(s=1.0, s_q=0.0, e=0.0, e_q=0.0, i=0.0, i_q=0.0,
                             r=0.0)
    e = defaults.default_economy_params()
    assert gdp_derivative(state, e) == pytest.approx(e.b_g)


compartments = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
rates = st.floats(min_value=0.0, max_value=20.0, allow_nan=False)
probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@given(
    s=compartments, s_q=compartments, e=compartments, e_q=compartments,
    i=compartments, i_q=compartments, r=compartments,
    c_r=rates, t_p=probs, c_dp=probs, p_qr=rates, p_qer=rates,
    i_lr=rates, i_r=rates, d_r=rates, i_rr=rates, i_qrr=rates,
)
def test_derivatives_sum_to_zero(s, s_q, e, e_q, i, i_q, r, c_r, t_p, c_dp,
                                 p_qr, p_qer, i_lr, i_r, d_r, i_rr, i_qrr):
    state = CompartmentState(s=s, s_q=s_q, e=e, e_q=e_q, i=i, i_q=i_q, r=r)
    params = PandemicParams(c_r=c_r, t_p=t_p, c_dp=c_dp, p_qr=p_qr,
                            p_qer=p_qer, i_lr=i_lr, i_r=i_r, d_r=d_r,
                            i_rr=i_rr, i_qrr=i_qrr)
    derivs = pandemic_derivatives(state, params)
    assert abs(sum(derivs)) <= 1e-9 * max(1.0, max(abs(d) for d in derivs))
