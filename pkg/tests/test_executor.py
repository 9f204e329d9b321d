"""Tests for program execution semantics."""

import pytest

from amocqa.boxmodel import Constants, InvalidParams, Params, default_params, run
from amocqa.dsl import parse
from amocqa.executor import Answer, changes_sign, execute, resolve, run_program


def test_resolve_empty_clause_list_gives_defaults():
    p = parse("FinalValue(four_box_model(),M_n)")
    assert resolve(p.run) == default_params()


def test_resolve_set_to_assigns():
    p = parse("FinalValue(four_box_model(SetTo(N,4000),SetTo(Fwn,5000)),M_n)")
    params = resolve(p.run)
    assert params == Params(N=4000, Fwn=5000.0)
    assert isinstance(params.N, int)


def test_resolve_increase_by_adds_to_default():
    # 4.5e4 + 2052, checked by hand
    p = parse("IncreaseOf(four_box_model(IncreaseBy(Fwn,2052)),M_n)")
    assert resolve(p.run).Fwn == 47052.0


def test_resolve_increase_by_epsilon():
    p = parse("IncreaseOf(four_box_model(IncreaseBy(epsilon,4.24e-6)),T_low)")
    assert resolve(p.run).epsilon == pytest.approx(1.2424e-4, rel=1e-12)


def test_resolve_rejects_invalid_resolved_value():
    p = parse("FinalValue(four_box_model(SetTo(epsilon,0)),M_n)")
    with pytest.raises(InvalidParams):
        resolve(p.run)


def test_final_value_is_last_series_element_exactly():
    p = parse("FinalValue(four_box_model(SetTo(Fwn,49243)),M_n)")
    answer = execute(p)
    out = run(Params(Fwn=49243.0))
    assert answer.kind == "number"
    assert answer.value == out.M_n[-1]
    assert answer.unit == "m³/s"


def test_change_sign_constant_series_is_false():
    p = parse("ChangeSign(four_box_model(),T_low)")
    answer = execute(p)
    assert answer.kind == "bool"
    assert answer.value is False


def test_change_sign_false_at_defaults():
    assert execute(parse("ChangeSign(four_box_model(),M_n)")).value is False


def test_change_sign_true_far_above_threshold():
    assert execute(parse("ChangeSign(four_box_model(SetTo(Fwn,450000)),M_n)")).value is True


def test_increase_of_freshwater_dilutes_north_box():
    p = parse("IncreaseOf(four_box_model(IncreaseBy(Fwn,720)),S_north)")
    assert execute(p).value is False


def test_increase_of_agrees_with_fine_step_oracle():
    coarse = run(Params(Fwn=45720.0))
    fine = run(Params(Fwn=45720.0, N=40000, dt=2.592e5))
    assert (coarse.S_north[-1] > coarse.S_north[0]) == (fine.S_north[-1] > fine.S_north[0])


def test_increase_of_true_for_strengthening_overturning():
    assert execute(parse("IncreaseOf(four_box_model(),M_n)")).value is True


def test_increase_of_true_for_south_box_salinity():
    assert execute(parse("IncreaseOf(four_box_model(),S_south)")).value is True


def test_increase_of_fixed_temperature_is_false():
    p = parse("IncreaseOf(four_box_model(IncreaseBy(epsilon,4.24e-6)),T_low)")
    assert execute(p).value is False


def test_execute_is_deterministic():
    p = parse("FinalValue(four_box_model(SetTo(Fwn,49243)),M_n)")
    assert execute(p) == execute(p)


def test_units_by_variable():
    assert execute(parse("FinalValue(four_box_model(),S_deep)")).unit == "psu"
    assert execute(parse("FinalValue(four_box_model(),T_low)")).unit == "°C"
    assert execute(parse("FinalValue(four_box_model(),D_low)")).unit == "m"


def test_boolean_answers_carry_no_unit():
    assert execute(parse("ChangeSign(four_box_model(),M_n)")).unit == ""


def test_answer_serialization_shape():
    d = execute(parse("ChangeSign(four_box_model(SetTo(Fwn,49483)),M_n)")).to_dict()
    assert set(d) == {"kind", "value", "unit"}
    assert d["kind"] == "bool"
    assert isinstance(d["value"], bool)


def test_run_program_returns_matching_run_output():
    p = parse("FinalValue(four_box_model(SetTo(N,100)),D_low)")
    answer, out = run_program(p)
    assert len(out.D_low) == 101
    assert answer.value == out.D_low[-1]


def test_warnings_propagate_from_clamped_run():
    c = Constants(K_GM=1e6, K_v=1e-9)
    p = parse("FinalValue(four_box_model(SetTo(M_ek,0),SetTo(D_low0,50),SetTo(N,200)),D_low)")
    answer = execute(p, constants=c)
    assert any("clamp" in w for w in answer.warnings)


def test_changes_sign_helper_edge_cases():
    assert changes_sign([0.0, 0.0, 0.0]) is False
    assert changes_sign([1.0, 0.0, 2.0]) is False
    assert changes_sign([1.0, -0.5]) is True
    assert changes_sign([-1.0, 0.5]) is True
    assert changes_sign([0.0, 0.5]) is True


def test_answer_is_value_type():
    a = Answer("number", 1.0, "m")
    assert a == Answer("number", 1.0, "m")
