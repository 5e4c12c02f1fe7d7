from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from merw.params import (
    DEFAULT_DESIGNATED,
    ModelParams,
    ParameterError,
    StepDirection,
    parse_probability,
)


def test_rational_string_inputs_are_exact():
    params = ModelParams(1, "3/4", "0.7")
    assert params.p == 0.75
    assert params.p_exact == Fraction(3, 4)
    assert params.q_exact == Fraction(7, 10)


def test_fraction_inputs_are_exact():
    params = ModelParams(2, Fraction(5, 8))
    assert params.p_exact == Fraction(5, 8)
    assert params.p == 0.625


def test_float_inputs_have_no_exact_form():
    params = ModelParams(2, 0.625, 0.5)
    assert params.p_exact is None
    assert params.p_as_fraction() == Fraction(5, 8)  # 0.625 is dyadic


@pytest.mark.parametrize("bad_p", [0.0, 1.0, -0.5, 1.5, "1", "0", "2/2"])
def test_p_range_is_open(bad_p):
    with pytest.raises(ParameterError, match="p must lie"):
        ModelParams(1, bad_p)


@pytest.mark.parametrize("bad_q", [0.0, 1.0, "5/4"])
def test_q_range_is_open(bad_q):
    with pytest.raises(ParameterError, match="q must lie"):
        ModelParams(1, 0.5, bad_q)


@pytest.mark.parametrize("bad_d", [0, -1, 1.5, "2", True])
def test_dimension_must_be_positive_integer(bad_d):
    with pytest.raises(ParameterError):
        ModelParams(bad_d, 0.5)


def test_unparseable_probability():
    with pytest.raises(ParameterError, match="cannot parse"):
        ModelParams(1, "three quarters")


def test_parse_probability_decimal_string_is_exact():
    value, exact = parse_probability("0.7")
    assert exact == Fraction(7, 10)
    assert value == 0.7


def test_default_q_is_half():
    assert ModelParams(3, 0.2).q == 0.5


@given(st.integers(min_value=1, max_value=8))
def test_colour_index_is_a_bijection(d):
    directions = StepDirection.all_directions(d)
    assert len(directions) == 2 * d
    colours = [s.colour for s in directions]
    assert sorted(colours) == list(range(2 * d))
    for direction in directions:
        assert StepDirection.from_colour(direction.colour) == direction


def test_colour_pairing_convention():
    # colour 2k is +e_{k+1}, colour 2k+1 is -e_{k+1}
    assert StepDirection.from_colour(0) == StepDirection(axis=0, sign=1)
    assert StepDirection.from_colour(1) == StepDirection(axis=0, sign=-1)
    assert StepDirection.from_colour(4) == StepDirection(axis=2, sign=1)
    assert DEFAULT_DESIGNATED.colour == 0


def test_step_direction_validation():
    with pytest.raises(ParameterError):
        StepDirection(axis=0, sign=0)
    with pytest.raises(ParameterError):
        StepDirection(axis=-1, sign=1)


@given(st.integers(min_value=1, max_value=1000))
def test_critical_memory_lies_in_half_to_three_quarters(d):
    from merw.theory import critical_memory

    p_c = critical_memory(d)
    assert Fraction(1, 2) < p_c <= Fraction(3, 4)
