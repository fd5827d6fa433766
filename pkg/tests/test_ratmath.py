from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from leadsolve.ratmath import (
    RationalParseError,
    approx,
    dot,
    mat_vec,
    matrix,
    parse_rational,
    render,
    to_rational,
    transpose,
    vec_mat,
)


@pytest.mark.parametrize(
    "text, value",
    [("-2", F(-2)), ("28/3", F(28, 3)), ("3.5", F(7, 2)), ("0.1", F(1, 10)), ("−1", F(-1)), (" 4/6 ", F(2, 3)), (".5", F(1, 2))],
)
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1e3", "nan", "1/2/3", "--1"])
def test_parse_rejects(text):
    with pytest.raises(RationalParseError):
        parse_rational(text)


def test_floats_and_bools_rejected():
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        to_rational(True)


def test_render_canonical():
    assert render(F(4, 6)) == "2/3"
    assert render(F(-6, 3)) == "-2"
    assert render(F(295, 3)) == "295/3"
    assert approx(F(1, 3)) == 0.333333


@given(st.fractions(max_denominator=10**6))
def test_render_roundtrip(q):
    assert parse_rational(render(q)) == q


def test_ragged_matrix():
    with pytest.raises(ValueError):
        matrix([[1, 2], [3]])


def test_products():
    M = matrix([[1, 2], [3, 4]])
    assert mat_vec(M, (F(1), F(1))) == (3, 7)
    assert vec_mat((F(1), F(1)), M) == (4, 6)
    assert transpose(M) == ((1, 3), (2, 4))
    with pytest.raises(ValueError):
        dot((F(1),), (F(1), F(2)))
