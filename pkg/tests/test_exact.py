from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qigw.exact import GaussianRational, I, format_number, ipow, parse_number, parse_rational

rationals = st.fractions(max_denominator=1000)
gaussians = st.builds(GaussianRational, rationals, rationals)


@given(rationals, rationals)
def test_fraction_canonical_form(a, b):
    # equal values compare and hash equally regardless of how they were built
    x = Fraction(a.numerator * 7, a.denominator * 7)
    assert x == a and hash(x) == hash(a)
    assert (a + b).denominator > 0


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1


@given(gaussians)
def test_format_parse_round_trip(x):
    assert parse_number(format_number(x)) == x


@pytest.mark.parametrize("text,value", [
    ("1/2", Fraction(1, 2)),
    ("-3", Fraction(-3)),
    ("i", I),
    ("-i", -I),
    ("2i", GaussianRational(0, 2)),
    ("1/2-1/3*i", GaussianRational(Fraction(1, 2), Fraction(-1, 3))),
    ("-1/24*i", GaussianRational(0, Fraction(-1, 24))),
])
def test_parse_number(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1//2", "3*j"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_number(bad)


def test_parse_rational_rejects_complex():
    with pytest.raises(ValueError):
        parse_rational("i")


@given(st.integers(-20, 20))
def test_ipow_is_a_power(n):
    assert ipow(n) * ipow(-n) == 1
    assert ipow(n + 1) == ipow(n) * I


def test_real_value_rejects_imaginary():
    with pytest.raises(ValueError):
        I.real_value()
    assert GaussianRational(3).real_value() == 3
