from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qigw.series import (
    MultiPoly,
    TruncatedSeries,
    compose,
    compose_linear,
    s_series,
    varsigma,
)

V = ("x", "y")


def series_from(terms, cap, variables=V):
    return TruncatedSeries(variables, cap, {e: c for e, c in terms.items() if sum(e) <= cap})


coeffs = st.fractions(max_denominator=20, min_value=-5, max_value=5)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
random_series = st.dictionaries(exps, coeffs, max_size=6).map(lambda t: series_from(t, 4))


def test_varsigma_examples():
    assert varsigma("z", 5) == TruncatedSeries(("z",), 5, {(1,): F(1), (3,): F(1, 24), (5,): F(1, 1920)})
    assert varsigma("z", 1) == TruncatedSeries(("z",), 1, {(1,): F(1)})
    assert varsigma("z", 2).terms == {(1,): F(1)}


def test_s_series_examples():
    assert s_series("z", 4).terms == {(0,): 1, (2,): F(1, 24), (4,): F(1, 1920)}
    assert s_series("z", 0).terms == {(0,): 1}
    assert s_series("z", 2).reciprocal().terms == {(0,): 1, (2,): F(-1, 24)}


def test_compose_examples():
    s = varsigma("s", 6)
    two_z = TruncatedSeries(("z",), 6, {(1,): F(2)})
    assert compose(s, two_z).coefficient((3,)) == F(1, 3)
    ident = TruncatedSeries(("z",), 6, {(1,): F(1)})
    assert compose(s, ident).terms == varsigma("z", 6).terms
    z1z2 = TruncatedSeries(("z1", "z2"), 6, {(1, 1): F(1)})
    assert compose(s, z1z2).terms == {(1, 1): F(1), (3, 3): F(1, 24)}


def test_compose_rejects_constant_term():
    g = TruncatedSeries(("z",), 4, {(0,): F(1), (1,): F(1)})
    with pytest.raises(ValueError):
        compose(varsigma("s", 4), g)


def test_ring_examples():
    one_plus = TruncatedSeries(("z",), 2, {(0,): 1, (1,): 1})
    one_minus = TruncatedSeries(("z",), 2, {(0,): 1, (1,): -1})
    assert (one_plus * one_minus).terms == {(0,): 1, (2,): -1}
    assert one_plus.reciprocal().terms == {(0,): 1, (1,): -1, (2,): 1}
    sq = varsigma("z", 6) * varsigma("z", 6)
    assert sq.coefficient((4,)) == F(1, 12)


def test_reciprocal_rejects_zero_constant():
    with pytest.raises((ZeroDivisionError, ValueError, ArithmeticError)):
        varsigma("z", 4).reciprocal()


@given(random_series, random_series, random_series)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(random_series)
def test_truncation_never_reports_beyond_cap(a):
    p = a * a
    assert all(sum(e) <= p.cap for e in p.terms)
    assert all(c != 0 for c in p.terms.values())


@pytest.mark.parametrize("cap", [1, 3, 6, 9])
def test_varsigma_is_odd(cap):
    v = ("z",)
    minus = compose(varsigma("s", cap), TruncatedSeries(v, cap, {(1,): F(-1)}))
    assert varsigma("z", cap) * minus == -(varsigma("z", cap) * varsigma("z", cap))


@pytest.mark.parametrize("cap", [0, 2, 5, 10])
def test_s_times_reciprocal(cap):
    S = s_series("z", cap)
    assert (S * S.reciprocal()).terms == {(0,): 1}


def test_compose_linear_matches_compose():
    vs = ("z", "w")
    direct = compose_linear("varsigma", {"z": 2, "w": -1}, vs, 5)
    arg = TruncatedSeries(vs, 5, {(1, 0): F(2), (0, 1): F(-1)})
    assert direct == compose(varsigma("s", 5), arg)


def test_divide_linear_is_exact_inverse():
    vs = ("z", "w")
    f = TruncatedSeries(vs, 5, {(0, 0): F(1), (2, 1): F(3, 7), (1, 0): F(-2)})
    lin = TruncatedSeries(vs, 6, {(1, 0): F(1), (0, 1): F(1)})
    prod = f * lin
    assert prod.divide_linear({"z": 1, "w": 1}).agrees_with(f, 4)


def test_multipoly_evaluate_and_degree():
    p = MultiPoly(V, {(2, 1): F(3), (0, 0): F(-1)})
    assert p.total_degree() == 3
    assert p.evaluate({"x": 2, "y": 5}) == 59


def test_mismatched_variables_rejected():
    a = TruncatedSeries(("z",), 2, {(1,): 1})
    b = TruncatedSeries(("w",), 2, {(1,): 1})
    with pytest.raises(ValueError):
        a + b
