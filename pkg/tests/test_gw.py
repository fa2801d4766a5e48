from fractions import Fraction as F
from itertools import combinations_with_replacement

import pytest

from qigw.gw import (
    InterpolationError,
    closed_multilinear_coef,
    connected_series,
    disconnected_series,
    grid_multilinear,
    interpolate_P,
    q_function,
    reassemble_disconnected,
)
from qigw.series import TruncatedSeries, compose_linear, s_series
from qigw.wedge import ShiftedSeries


def inverse_varsigma_laurent(cap):
    return ShiftedSeries(s_series("z1", cap + 1).reciprocal(), (1,))


def test_disconnected_degree_one():
    cap = 6
    got = disconnected_series(1, (1,), 1, cap).series
    want = inverse_varsigma_laurent(cap) + ShiftedSeries.from_series(compose_linear("varsigma", {"z1": 1}, ("z1",), cap))
    assert got.coefficients() == want.truncate(cap).coefficients()


def test_connected_degree_one_is_varsigma():
    s = connected_series(1, (1,), 1, 6).series
    assert s.coefficients() == compose_linear("varsigma", {"z1": 1}, ("z1",), 6).terms
    assert s.coefficient((1,)) == 1 and s.coefficient((3,)) == F(1, 24)


@pytest.mark.parametrize("a", [1, 2, 3, 4])
def test_connected_single_part(a):
    cap = 6
    sa = compose_linear("varsigma", {"z1": a}, ("z1",), cap + 1)
    num = sa * sa * s_series("z1", cap + 1).reciprocal()
    want = ShiftedSeries(num, (1,)).truncate(cap).coefficients()
    got = connected_series(a, (a,), 1, cap).series.coefficients()
    assert got == {e: c / (a * a) for e, c in want.items()}


def test_connected_base_case():
    assert connected_series(5, (5,), 0, 3).series.numerator.constant_term() == F(1, 5)
    assert connected_series(3, (1, 2), 0, 3).series.numerator.constant_term() == 0


def test_profile_sum_mismatch():
    with pytest.raises(ValueError):
        disconnected_series(3, (1, 1), 1, 4)


def test_zero_cap_is_empty():
    assert connected_series(2, (1, 1), 2, 0).series.coefficients() == {}


@pytest.mark.parametrize("A,n", [(1, 1), (2, 2), (3, 2), (4, 1), (3, 3)])
def test_mobius_round_trip(A, n):
    from qigw.partitions import partitions

    cap = 6
    for a in partitions(A):
        if len(a) > 3:
            continue
        got = reassemble_disconnected(A, a, n, cap).coefficients()
        want = disconnected_series(A, a, n, cap).series.coefficients()
        assert got == want


def test_q_function_examples():
    one = q_function((1,), ("z",), 6)
    assert one.terms == {(0,): 1}
    q3 = q_function((3,), ("z",), 6)
    want = compose_linear("varsigma", {"z": 3}, ("z",), 7).divide_linear({"z": 1}) * s_series("z", 6).reciprocal()
    assert q3.agrees_with(want, 5)


def test_closed_connected_examples():
    c2 = closed_multilinear_coef(1, 2, 6, True)
    assert c2.coefficient((1, 1)) == 1
    assert not closed_multilinear_coef(1, 1, 6, True).coefficients()
    assert not closed_multilinear_coef(1, 1, 6, False).coefficients()


@pytest.mark.parametrize("n,k", [(1, 2), (2, 1), (2, 2), (3, 1)])
@pytest.mark.parametrize("connected", [True, False])
def test_grid_matches_closed_form(n, k, connected):
    grid, checked = grid_multilinear(n, k, 6, connected)
    closed = {e: c for e, c in closed_multilinear_coef(k, n, 6, connected).coefficients().items() if c}
    assert grid == closed
    assert all(v >= 1 for v in checked.values())


def test_interpolate_P_examples():
    assert interpolate_P(0, (0, 0), 1).terms == {(1,): 1}
    p = interpolate_P(0, (0,), 1)
    assert all(e[0] % 2 == 0 for e in p.terms) and p.coefficient((1,)) == 0


@pytest.mark.parametrize("g,d,k", [(1, (1, 2), 2), (1, (0, 0, 1), 1), (2, (3,), 1)])
def test_interpolate_P_grids_agree(g, d, k):
    assert interpolate_P(g, d, k, grid="tensor") == interpolate_P(g, d, k, grid="simplex")


def test_dimension_constraint_vanishing():
    assert not interpolate_P(1, (1, 1), 2).terms
    s = connected_series(2, (1, 1), 1, 6).series.coefficients()
    # genus g needs sum d = 2g - 2 + 1 + 2, so only odd d survive for one insertion
    assert all((e[0] - 1) % 2 == 1 for e in s)


def test_interpolate_P_rejects_small_cap():
    with pytest.raises(ValueError):
        interpolate_P(1, (1, 2), 2, cap=2)
