from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qigw.closedform import (
    CorrelatorKey,
    gjv_hurwitz,
    hurwitz_oracle,
    k0_branch,
    labeling_conventions_fitting,
    main_formula_rhs,
    purely_quantum,
    witten_kontsevich,
)


@pytest.mark.parametrize("d,g,want", [
    ((0, 0, 0), 0, F(1)),
    ((2,), 1, F(1, 24)),
    ((0,), 1, F(-1, 24)),
])
def test_purely_quantum_spot_values(d, g, want):
    assert purely_quantum(d, g) == want


def test_purely_quantum_range_errors():
    with pytest.raises(ValueError):
        purely_quantum((0, 0), 0)
    with pytest.raises(ValueError):
        purely_quantum((-1,), 1)


@given(st.integers(0, 2), st.lists(st.integers(0, 5), min_size=1, max_size=3))
def test_purely_quantum_is_rhs_coefficient(g, d):
    if len(d) < 1 + 2 * (g == 0):
        return
    assert purely_quantum(d, g) == main_formula_rhs(len(d), g).coefficient(tuple(d))


@given(st.integers(0, 2), st.permutations([0, 1, 2, 3]))
def test_purely_quantum_symmetric(g, perm):
    d = (1, 2, 3, 4)
    assert purely_quantum(d, g) == purely_quantum(tuple(d[i] for i in perm), g)


@pytest.mark.parametrize("g,mu,want", [(0, (1, 1, 1), 6), (0, (1, 1), 1), (1, (2,), F(1, 2))])
def test_gjv_spot_values(g, mu, want):
    assert gjv_hurwitz(g, mu) == want


@pytest.mark.parametrize("g,mu,nu,want", [
    (0, (2,), (2,), F(1, 2)),
    (0, (2,), (1, 1), 1),
    (0, (3,), (1, 1, 1), 6),
])
def test_hurwitz_oracle_spot_values(g, mu, nu, want):
    assert hurwitz_oracle(g, mu, nu) == want


def test_hurwitz_oracle_errors():
    with pytest.raises(ValueError):
        hurwitz_oracle(0, (7,), (7,))
    with pytest.raises(ValueError):
        hurwitz_oracle(0, (3,), (1, 1))


def test_labeling_convention_is_both():
    assert "both" in labeling_conventions_fitting(5, 2)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_k0_branch_matches_string_partner(g):
    assert k0_branch(g) == purely_quantum((2 * g - 2,), g)


@pytest.mark.parametrize("d,g,want", [
    ((0, 0, 0), 0, F(1)),
    ((1,), 1, F(1, 24)),
    ((4,), 2, F(1, 1152)),
    ((2, 3), 2, F(29, 5760)),
    ((2, 2, 2), 2, F(7, 240)),
    ((7,), 3, F(1, 82944)),
    ((1, 1, 1, 1), 1, F(1, 4)),
])
def test_witten_kontsevich_values(d, g, want):
    assert witten_kontsevich(d, g) == want


def test_correlator_key():
    key = CorrelatorKey((0, 2), 1, 1)
    assert (key.g, key.n, key.k) == (2, 2, 0)
    assert key.parity_allowed == ((2 - 2 + 1 - 1) % 2 == 0)
    with pytest.raises(ValueError):
        CorrelatorKey((-1,), 0, 0)
