from fractions import Fraction as F
from itertools import permutations

from hypothesis import given, strategies as st

from qigw.interp import interpolate_grid, interpolate_simplex, lagrange_basis, simplex_held_out
from qigw.series import MultiPoly

V = ("a1", "a2", "a3")
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def poly_strategy(k, degree):
    exps = st.tuples(*[st.integers(0, degree)] * k).filter(lambda e: sum(e) <= degree)
    return st.dictionaries(exps, coeffs, max_size=6).map(
        lambda t: MultiPoly(V[:k], {e: c for e, c in t.items() if c}))


def as_function(p):
    return lambda t: p.evaluate(dict(zip(p.variables, t)))


def test_lagrange_basis_is_dual():
    nodes = [1, 2, 4, 7]
    for i, coefs in enumerate(lagrange_basis(nodes)):
        for j, x in enumerate(nodes):
            assert sum(c * x ** m for m, c in enumerate(coefs)) == (1 if i == j else 0)


@given(st.integers(1, 3).flatmap(lambda k: poly_strategy(k, 4)))
def test_simplex_recovers_total_degree_polys(p):
    k = len(p.variables)
    assert interpolate_simplex(as_function(p), k, 4, p.variables) == p


@given(poly_strategy(2, 3))
def test_grid_recovers_polys(p):
    assert interpolate_grid(as_function(p), [1, 2, 3, 4], 2, p.variables) == p


@given(poly_strategy(3, 3))
def test_symmetric_fit_matches_symmetrization(p):
    sym = None
    for perm in permutations(range(3)):
        q = MultiPoly(V, {tuple(e[i] for i in perm): c for e, c in p.terms.items()})
        sym = q if sym is None else sym + q
    assert interpolate_simplex(as_function(sym), 3, 3, V, symmetric=True) == sym


def test_held_out_points_outside_fit_set():
    for k in (1, 2, 3):
        for pt in simplex_held_out(k, 4):
            assert sum(x - 1 for x in pt) == 5


def test_held_out_detects_degree_overflow():
    p = MultiPoly(("a1", "a2"), {(5, 0): F(1), (0, 5): F(1)})
    fitted = interpolate_simplex(as_function(p), 2, 4, p.variables)
    assert any(fitted.evaluate(dict(zip(p.variables, h))) != as_function(p)(h) for h in simplex_held_out(2, 4))
