from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qigw.exact import GaussianRational, parse_number
from qigw.quantization.diffpoly import DiffPoly, hamiltonian_density
from qigw.quantization.pspace import (
    WindowError,
    WindowedPElement,
    commutator,
    commutator_coefficient,
    moyal_star,
    phi,
    phi0_tilde,
    tilde_star,
)

M = 3
I = GaussianRational(0, 1)
u = DiffPoly.u


def test_phi_examples():
    assert phi(u(0), 1).terms == {(0, 0, (-1,)): 1, (0, 0, (0,)): 1, (0, 0, (1,)): 1}
    assert phi(u(1), 1).terms == {(0, 0, (-1,)): -I, (0, 0, (1,)): I}


def test_phi0_tilde_of_square():
    got = phi0_tilde(u(0) ** 2 * F(1, 2), 2).terms
    # p_a p_-a / 2 summed over a in [-2, 2]: the unordered pairs (a, -a) with a != 0 appear twice
    assert got == {(0, 0, (-2, 2)): 1, (0, 0, (-1, 1)): 1, (0, 0, (0, 0)): F(1, 2)}


def test_heisenberg(golden):
    for a, b, want in golden["heisenberg"]["pairs"]:
        w = max(abs(a), abs(b))
        c = commutator(WindowedPElement.p(a, w), WindowedPElement.p(b, w))
        want = parse_number(want)
        assert c.terms == ({(1, 0, ()): want} if want else {})


def elements(window=M):
    idx = st.integers(-window, window)
    mono = st.tuples(st.lists(idx, min_size=1, max_size=3).map(lambda x: tuple(sorted(x))),
                     st.fractions(min_value=-4, max_value=4, max_denominator=5))
    return st.lists(mono, min_size=1, max_size=4).map(
        lambda ms: WindowedPElement(window, {(0, 0, e): c for e, c in ms if c}))


def d_dp(f, a):
    out = {}
    for (h, e, idx), c in f.terms.items():
        n = idx.count(a)
        if n:
            rest = list(idx)
            rest.remove(a)
            key = (h, e, tuple(rest))
            out[key] = out.get(key, 0) + n * c
    return WindowedPElement(f.window, out)


def poisson(f, h):
    total = WindowedPElement(f.window, {})
    for a in range(-f.window, f.window + 1):
        if a:
            total = total + (d_dp(f, a) * d_dp(h, -a)).scale(I * a)
    return total


@given(elements())
def test_unit(f):
    one = WindowedPElement.one(M)
    assert moyal_star(f, one) == f
    assert moyal_star(one, f) == f
    assert not tilde_star(f, one).terms


@given(elements(), elements())
def test_first_order_commutator_is_poisson_bracket(f, h):
    c = commutator(f, h)
    hbar1 = WindowedPElement(M, {(0, e, idx): v for (b, e, idx), v in c.terms.items() if b == 1})
    assert hbar1 == poisson(f, h)


@given(elements(), elements())
def test_commutator_is_tilde_star_commutator(f, h):
    assert commutator(f, h) == tilde_star(f, h) - tilde_star(h, f)


def test_window_mismatch_rejected():
    with pytest.raises(WindowError):
        moyal_star(WindowedPElement.p(1, 2), WindowedPElement.p(-1, 3))


@pytest.mark.parametrize("target", [(-1, 1), (-2, 1, 1), (-3, 1, 2), (-2, -1, 1, 2)])
def test_hamiltonians_commute(target):
    h1, h2 = hamiltonian_density(1), hamiltonian_density(2)
    window = sum(abs(x) for x in target) + 4
    assert commutator_coefficient(h1, h2, target, window) == {}


def test_full_commutator_on_small_window():
    # at window M only coefficients with max index <= M - 2 are window-exact
    h1, h2 = hamiltonian_density(1), hamiltonian_density(2)
    c = commutator(phi0_tilde(h1, 4), phi0_tilde(h2, 4))
    assert c.terms  # truncation leaves residue near the window edge
    exact = {k: v for k, v in c.terms.items() if max(map(abs, k[2]), default=0) <= 2}
    assert exact == {}


@pytest.mark.parametrize("f", [u(0) ** 2, u(0) * u(2), u(1) ** 2, u(0) ** 3 + u(0) * u(1) * 2])
def test_phi_injective_on_samples(f):
    samples = [u(0) ** 2, u(0) * u(2), u(1) ** 2, u(0) ** 3 + u(0) * u(1) * 2]
    window = 3
    for h in samples:
        assert (phi(f, window) == phi(h, window)) == (f == h)
