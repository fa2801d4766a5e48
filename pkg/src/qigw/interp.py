"""Exact multivariate Lagrange interpolation on integer tensor grids."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb
from typing import Callable, Dict, List, Sequence, Tuple

from .series import MultiPoly


def lagrange_basis(nodes: Sequence[int]) -> List[List[Fraction]]:
    """Coefficient lists (ascending powers) of the Lagrange basis on ``nodes``."""
    out = []
    for j, xj in enumerate(nodes):
        coeffs = [Fraction(1)]
        denom = Fraction(1)
        for m, xm in enumerate(nodes):
            if m == j:
                continue
            # multiply by (x - xm)
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= c * xm
            coeffs = nxt
            denom *= xj - xm
        out.append([c / denom for c in coeffs])
    return out


def interpolate_grid(
    f: Callable[[Tuple[int, ...]], object],
    nodes: Sequence[int],
    k: int,
    variables: Sequence[str] | None = None,
    symmetric: bool = False,
) -> MultiPoly:
    """Polynomial agreeing with ``f`` on ``nodes^k``; of degree < len(nodes) per variable.

    With ``symmetric=True`` only sorted tuples are evaluated.
    """
    variables = tuple(variables or (f"a{i + 1}" for i in range(k)))
    nodes = list(nodes)
    basis = lagrange_basis(nodes)
    if symmetric:
        cache = {t: f(t) for t in combinations_with_replacement(nodes, k)}
        value = lambda t: cache[tuple(sorted(t))]
    else:
        value = f
    pos = {x: i for i, x in enumerate(nodes)}
    terms: Dict[Tuple[int, ...], object] = {}
    for point in product(nodes, repeat=k):
        v = value(point)
        if not v:
            continue
        polys = [basis[pos[x]] for x in point]
        for exps in product(*(range(len(p)) for p in polys)):
            c = v
            for p, e in zip(polys, exps):
                c = c * p[e]
                if not c:
                    break
            if c:
                terms[exps] = terms.get(exps, 0) + c
    return MultiPoly(variables, terms)


def _binomial_poly(m: int) -> List[Fraction]:
    """Coefficients of binom(a - 1, m) in a (ascending)."""
    coeffs = [Fraction(1)]
    for j in range(m):
        # multiply by (a - 1 - j) / (j + 1)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c / (j + 1)
            nxt[i] -= c * (1 + j) / (j + 1)
        coeffs = nxt
    return coeffs


def _offsets(k: int, degree: int) -> List[Tuple[int, ...]]:
    """All x in N^k with |x| <= degree."""
    out: List[Tuple[int, ...]] = []

    def rec(prefix, left):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for x in range(left + 1):
            rec(prefix + [x], left - x)

    rec([], degree)
    return out


def interpolate_simplex(
    f: Callable[[Tuple[int, ...]], object],
    k: int,
    degree: int,
    variables: Sequence[str] | None = None,
    symmetric: bool = False,
) -> MultiPoly:
    """Polynomial of total degree <= ``degree`` agreeing with ``f`` on the points
    a in Z_{>=1}^k with sum(a_i - 1) <= degree.

    Newton form: the coefficient of prod binom(a_i - 1, alpha_i) is the forward
    difference of f at (1, ..., 1).
    """
    variables = tuple(variables or (f"a{i + 1}" for i in range(k)))
    cache: Dict[Tuple[int, ...], object] = {}

    def value(x: Tuple[int, ...]):
        pt = tuple(1 + xi for xi in x)
        key = tuple(sorted(pt)) if symmetric else pt
        if key not in cache:
            cache[key] = f(key)
        return cache[key]

    basis = [_binomial_poly(m) for m in range(degree + 1)]
    terms: Dict[Tuple[int, ...], object] = {}
    for alpha in _offsets(k, degree):
        diff = 0
        for beta in product(*(range(x + 1) for x in alpha)):
            v = value(beta)
            if not v:
                continue
            c = (-1) ** (sum(alpha) - sum(beta))
            for x, y in zip(alpha, beta):
                c *= comb(x, y)
            diff = diff + v * c
        if not diff:
            continue
        polys = [basis[x] for x in alpha]
        for exps in product(*(range(len(p)) for p in polys)):
            c = diff
            for p, e in zip(polys, exps):
                c = c * p[e]
                if not c:
                    break
            if c:
                terms[exps] = terms.get(exps, 0) + c
    return MultiPoly(variables, terms)


def simplex_held_out(k: int, degree: int) -> List[Tuple[int, ...]]:
    """Points on the layer sum(a_i - 1) = degree + 1, outside the interpolation set."""
    pts = {(degree + 2,) + (1,) * (k - 1)}
    if k >= 2:
        pts.add((degree + 1, 2) + (1,) * (k - 2))
    return sorted(pts)
