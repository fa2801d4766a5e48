"""Stationary relative GW invariants of (CP^1, 0, infinity) with full ramification over 0.

``F•`` comes from the wedge vacuum expectation
``<alpha_A E_0(z_1)...E_0(z_n) alpha_{-a_1}...alpha_{-a_k}> / (A a_1...a_k)``; the
connected series ``F°`` is peeled off by inclusion-exclusion over marked points
lying on degree-zero components.  Polynomial dependence on the ramification
``a`` is recovered by interpolation on integer grids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from typing import Dict, Iterable, List, Sequence, Tuple

from .interp import interpolate_grid, interpolate_simplex, simplex_held_out
from .series import (
    MultiPoly,
    TruncatedSeries,
    compose,
    compose_linear,
    linear_poly,
    varsigma,
    _varsigma_coeffs,
)
from .wedge import Alpha, E, LinearForm, ShiftedSeries, vev

__all__ = [
    "Profile",
    "GwSeries",
    "zvars",
    "disconnected_series",
    "connected_series",
    "connected_from_disconnected",
    "reassemble_disconnected",
    "q_function",
    "closed_connected",
    "closed_disconnected",
    "closed_multilinear_coef",
    "interpolate_P",
    "fit_symmetric",
    "grid_multilinear",
    "InterpolationError",
]


class InterpolationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Profile:
    parts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if any(p < 1 for p in self.parts):
            raise ValueError(f"profile parts must be positive: {self.parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def sub(self, idx: Iterable[int]) -> "Profile":
        return Profile(tuple(self.parts[i] for i in idx))

    def sub_total(self, idx: Iterable[int]) -> int:
        return sum(self.parts[i] for i in idx)

    def automorphisms(self) -> int:
        out = 1
        for p in set(self.parts):
            out *= factorial(self.parts.count(p))
        return out


def zvars(n: int) -> Tuple[str, ...]:
    return tuple(f"z{i + 1}" for i in range(n))


@dataclass
class GwSeries:
    """Generating series with ``z_i^{d_i+1}`` marking ``tau_{d_i}(omega)``."""

    mu: Profile
    nu: Profile
    n: int
    connected: bool
    series: ShiftedSeries

    def invariant(self, d: Sequence[int]):
        if len(d) != self.n:
            raise ValueError(f"expected {self.n} descendant indices")
        lowest = 0 if self.connected else -2
        if any(x < lowest for x in d):
            raise ValueError(f"descendant indices must be >= {lowest}")
        return self.series.coefficient(tuple(x + 1 for x in d))

    @property
    def cap(self) -> int:
        return self.series.cap


def _check(A: int, a: Sequence[int], n: int) -> Profile:
    prof = Profile(tuple(a))
    if len(prof) < 1:
        raise ValueError("need at least one part over infinity")
    if n < 0:
        raise ValueError("n must be non-negative")
    if A != prof.total:
        raise ValueError(f"A={A} differs from the sum {prof.total} of {prof.parts}")
    return prof


@lru_cache(maxsize=4096)
def _disconnected(a: Tuple[int, ...], n: int, cap: int) -> ShiftedSeries:
    A = sum(a)
    zs = zvars(n)
    word = (Alpha(A),) + tuple(E(0, LinearForm.of(z)) for z in zs) + tuple(Alpha(-x) for x in a)
    val = vev(word, zs, cap)
    return val * Fraction(1, A * prod(a))


def disconnected_series(A: int, a: Sequence[int], n: int, cap: int) -> GwSeries:
    """F•_{A,a}(z_1..z_n), exact through total degree ``cap`` (negative powers included)."""
    prof = _check(A, a, n)
    if n < 1:
        raise ValueError("the wedge formula needs n >= 1")
    # E_0 operators commute, and a only enters through its multiset
    s = _disconnected(tuple(sorted(prof.parts)), n, cap)
    return GwSeries(Profile((A,)), prof, n, False, s)


def _inverse_varsigma_product(vars_j: Sequence[str], variables: Tuple[str, ...], cap: int) -> ShiftedSeries:
    """prod_{j} 1/varsigma(z_j), as a shifted series known to ``cap``."""
    out = ShiftedSeries.constant(1, variables, cap + len(vars_j))
    for v in vars_j:
        rs = compose_linear("s_inv", {v: 1}, variables, cap + len(vars_j))
        out = (out * rs).divide_by_variable(variables.index(v))
    return out


def _embed_shifted(s: ShiftedSeries, mapping: Dict[str, str], variables: Tuple[str, ...]) -> ShiftedSeries:
    num = s.numerator.rename(mapping).embed(variables)
    shift = [0] * len(variables)
    for v, k in zip(s.variables, s.shift):
        shift[variables.index(mapping.get(v, v))] = k
    return ShiftedSeries(num, shift)


@lru_cache(maxsize=4096)
def _connected(a: Tuple[int, ...], m: int, cap: int) -> ShiftedSeries:
    zs = zvars(m)
    if m == 0:
        c = Fraction(1, a[0]) if len(a) == 1 else Fraction(0)
        return ShiftedSeries.constant(c, ("z",), cap)
    total = _disconnected(a, m, cap)
    for size in range(1, m + 1):
        rest_n = m - size
        # F°(z_rest) has minimal degree rest_n, and 1/varsigma lowers degree by one each
        inner = _connected(a, rest_n, cap + size)
        for J in combinations(range(m), size):
            rest = [zs[i] for i in range(m) if i not in J]
            if rest_n == 0:
                piece = ShiftedSeries.constant(inner.numerator.constant_term(), zs, cap + size)
            else:
                mapping = {f"z{i + 1}": v for i, v in enumerate(rest)}
                piece = _embed_shifted(inner, mapping, zs)
            piece = piece * _inverse_varsigma_product([zs[j] for j in J], zs, cap)
            total = total - piece
    return total.normalized().truncate(cap)


def connected_series(A: int, a: Sequence[int], n: int, cap: int) -> GwSeries:
    """F°_{A,a}(z_1..z_n) through total degree ``cap``; a genuine power series."""
    prof = _check(A, a, n)
    s = _connected(tuple(sorted(prof.parts)), n, cap)
    if n:
        s.to_series()  # asserts there are no negative powers left
    return GwSeries(Profile((A,)), prof, n, True, s)


connected_from_disconnected = connected_series


def reassemble_disconnected(A: int, a: Sequence[int], n: int, cap: int) -> ShiftedSeries:
    """sum_J F°(z_{J^c}) / prod_{j in J} varsigma(z_j), from the connected series."""
    prof = _check(A, a, n)
    key = tuple(sorted(prof.parts))
    zs = zvars(n)
    total = None
    for size in range(0, n + 1):
        inner = _connected(key, n - size, cap + size)
        for J in combinations(range(n), size):
            rest = [zs[i] for i in range(n) if i not in J]
            if not rest:
                piece = ShiftedSeries.constant(inner.numerator.constant_term(), zs, cap + size)
            else:
                piece = _embed_shifted(inner, {f"z{i + 1}": v for i, v in enumerate(rest)}, zs)
            if J:
                piece = piece * _inverse_varsigma_product([zs[j] for j in J], zs, cap)
            total = piece if total is None else total + piece
    return total.normalized().truncate(cap)


# Q-function -------------------------------------------------------------------

def q_function(b: Sequence, zs: Sequence[str], cap: int, variables: Sequence[str] | None = None) -> TruncatedSeries:
    """Q(b_1..b_n; z_1..z_n) through total degree ``cap``.

    Entries of ``b`` are integers or polynomials/series over ``variables``
    (default: ``zs``).
    """
    zs = tuple(zs)
    if len(b) != len(zs) or not zs:
        raise ValueError("need one b per z and at least one z")
    variables = tuple(variables or zs)
    work = cap + 1

    def as_series(x) -> TruncatedSeries:
        if isinstance(x, TruncatedSeries):
            return x.truncate(min(x.cap, work)) if x.cap >= work else x
        if isinstance(x, MultiPoly):
            return TruncatedSeries.from_poly(x, work)
        return TruncatedSeries.constant(Fraction(x), variables, work)

    numeric = all(isinstance(x, (int, Fraction)) for x in b)
    bs = [as_series(x) for x in b]
    B = sum(bs[1:], bs[0])
    zpoly = [linear_poly({z: 1}, variables, work) for z in zs]
    num = TruncatedSeries.constant(Fraction(1), variables, work)
    lead = B
    prefix = TruncatedSeries(variables, work)
    for i, z in enumerate(zs):
        if numeric:
            form: Dict[str, Fraction] = {}
            lc = lead.constant_term()
            form[z] = form.get(z, 0) + lc
            for zp in zs[:i]:
                form[zp] = form.get(zp, 0) + Fraction(b[i])
            factor = compose_linear("varsigma", form, variables, work)
        else:
            arg = lead * zpoly[i] + bs[i] * prefix
            factor = compose(varsigma("_s", work), arg)
        num = num * factor
        lead = lead - bs[i]
        prefix = prefix + zpoly[i]
    Z = {z: 1 for z in zs}
    out = num.divide_linear(Z) * compose_linear("s_inv", Z, variables, work)
    return out.truncate(cap)


# closed forms ----------------------------------------------------------------------

def _odd_product_coefficient(k: int, zs: Tuple[str, ...], variables: Tuple[str, ...]) -> MultiPoly:
    """Coef_{t^{k+1}} prod_i varsigma(z_i t), a homogeneous polynomial of degree k+1."""
    c = _varsigma_coeffs(k + 1)
    terms: Dict[Tuple[int, ...], Fraction] = {}
    idx = [variables.index(z) for z in zs]

    def rec(i: int, left: int, exps: List[int], coef: Fraction):
        if i == len(zs):
            if left == 0:
                e = tuple(exps)
                terms[e] = terms.get(e, 0) + coef
            return
        for p in range(1, left + 1, 2):
            if i == len(zs) - 1 and p != left:
                continue
            exps[idx[i]] += p
            rec(i + 1, left - p, exps, coef * c[p])
            exps[idx[i]] -= p

    rec(0, k + 1, [0] * len(variables), Fraction(1))
    return MultiPoly(variables, terms)


def closed_connected(k: int, zs: Sequence[str], cap: int, variables: Sequence[str] | None = None) -> TruncatedSeries:
    """(1/(Z varsigma(Z))) Coef_{t^{k+1}} prod varsigma(z_i Z t), with Z = sum z_i."""
    if k < 1 or not zs:
        raise ValueError("need k >= 1 and at least one variable")
    zs = tuple(zs)
    variables = tuple(variables or zs)
    # Coef_{t^{k+1}} prod varsigma(z_i Z t) = Z^{k+1} P_k(z); divide by Z * Z * S(Z)
    P = _odd_product_coefficient(k, zs, variables)
    Z = {z: 1 for z in zs}
    Zs = linear_poly(Z, variables, cap)
    out = TruncatedSeries.from_poly(P, cap)
    for _ in range(k - 1):
        out = out * Zs
    return out * compose_linear("s_inv", Z, variables, cap)


def closed_disconnected(k: int, n: int, cap: int) -> ShiftedSeries:
    """sum over J strictly inside [n] of the connected closed form on J^c over prod_J varsigma(z_j)."""
    zs = zvars(n)
    total = ShiftedSeries(TruncatedSeries(zs, cap))
    for size in range(0, n):
        for J in combinations(range(n), size):
            rest = tuple(zs[i] for i in range(n) if i not in J)
            piece = ShiftedSeries(closed_connected(k, rest, cap + size, zs))
            if J:
                piece = piece * _inverse_varsigma_product([zs[j] for j in J], zs, cap)
            total = total + piece
    return total.normalized().truncate(cap)


def closed_multilinear_coef(k: int, n: int, cap: int, connected: bool = True):
    """Closed form for (1/k!) Coef_{a_1...a_k} of F° (connected) or F• (disconnected)."""
    if connected:
        return ShiftedSeries(closed_connected(k, zvars(n), cap))
    return closed_disconnected(k, n, cap)


# interpolation in the ramification ------------------------------------------------------

def _a_degree_bound(total_z_degree: int, n: int, k: int, connected: bool) -> int:
    # each connected piece in m variables has a-degree (z-degree) - k; 1/varsigma factors
    # contribute z-degree -1 each
    return total_z_degree - k + (0 if connected else n)


def grid_multilinear(
    n: int,
    k: int,
    cap: int,
    connected: bool = True,
    extra_points: int = 2,
    grid: str = "simplex",
) -> Tuple[Dict[Tuple[int, ...], object], Dict[Tuple[int, ...], object]]:
    """(1/k!) Coef_{a_1..a_k} of every z-coefficient of F° or F• up to total degree ``cap``.

    Returns ``(multilinear, held_out)`` where ``held_out`` maps z-exponents to the
    number of held-out points checked.  One grid sized for the largest degree bound
    serves every coefficient; ``1/a_1`` terms of F• (k=1) are cleared by multiplying by ``a_1``.
    """
    top = max(_a_degree_bound(cap, n, k, connected), 0)
    shift = 1 if (k == 1 and not connected) else 0
    degree = top + shift
    variables = tuple(f"a{i + 1}" for i in range(k))
    cache: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}

    def coeffs_at(t):
        key = tuple(sorted(t))
        hit = cache.get(key)
        if hit is None:
            s = _connected(key, n, cap) if connected else _disconnected(key, n, cap)
            scale = key[0] if shift else 1
            hit = {e: c * scale for e, c in s.coefficients().items()}
            cache[key] = hit
        return hit

    # one pass over the grid to learn which z-exponents occur
    fit_symmetric(lambda t: bool(coeffs_at(t)), k, degree, variables, grid)
    exps_all = sorted({e for d in cache.values() for e in d})
    result: Dict[Tuple[int, ...], object] = {}
    checked: Dict[Tuple[int, ...], object] = {}
    mono = tuple([2 if (shift and i == 0) else 1 for i in range(k)])
    for e in exps_all:
        poly, held_points = fit_symmetric(lambda t: coeffs_at(t).get(e, 0), k, degree, variables, grid)
        held_points = held_points[: max(1, extra_points)]
        for hp in held_points:
            want = coeffs_at(hp).get(e, 0)
            got = poly.evaluate(dict(zip(variables, hp)))
            if got != want:
                raise InterpolationError(f"held-out point {hp} fails for z-exponent {e}")
        checked[e] = len(held_points)
        c = poly.coefficient(mono)
        if c:
            result[e] = Fraction(c) / factorial(k)
    return result, checked


def interpolate_P(g: int, d: Sequence[int], k: int, cap: int | None = None, check: bool = True,
                  grid: str = "tensor") -> MultiPoly:
    """P_{g,0,d}(a_1..a_k) = <A, prod tau_{d_i}(omega), (a_1..a_k)>° as a polynomial in a.

    ``grid="tensor"``: interpolated on {1..2g+n+1}^k (per-variable degree bound only), checked
    at held-out points with coordinate 2g+n+2.  ``grid="simplex"``: total degree <= 2g+n-1
    assumed, fitted on sum(a_i - 1) <= 2g+n-1 and checked on the next layer.
    """
    n = len(d)
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if grid not in ("tensor", "simplex"):
        raise ValueError(f"unknown grid {grid!r}")
    variables = tuple(f"a{i + 1}" for i in range(k))
    if sum(d) != 2 * g - 1 + k:
        # dimension constraint: the invariant vanishes identically
        return MultiPoly(variables, {})
    exps = tuple(x + 1 for x in d)
    degree = 2 * g + n - 1
    need = sum(exps)
    cap = need if cap is None else cap
    if cap < need:
        raise ValueError(f"cap {cap} below the required degree {need}")

    def value(t):
        return _connected(tuple(sorted(t)), n, cap).coefficient(exps)

    poly, held_points = fit_symmetric(value, k, degree, variables, grid)
    if check:
        for hp in held_points:
            if poly.evaluate(dict(zip(variables, hp))) != value(hp):
                raise InterpolationError(f"held-out point {hp} not reproduced for g={g}, d={tuple(d)}")
    return poly


def fit_symmetric(value, k: int, degree: int, variables: Sequence[str], grid: str = "tensor"):
    """(polynomial, held-out points) for a symmetric function of k positive integers."""
    if grid == "simplex":
        return interpolate_simplex(value, k, degree, variables, symmetric=True), simplex_held_out(k, degree)
    nodes = list(range(1, degree + 2))
    held = degree + 2
    points = sorted({(held,) * k, (held,) + tuple(nodes[i % len(nodes)] for i in range(k - 1))})
    return interpolate_grid(value, nodes, k, variables, symmetric=True), points
