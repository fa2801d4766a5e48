"""Quantum correlators from iterated tilde-star products, and the table of F^(q) coefficients.

Correlators with a leading tau_0 are read off the coefficient of
``p_{a_1}...p_{a_k} e^{iAx} eps^{2l} hbar^{g-l+n-1}`` (all a_j > 0) in
``(...(phi(H_{d_1 - 1}) *~ phi0~(Hbar_{d_2})) *~ ...) *~ phi0~(Hbar_{d_n})``,
interpolated in a and reduced to the multilinear coefficient.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, List, Mapping, Sequence, Tuple

from ..closedform import CorrelatorKey
from ..exact import GaussianRational, ipow
from ..series import MultiPoly
from .diffpoly import DiffPoly, hamiltonian_density, var_deriv
from .pspace import _contraction_weight, _sub_multisets, phi_coefficient, positive_partitions

__all__ = [
    "QuantumConfig",
    "WindowInstabilityError",
    "NonRealValueError",
    "InconsistentTableError",
    "UnsupportedDensityError",
    "register_density",
    "supported_degrees",
    "chain_coefficients",
    "quantum_P",
    "quantum_correlator",
    "normalize",
    "TauCoefficients",
    "assemble_tau",
]


class WindowInstabilityError(ArithmeticError):
    pass


class NonRealValueError(ArithmeticError):
    pass


class InconsistentTableError(ArithmeticError):
    pass


class UnsupportedDensityError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumConfig:
    """window = 2A + window_margin unless fixed; every value is recomputed at window + 2.

    ``grid`` selects the interpolation points for P (see gw.fit_symmetric).
    """

    window: int | None = None
    window_margin: int = 4
    stability_step: int = 2
    check_held_out: bool = True
    grid: str = "simplex"

    def window_for(self, A: int) -> int:
        return self.window if self.window is not None else 2 * A + self.window_margin


DEFAULT_CONFIG = QuantumConfig()

_DENSITIES: Dict[int, DiffPoly] = {1: hamiltonian_density(1), 2: hamiltonian_density(2)}


def register_density(d: int, poly: DiffPoly) -> None:
    """Make Hbar_d available (e.g. from load_density)."""
    _DENSITIES[d] = poly
    _chain.cache_clear()


def supported_degrees() -> Tuple[int, ...]:
    return tuple(sorted(_DENSITIES))


def _density(d: int) -> DiffPoly:
    try:
        return _DENSITIES[d]
    except KeyError:
        raise UnsupportedDensityError(
            f"no density for Hbar_{d}; supported: {supported_degrees()} (load more with register_density)"
        ) from None


def _u_degree(f: DiffPoly) -> int:
    return max((sum(e) for _, _, e in f.terms), default=0)


@lru_cache(maxsize=None)
def _phi_cached(f: DiffPoly, idx: Tuple[int, ...]):
    return phi_coefficient(f, idx)


@lru_cache(maxsize=None)
def _chain(first: DiffPoly, rest: Tuple[DiffPoly, ...], A: int, window: int, eps: int, hbar: int
           ) -> Dict[Tuple[int, ...], object]:
    steps = len(rest)
    # only positive indices can survive p_{<=0} = 0: the left factor is never
    # differentiated in non-positive p's, so anything else is dead on arrival
    state: Dict[Tuple[int, int, Tuple[int, ...]], object] = {}
    for part in positive_partitions(A, _u_degree(first), window):
        idx = tuple(sorted(part))
        for (a, m), c in _phi_cached(first, idx).items():
            if a <= eps and m + steps <= hbar:
                key = (a, m, idx)
                state[key] = state.get(key, 0) + c
    for j, h in enumerate(rest):
        remaining = steps - j - 1
        dh = _u_degree(h)
        nxt: Dict[Tuple[int, int, Tuple[int, ...]], object] = {}
        for (a, m, idx), c in state.items():
            X = Counter(idx)
            for K in _sub_multisets(X):
                nk = sum(K.values())
                # at least one contraction; every contracted p_{-k} of h is used up
                if not nk or nk > dh or m + nk + remaining > hbar:
                    continue
                negs = Counter({-k: s for k, s in K.items()})
                w, _ = _contraction_weight(X, negs, K)
                left = tuple((X - K).elements())
                neg_idx = tuple(negs.elements())
                for P in positive_partitions(sum(K.elements()), dh - nk, window):
                    coefs = _phi_cached(h, tuple(sorted(neg_idx + P)))
                    if not coefs:
                        continue
                    new_idx = tuple(sorted(left + P))
                    for (a2, m2), c2 in coefs.items():
                        na, nm = a + a2, m + m2 + nk
                        if na > eps or nm + remaining > hbar:
                            continue
                        key = (na, nm, new_idx)
                        nxt[key] = nxt.get(key, 0) + c * w * c2
        state = {k: v for k, v in nxt.items() if v}
    return {idx: v for (a, m, idx), v in state.items() if a == eps and m == hbar and v}


def chain_coefficients(d: Sequence[int], l: int, h: int, A: int, window: int) -> Dict[Tuple[int, ...], object]:
    """All coefficients of eps^{2l} hbar^{h+n-1} p_{a_1}...p_{a_m} e^{iAx}, a_j > 0, in the
    tilde-star chain, keyed by the sorted tuple a."""
    d = tuple(d)
    first = var_deriv(_density(d[0]))
    rest = tuple(_density(x) for x in d[1:])
    return _chain(first, rest, A, window, 2 * l, h + len(d) - 1)


def _aut(a: Sequence[int]) -> int:
    out = 1
    for c in Counter(a).values():
        out *= factorial(c)
    return out


def _stable_coefficient(d, l, h, a, config: QuantumConfig):
    a = tuple(sorted(a))
    A = sum(a)
    M = config.window_for(A)
    v = chain_coefficients(d, l, h, A, M).get(a, 0)
    M2 = M + config.stability_step
    v2 = chain_coefficients(d, l, h, A, M2).get(a, 0)
    if v != v2:
        raise WindowInstabilityError(f"coefficient of p{list(a)} for d={tuple(d)}, l={l}, h={h}: "
                                     f"{v} at window {M} but {v2} at window {M2}")
    return v


def _real(x, what: str) -> Fraction:
    if isinstance(x, GaussianRational):
        if not x.is_real:
            raise NonRealValueError(f"{what} is not real: {x}")
        return x.real_value()
    return Fraction(x)


def quantum_P(d: Sequence[int], l: int, h: int, k: int, config: QuantumConfig = DEFAULT_CONFIG,
              grid: str = "tensor") -> MultiPoly:
    """P_{g,l,d}(a_1..a_k) from the quantization side: |Aut a| (-i)^{g+l+n-1} times the chain
    coefficient, fitted as in gw.interpolate_P and checked at held-out points."""
    from ..gw import InterpolationError, fit_symmetric

    d = tuple(d)
    n, g = len(d), l + h
    variables = tuple(f"a{i + 1}" for i in range(k))
    phase = ipow(-(g + l + n - 1))

    def value(t):
        c = _stable_coefficient(d, l, h, t, config)
        return _real(phase * c * _aut(t), f"P at a={tuple(t)}") if c else Fraction(0)

    poly, held_points = fit_symmetric(value, k, 2 * g + n - 1, variables, grid)
    if config.check_held_out:
        for hp in held_points:
            if poly.evaluate(dict(zip(variables, hp))) != value(hp):
                raise InterpolationError(f"held-out point {hp} not reproduced for d={d}, l={l}, h={h}")
    return poly


def _normalization_exponent(d: Sequence[int], g: int) -> int:
    return sum(d) - 3 * g - len(d) + 3


def quantum_correlator(d: Sequence[int], l: int, h: int, config: QuantumConfig = DEFAULT_CONFIG):
    """Raw coefficient of eps^{2l} hbar^h in d^{n+1}F^(q)/dt_0 dt_{d_1}...dt_{d_n} at t = 0."""
    d = tuple(int(x) for x in d)
    if not d:
        raise ValueError("need at least one tau index besides the leading tau_0")
    if l < 0 or h < 0:
        raise ValueError("l and h must be non-negative")
    for x in d:
        _density(x)
    n, g = len(d), l + h
    k = sum(d) - 2 * g + l + 1
    if k < 0:
        return Fraction(0)
    if k == 0:
        if n > 1:
            return Fraction(0)
        # p-free part of H_{d_1 - 1} carries DR_g(0,0) = (-1)^g lambda_g
        c0 = var_deriv(_density(d[0])).u_free().coefficient(2 * l, h)
        value = ipow(-(g + l)) * c0
    else:
        poly = quantum_P(d, l, h, k, config, grid=config.grid)
        value = poly.coefficient((1,) * k) / factorial(k) if poly.terms else Fraction(0)
    raw = ipow(-_normalization_exponent((0,) + d, g)) * value
    return _simplify(raw)


def _simplify(x):
    if isinstance(x, GaussianRational) and x.is_real:
        return x.real_value()
    return x


def normalize(key: CorrelatorKey, raw) -> Fraction:
    """i^{sum d - 3g - n + 3} * raw, which must be rational."""
    return _real(ipow(_normalization_exponent(key.d, key.g)) * raw, f"normalized {key}")


# table of F^(q) coefficients -------------------------------------------------------------------

@dataclass
class TauCoefficients:
    """Raw coefficients of d^n F^(q)/dt_{d_1}..dt_{d_n} at t = 0, keyed by sorted CorrelatorKey."""

    values: Dict[CorrelatorKey, object] = field(default_factory=dict)
    anchored: Dict[CorrelatorKey, object] = field(default_factory=dict)
    constant_term: Dict[Tuple[int, int], object] = field(default_factory=dict)
    dilaton_residuals: Dict[CorrelatorKey, object] = field(default_factory=dict)
    checks: int = 0

    def raw(self, d: Sequence[int], l: int, h: int):
        key = CorrelatorKey(tuple(sorted(d)), l, h)
        return self.values.get(key, 0)

    def normalized(self, d: Sequence[int], l: int, h: int) -> Fraction:
        key = CorrelatorKey(tuple(sorted(d)), l, h)
        return normalize(key, self.values.get(key, 0))

    def __contains__(self, key: CorrelatorKey) -> bool:
        return key.sorted() in self.values


def _string_equation(D: Tuple[int, ...], l: int, h: int):
    """(lhs key, [rhs keys], inhomogeneous term) of d_D of the string equation at t = 0."""
    lhs = CorrelatorKey(tuple(sorted((0,) + D)), l, h)
    rhs = []
    for j, x in enumerate(D):
        if x >= 1:
            lowered = D[:j] + (x - 1,) + D[j + 1:]
            rhs.append(CorrelatorKey(tuple(sorted(lowered)), l, h))
    const = Fraction(0)
    if sorted(D) == [0, 0] and (l, h) == (0, 0):
        const = Fraction(1)
    if not D and (l, h) == (0, 1):
        const = GaussianRational(0, Fraction(-1, 24))
    return lhs, rhs, const


def assemble_tau(max_genus: int = 2, max_points: int = 2, config: QuantumConfig = DEFAULT_CONFIG
                 ) -> TauCoefficients:
    """Fill the table for genus <= max_genus and at most ``max_points`` tau's after a leading tau_0.

    tau_0-anchored entries come from quantum_correlator; every instance of the string equation
    inside the range is then used to propagate values, and an instance with nothing left
    unknown must hold exactly. The constant term comes from the dilaton equation at t = 0;
    the remaining dilaton instances are only reported.
    """
    degrees = supported_degrees()
    orders = [(l, g - l) for g in range(max_genus + 1) for l in range(g + 1)]
    table = TauCoefficients()
    known: Dict[CorrelatorKey, object] = {}

    def unstable(key: CorrelatorKey) -> bool:
        return not key.stable

    # anchors
    for size in range(1, max_points + 1):
        for D in combinations_with_replacement(degrees, size):
            for l, h in orders:
                key = CorrelatorKey(tuple(sorted((0,) + D)), l, h)
                v = quantum_correlator(D, l, h, config)
                table.anchored[key] = v
                known[key] = v

    equations = []
    index_range = range(max(degrees) + 1)
    for size in range(0, max_points + 1):
        for D in combinations_with_replacement(index_range, size):
            for l, h in orders:
                equations.append(_string_equation(D, l, h))

    def value_of(key):
        if unstable(key):
            return Fraction(0)
        return known.get(key)

    progress = True
    pending = list(equations)
    while progress:
        progress = False
        still = []
        for lhs, rhs, const in pending:
            unknown = [k for k in [lhs] + rhs if value_of(k) is None]
            if len(set(unknown)) > 1:
                still.append((lhs, rhs, const))
                continue
            if not unknown:
                total = sum((value_of(k) for k in rhs), Fraction(0)) + const
                if _simplify(value_of(lhs) - total) != 0:
                    raise InconsistentTableError(
                        f"string equation at {lhs}: table has {value_of(lhs)} but the rhs gives {_simplify(total)}"
                    )
                table.checks += 1
                continue
            u = unknown[0]
            mult = sum(1 for k in rhs if k == u)
            others = sum((value_of(k) for k in rhs if k != u), Fraction(0)) + const
            if u == lhs and mult == 0:
                known[u] = _simplify(others)
            elif u != lhs:
                known[u] = _simplify((value_of(lhs) - others) / mult)
            else:
                # lhs appears on both sides; cannot happen for the string equation
                still.append((lhs, rhs, const))
                continue
            progress = True
        pending = still

    table.values = {k: v for k, v in known.items() if not unstable(k)}

    # constant term from the dilaton equation at t = 0
    for l, h in orders:
        g = l + h
        tau1 = value_of(CorrelatorKey((1,), l, h))
        if tau1 is None:
            continue
        seed = Fraction(1, 24) if (l, h) == (1, 0) else Fraction(0)
        if 2 * g - 2:
            table.constant_term[(l, h)] = _simplify((tau1 - seed) / (2 * g - 2))
        else:
            table.constant_term[(l, h)] = Fraction(0)
            table.dilaton_residuals[CorrelatorKey((), l, h)] = _simplify(tau1 - seed)

    # remaining dilaton instances: reported only
    for key, v in sorted(table.values.items(), key=lambda kv: (kv[0].g, kv[0].l, kv[0].d)):
        if 1 not in key.d:
            continue
        rest = list(key.d)
        rest.remove(1)
        E = CorrelatorKey(tuple(rest), key.l, key.h)
        if E.d:
            base = value_of(E)
            if base is None:
                continue
        else:
            continue
        residual = v - (len(E.d) + 2 * key.l + 2 * key.h - 2) * base
        table.dilaton_residuals[key] = _simplify(residual)
    return table
