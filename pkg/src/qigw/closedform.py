"""Closed formulas: purely quantum intersection numbers, one-part double Hurwitz
numbers, a brute-force Hurwitz count over the symmetric group, and the k=0 branch."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial, prod
from typing import Dict, Iterable, List, Sequence, Tuple

from .partitions import compositions as _compositions
from .series import MultiPoly, TruncatedSeries, compose, s_series

__all__ = [
    "CorrelatorKey",
    "purely_quantum",
    "main_formula_rhs",
    "gjv_hurwitz",
    "hurwitz_oracle",
    "labeling_conventions_fitting",
    "k0_branch",
    "witten_kontsevich",
    "HURWITZ_BOUND",
]

HURWITZ_BOUND = 6


@dataclass(frozen=True)
class CorrelatorKey:
    """<tau_{d_1} ... tau_{d_n}>_{l, h} with genus g = l + h."""

    d: Tuple[int, ...]
    l: int
    h: int

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if any(x < 0 for x in self.d) or self.l < 0 or self.h < 0:
            raise ValueError(f"negative entry in {self}")

    @property
    def g(self) -> int:
        return self.l + self.h

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def k(self) -> int:
        return sum(self.d) - 2 * self.g + self.l + 1

    @property
    def parity_allowed(self) -> bool:
        """Selection rule: nonzero only if sum d = n - l + 1 (mod 2)."""
        return (sum(self.d) - self.n + self.l - 1) % 2 == 0

    @property
    def stable(self) -> bool:
        return 2 * self.g - 2 + self.n > 0

    def sorted(self) -> "CorrelatorKey":
        return CorrelatorKey(tuple(sorted(self.d)), self.l, self.h)


@lru_cache(maxsize=None)
def _s_coeffs(m: int) -> Tuple[Fraction, ...]:
    # S(z) = sum_j z^{2j} / (4^j (2j+1)!)
    return tuple(Fraction(1, 4**j * factorial(2 * j + 1)) for j in range(m + 1))


@lru_cache(maxsize=None)
def _r_coeffs(m: int) -> Tuple[Fraction, ...]:
    # 1/S(z) by the recursion sum_j s_j r_{m-j} = delta_{m,0}
    s = _s_coeffs(m)
    r: List[Fraction] = [Fraction(1)]
    for i in range(1, m + 1):
        r.append(-sum(s[j] * r[i - j] for j in range(1, i + 1)))
    return tuple(r)


def _multinomial(n: int, ks: Sequence[int]) -> int:
    if any(k < 0 for k in ks) or sum(ks) != n:
        return 0
    out = factorial(n)
    for k in ks:
        out //= factorial(k)
    return out


def _check_main_range(n: int, g: int):
    if g < 0:
        raise ValueError(f"genus must be non-negative, got g={g}")
    if n < 1 + 2 * (g == 0):
        raise ValueError(
            f"formula holds for g >= 0 and n >= 1 + 2*delta(g,0); got g={g}, n={n}"
        )
    if 2 * g - 3 + n < 0:
        raise ValueError(f"needs 2g - 3 + n >= 0; got g={g}, n={n}")


def purely_quantum(d: Sequence[int], g: int) -> Fraction:
    """<tau_{d_1} ... tau_{d_n}>_{0,g}: coefficient of mu^d in
    (sum mu)^{2g-3+n} Coef_{z^{2g}} prod S(mu_j z) / S(z)."""
    d = tuple(int(x) for x in d)
    n = len(d)
    _check_main_range(n, g)
    if any(x < 0 for x in d):
        raise ValueError(f"descendant indices must be non-negative: {d}")
    N = 2 * g - 3 + n
    # 1/S(z) carries no mu, so sum(d) ranges over N, N+2, ..., N+2g
    if sum(d) < N or sum(d) > N + 2 * g or (sum(d) - N) % 2:
        return Fraction(0)
    s, r = _s_coeffs(g), _r_coeffs(g)
    total = Fraction(0)
    # z^{2g} splits as z^{2 m_0} from 1/S(z) and z^{2 m_j} from S(mu_j z)
    for ms in _compositions(g, n + 1):
        rest = [x - 2 * m for x, m in zip(d, ms[1:])]
        coef = _multinomial(N, rest)
        if coef:
            total += coef * r[ms[0]] * prod(s[m] for m in ms[1:])
    return total


def main_formula_rhs(n: int, g: int) -> MultiPoly:
    """The full right-hand side as a polynomial in mu_1..mu_n, expanded by series arithmetic."""
    _check_main_range(n, g)
    mus = tuple(f"mu{i + 1}" for i in range(n))
    variables = ("z",) + mus
    cap = 4 * g  # z^{2g} times mu-degree 2g
    S = s_series("_s", cap)
    acc = TruncatedSeries.constant(Fraction(1), variables, cap)
    for m in mus:
        arg = TruncatedSeries(variables, cap, {tuple(1 if v in ("z", m) else 0 for v in variables): Fraction(1)})
        acc = acc * compose(S, arg)
    zonly = TruncatedSeries.var("z", variables, cap)
    acc = acc * compose(S.reciprocal(), zonly)
    terms = {e[1:]: c for e, c in acc.terms.items() if e[0] == 2 * g}
    part = MultiPoly(mus, terms)
    total = MultiPoly(mus, {tuple(1 if j == i else 0 for j in range(n)): Fraction(1) for i in range(n)})
    return part * total ** (2 * g - 3 + n)


def gjv_hurwitz(g: int, mu: Sequence[int]) -> Fraction:
    """One-part double Hurwitz number H^g_{|mu|, mu} from the closed formula."""
    mu = tuple(int(x) for x in mu)
    n = len(mu)
    if n < 1 or any(x < 1 for x in mu):
        raise ValueError(f"profile must be non-empty with positive parts: {mu}")
    if g < 0:
        raise ValueError("genus must be non-negative")
    r = 2 * g - 1 + n
    s, rr = _s_coeffs(g), _r_coeffs(g)
    coef = Fraction(0)
    for ms in _compositions(g, n + 1):
        coef += rr[ms[0]] * prod(s[m] * Fraction(x) ** (2 * m) for m, x in zip(ms[1:], mu))
    return factorial(r) * Fraction(sum(mu)) ** (r - 1) * coef


# symmetric-group brute force --------------------------------------------------------

Perm = Tuple[int, ...]


def _cycle_type(p: Perm) -> Tuple[int, ...]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            c = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                c += 1
            out.append(c)
    return tuple(sorted(out, reverse=True))


def _cycles(p: Perm) -> List[Tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = p[j]
            out.append(tuple(cyc))
    return out


def _canon_blocks(blocks: Iterable[Iterable[int]]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _aut(parts: Sequence[int]) -> int:
    out = 1
    for p in set(parts):
        out *= factorial(list(parts).count(p))
    return out


@lru_cache(maxsize=None)
def _transitive_count(g: int, mu: Tuple[int, ...], nu: Tuple[int, ...]) -> int:
    """Number of tuples (sigma, t_1..t_r) with sigma of type mu, t_i transpositions,
    sigma t_1 ... t_r of type nu, and the generated group transitive."""
    d = sum(mu)
    r = 2 * g - 2 + len(mu) + len(nu)
    if r < 0:
        return 0
    transpositions = list(combinations(range(d), 2))
    states: Dict[Tuple[Perm, Tuple[Tuple[int, ...], ...]], int] = {}
    want_mu = tuple(sorted(mu, reverse=True))
    for p in permutations(range(d)):
        if _cycle_type(p) == want_mu:
            key = (p, _canon_blocks(_cycles(p)))
            states[key] = states.get(key, 0) + 1
    for _ in range(r):
        nxt: Dict[Tuple[Perm, Tuple[Tuple[int, ...], ...]], int] = {}
        for (p, blocks), mult in states.items():
            where = {x: bi for bi, b in enumerate(blocks) for x in b}
            for a, b in transpositions:
                # right-multiply by (a b): images of a and b swap
                q = list(p)
                ia, ib = q.index(a), q.index(b)
                q[ia], q[ib] = b, a
                q = tuple(q)
                if where[a] == where[b]:
                    nb = blocks
                else:
                    merged = blocks[where[a]] + blocks[where[b]]
                    nb = _canon_blocks(
                        [blk for i, blk in enumerate(blocks) if i not in (where[a], where[b])] + [merged]
                    )
                key = (q, nb)
                nxt[key] = nxt.get(key, 0) + mult
        states = nxt
    want_nu = tuple(sorted(nu, reverse=True))
    return sum(m for (p, blocks), m in states.items() if len(blocks) == 1 and _cycle_type(p) == want_nu)


def hurwitz_oracle(g: int, mu: Sequence[int], nu: Sequence[int], labeling: str = "both",
                   bound: int = HURWITZ_BOUND) -> Fraction:
    """Double Hurwitz number by enumeration in S_d.

    ``labeling`` chooses which preimage sets are marked: ``both``, ``source``
    (over 0), ``target`` (over infinity) or ``none``.
    """
    mu = tuple(int(x) for x in mu)
    nu = tuple(int(x) for x in nu)
    if any(x < 1 for x in mu + nu) or not mu or not nu:
        raise ValueError("profiles must be non-empty with positive parts")
    d = sum(mu)
    if d != sum(nu):
        raise ValueError(f"profiles have different degrees {d} and {sum(nu)}")
    if d > bound:
        raise ValueError(f"degree {d} exceeds the enumeration bound {bound}")
    base = Fraction(_transitive_count(g, tuple(sorted(mu)), tuple(sorted(nu))), factorial(d))
    factor = {
        "both": _aut(mu) * _aut(nu),
        "source": _aut(mu),
        "target": _aut(nu),
        "none": 1,
    }[labeling]
    return base * factor


def labeling_conventions_fitting(max_degree: int = 5, max_genus: int = 2) -> List[str]:
    """Labeling conventions under which the oracle matches the closed formula on all
    one-part cases up to the given degree and genus."""
    from .partitions import partitions

    fits = []
    for conv in ("both", "source", "target", "none"):
        ok = True
        for d in range(1, max_degree + 1):
            for mu in partitions(d):
                for g in range(max_genus + 1):
                    if hurwitz_oracle(g, (d,), mu, conv) != gjv_hurwitz(g, mu):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            fits.append(conv)
    return fits


def k0_branch(g: int) -> Fraction:
    """Coef_{z^{2g}} 1/S(z), the l=0 value of the k=0 branch."""
    if g < 1:
        raise ValueError("k=0 branch needs g >= 1")
    return _r_coeffs(g)[g]


# classical intersection numbers --------------------------------------------------------

def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _splits(items: Tuple[int, ...]):
    """Ordered pairs (I, J) of sub-multisets with I + J = items, by position."""
    n = len(items)
    for mask in range(1 << n):
        yield (tuple(items[i] for i in range(n) if mask >> i & 1),
               tuple(items[i] for i in range(n) if not mask >> i & 1))


@lru_cache(maxsize=None)
def _wk(d: Tuple[int, ...], g: int) -> Fraction:
    n = len(d)
    if g < 0 or any(x < 0 for x in d) or sum(d) != 3 * g - 3 + n:
        return Fraction(0)
    if 2 * g - 2 + n <= 0:
        return Fraction(0)
    if d == (0, 0, 0) and g == 0:
        return Fraction(1)
    if d == (1,) and g == 1:
        return Fraction(1, 24)
    if 0 in d:
        rest = list(d)
        rest.remove(0)
        out = Fraction(0)
        for j, x in enumerate(rest):
            if x:
                out += _wk(tuple(sorted(rest[:j] + [x - 1] + rest[j + 1:])), g)
        return out
    # DVV recursion on the largest index k + 1 >= 1
    d = tuple(sorted(d))
    k = d[-1] - 1
    S = d[:-1]
    total = Fraction(0)
    for j, x in enumerate(S):
        rest = S[:j] + S[j + 1:]
        total += Fraction(_double_factorial(2 * k + 2 * x + 1), _double_factorial(2 * x - 1)) * \
            _wk(tuple(sorted(rest + (k + x,))), g)
    quad = Fraction(0)
    for a in range(k):
        b = k - 1 - a
        w = _double_factorial(2 * a + 1) * _double_factorial(2 * b + 1)
        quad += w * _wk(tuple(sorted(S + (a, b))), g - 1)
        for I, J in _splits(S):
            for g1 in range(g + 1):
                quad += w * _wk(tuple(sorted(I + (a,))), g1) * _wk(tuple(sorted(J + (b,))), g - g1)
    total += quad / 2
    return total / _double_factorial(2 * k + 3)


def witten_kontsevich(d: Sequence[int], g: int) -> Fraction:
    """<tau_{d_1}...tau_{d_n}>_g on the moduli of curves, by the string equation and DVV."""
    return _wk(tuple(sorted(int(x) for x in d)), g)
