"""Multivariate polynomials and total-degree truncated power series.

Coefficients are exact field elements: ``Fraction`` on the real pipelines and
:class:`~qigw.exact.GaussianRational` where the imaginary unit shows up.  Both
types interoperate, so a series may mix them.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .exact import format_number

Exps = Tuple[int, ...]

__all__ = [
    "MultiPoly",
    "TruncatedSeries",
    "varsigma",
    "s_series",
    "exp_series",
    "compose",
    "compose_linear",
    "linear_poly",
]


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


class MultiPoly:
    """Exact polynomial in a fixed, ordered list of variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exps, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exps, object] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.variables}")
                if c:
                    clean[e] = c
        self.terms = clean

    # constructors -----------------------------------------------------------
    @classmethod
    def constant(cls, c, variables: Sequence[str]):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    def _new(self, terms):
        out = object.__new__(type(self))
        out.variables = self.variables
        out.terms = terms
        return out

    # inspection -------------------------------------------------------------
    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        """Largest total degree of a stored monomial (-1 for the zero polynomial)."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def homogeneous_parts(self) -> Dict[int, Dict[Exps, object]]:
        parts: Dict[int, Dict[Exps, object]] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return parts

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.variables)

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if not other:
                return self
            other = MultiPoly.constant(other, self.variables)
        if isinstance(other, TruncatedSeries) and not isinstance(self, TruncatedSeries):
            return other + self
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            v = c if v is None else v + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._combine(other, terms)

    __radd__ = __add__

    def _combine(self, other, terms):
        return self._new(terms)

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return self._new({})
        return self._new({e: v * c for e, v in self.terms.items() if v * c})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        if isinstance(other, TruncatedSeries) and not isinstance(self, TruncatedSeries):
            return other * self
        self._check(other)
        return self._new(self._mul(other, None))

    def __rmul__(self, other):
        return self.scale(other)

    def _mul(self, other: "MultiPoly", cap: int | None):
        a_items = list(self.terms.items())
        b_items = sorted(((sum(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0])
        out: Dict[Exps, object] = {}
        get = out.get
        for ea, ca in a_items:
            da = sum(ea) if cap is not None else 0
            for db, eb, cb in b_items:
                if cap is not None and da + db > cap:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                v = get(e)
                p = ca * cb
                out[e] = p if v is None else v + p
        return {e: c for e, c in out.items() if c}

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self._new({(0,) * len(self.variables): Fraction(1)})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if not other:
            return not self.terms
        return self.terms == {(0,) * len(self.variables): other}

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # transformations --------------------------------------------------------
    def embed(self, variables: Sequence[str]):
        """Re-express in a larger (or reordered) variable list."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, x in zip(idx, e):
                ne[i] = x
            terms[tuple(ne)] = c
        out = self._new(terms)
        out.variables = variables
        return out

    def rename(self, mapping: Mapping[str, str]):
        out = self._new(dict(self.terms))
        out.variables = tuple(mapping.get(v, v) for v in self.variables)
        return out

    def evaluate(self, point: Mapping[str, object]):
        """Substitute numbers for every variable."""
        vals = [point[v] for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def partial_evaluate(self, point: Mapping[str, object]) -> "MultiPoly":
        """Substitute numbers for some variables, dropping them from the variable list."""
        keep = [i for i, v in enumerate(self.variables) if v not in point]
        gone = [(i, point[v]) for i, v in enumerate(self.variables) if v in point]
        terms: Dict[Exps, object] = {}
        for e, c in self.terms.items():
            t = c
            for i, x in gone:
                if e[i]:
                    t = t * x ** e[i]
            k = tuple(e[i] for i in keep)
            terms[k] = terms.get(k, 0) + t
        return MultiPoly([self.variables[i] for i in keep], terms)

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            mono = " ".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.variables, e) if k
            )
            coef = format_number(self.terms[e])
            parts.append(f"{coef} * {mono}" if mono else coef)
        return " + ".join(parts)


class TruncatedSeries(MultiPoly):
    """Power series known up to (and including) total degree ``cap``."""

    __slots__ = ("cap",)

    def __init__(self, variables: Sequence[str], cap: int, terms: Mapping[Exps, object] | None = None):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        super().__init__(variables, terms)
        self.cap = cap
        self.terms = {e: c for e, c in self.terms.items() if sum(e) <= cap}

    @classmethod
    def constant(cls, c, variables: Sequence[str], cap: int = 0):
        return cls(variables, cap, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str], cap: int = 1):
        return cls(variables, cap, MultiPoly.var(name, variables).terms)

    @classmethod
    def from_poly(cls, poly: MultiPoly, cap: int):
        return cls(poly.variables, cap, poly.terms)

    def _new(self, terms, cap=None):
        out = object.__new__(TruncatedSeries)
        out.variables = self.variables
        out.cap = self.cap if cap is None else cap
        out.terms = terms
        return out

    def _combine(self, other, terms):
        cap = min(self.cap, other.cap) if isinstance(other, TruncatedSeries) else self.cap
        return self._new({e: c for e, c in terms.items() if sum(e) <= cap}, cap)

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if not other:
                return self
            other = MultiPoly.constant(other, self.variables)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            v = c if v is None else v + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._combine(other, terms)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        cap = min(self.cap, other.cap) if isinstance(other, TruncatedSeries) else self.cap
        # multiplying by a polynomial whose low part vanishes still only knows up to cap
        return self._new(self._mul(other, cap), cap)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a series; use reciprocal()")
        result = TruncatedSeries.constant(Fraction(1), self.variables, self.cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap > self.cap:
            raise ValueError(f"cannot raise cap from {self.cap} to {cap}")
        return self._new({e: c for e, c in self.terms.items() if sum(e) <= cap}, cap)

    def to_poly(self) -> MultiPoly:
        return MultiPoly(self.variables, self.terms)

    def embed(self, variables):
        out = MultiPoly.embed(self, variables)
        out.cap = self.cap
        return out

    def rename(self, mapping):
        out = MultiPoly.rename(self, mapping)
        out.cap = self.cap
        return out

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (
                self.variables == other.variables
                and self.cap == other.cap
                and self.terms == other.terms
            )
        return MultiPoly.__eq__(self, other)

    def __hash__(self):
        return hash((self.variables, self.cap, frozenset(self.terms.items())))

    def agrees_with(self, other: "TruncatedSeries", cap: int | None = None) -> bool:
        """Coefficientwise equality up to a common cap."""
        c = min(self.cap, other.cap) if cap is None else cap
        return self.truncate(c).terms == other.truncate(c).terms

    def reciprocal(self) -> "TruncatedSeries":
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError(
                "reciprocal needs a nonzero constant term; factor out the leading monomial first"
            )
        inv0 = Fraction(1) / c0 if not hasattr(c0, "inverse") else c0.inverse()
        parts = self.homogeneous_parts()
        out_parts: Dict[int, Dict[Exps, object]] = {0: {(0,) * len(self.variables): inv0}}
        for d in range(1, self.cap + 1):
            acc: Dict[Exps, object] = {}
            for j in range(1, d + 1):
                sj = parts.get(j)
                rj = out_parts.get(d - j)
                if not sj or not rj:
                    continue
                for ea, ca in sj.items():
                    for eb, cb in rj.items():
                        e = _add_exps(ea, eb)
                        acc[e] = acc.get(e, 0) + ca * cb
            cur = {e: -c * inv0 for e, c in acc.items() if c}
            if cur:
                out_parts[d] = cur
        terms = {}
        for p in out_parts.values():
            terms.update(p)
        return self._new(terms)

    def divide_linear(self, form: Mapping[str, object]) -> "TruncatedSeries":
        """Exact quotient by a linear form ``sum c_v * v``.

        Each homogeneous component must be divisible; the result is known one
        degree less far than the input.
        """
        form = {v: c for v, c in form.items() if c}
        if not form:
            raise ZeroDivisionError("division by the zero linear form")
        pivot = max(form, key=lambda v: (self.variables.index(v) if v in self.variables else -1))
        if any(v not in self.variables for v in form):
            raise ValueError(f"linear form {form} uses undeclared variables")
        p = self.variables.index(pivot)
        cp = form[pivot]
        inv = Fraction(1) / cp if not hasattr(cp, "inverse") else cp.inverse()
        lin = [(self.variables.index(v), c) for v, c in form.items()]
        quotient: Dict[Exps, object] = {}
        for d, part in self.homogeneous_parts().items():
            rem = dict(part)
            while rem:
                e = max(rem, key=lambda x: (x[p], x))
                if e[p] == 0:
                    raise ArithmeticError(f"series is not divisible by {form} in degree {d}")
                q = rem[e] * inv
                qe = list(e)
                qe[p] -= 1
                qe = tuple(qe)
                quotient[qe] = quotient.get(qe, 0) + q
                for i, c in lin:
                    te = list(qe)
                    te[i] += 1
                    te = tuple(te)
                    v = rem.get(te, 0) - q * c
                    if v:
                        rem[te] = v
                    else:
                        rem.pop(te, None)
        return self._new({e: c for e, c in quotient.items() if c and sum(e) <= self.cap - 1}, self.cap - 1)

    def __str__(self):
        return f"{MultiPoly.__str__(self)} + O(deg {self.cap + 1})"


# special series -------------------------------------------------------------

@lru_cache(maxsize=None)
def _varsigma_coeffs(cap: int) -> Tuple[Fraction, ...]:
    # varsigma(z) = 2 sinh(z/2): odd powers only
    return tuple(
        Fraction(1, 4 ** ((m - 1) // 2) * factorial(m)) if m % 2 else Fraction(0)
        for m in range(cap + 1)
    )


def _univariate(var: str, coeffs: Sequence, cap: int) -> TruncatedSeries:
    return TruncatedSeries((var,), cap, {(m,): c for m, c in enumerate(coeffs) if m <= cap})


def varsigma(var: str = "z", cap: int = 8) -> TruncatedSeries:
    """``e^{z/2} - e^{-z/2}`` truncated at total degree ``cap``."""
    if cap < 1:
        raise ValueError("varsigma needs cap >= 1")
    return _univariate(var, _varsigma_coeffs(cap), cap)


def s_series(var: str = "z", cap: int = 8) -> TruncatedSeries:
    """``varsigma(z)/z`` truncated at degree ``cap``."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    return _univariate(var, _varsigma_coeffs(cap + 1)[1:], cap)


def exp_series(var: str = "z", cap: int = 8) -> TruncatedSeries:
    return _univariate(var, [Fraction(1, factorial(m)) for m in range(cap + 1)], cap)


def linear_poly(form: Mapping[str, object], variables: Sequence[str], cap: int = 1) -> TruncatedSeries:
    variables = tuple(variables)
    terms = {}
    for v, c in form.items():
        e = [0] * len(variables)
        e[variables.index(v)] = 1
        terms[tuple(e)] = Fraction(c) if isinstance(c, int) else c
    return TruncatedSeries(variables, cap, terms)


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g)`` for univariate ``f`` and ``g`` without constant term."""
    if len(f.variables) != 1:
        raise ValueError("compose expects a univariate outer series")
    if g.constant_term():
        raise ValueError("compose needs an inner series with zero constant term")
    if g.is_zero():
        return TruncatedSeries.constant(f.constant_term(), g.variables, g.cap)
    v = g.min_degree()
    cap = min(g.cap, (f.cap + 1) * v - 1)
    g = g.truncate(cap)
    top = min(f.cap, cap // v)
    # Horner from the top coefficient down
    result = TruncatedSeries.constant(f.coefficient((top,)), g.variables, cap)
    for m in range(top - 1, -1, -1):
        result = result * g + f.coefficient((m,))
    return result


@lru_cache(maxsize=4096)
def _compose_linear_cached(kind: str, items: Tuple[Tuple[str, object], ...], variables: Tuple[str, ...], cap: int):
    outer = {"varsigma": varsigma, "s": s_series, "exp": exp_series, "s_inv": None}[kind]
    if kind == "s_inv":
        f = s_series("_t", cap).reciprocal()
    elif kind == "varsigma":
        f = outer("_t", max(cap, 1))
    else:
        f = outer("_t", cap)
    # expand sum_m f_m L^m directly; L is homogeneous of degree 1
    lin = linear_poly(dict(items), variables, cap)
    result = TruncatedSeries.constant(Fraction(0), variables, cap)
    power = TruncatedSeries.constant(Fraction(1), variables, cap)
    for m in range(cap + 1):
        c = f.coefficient((m,))
        if c:
            result = result + power.scale(c)
        if m < cap:
            power = power * lin
    return result


def compose_linear(kind: str, form: Mapping[str, object], variables: Sequence[str], cap: int) -> TruncatedSeries:
    """One of ``varsigma``, ``s``, ``s_inv`` (= 1/S) or ``exp`` evaluated at a linear form.

    Results are memoised; the form's coefficients must be hashable exact numbers.
    """
    items = tuple(sorted((v, c) for v, c in form.items() if c))
    if not items:
        const = {"varsigma": 0, "s": 1, "s_inv": 1, "exp": 1}[kind]
        return TruncatedSeries.constant(Fraction(const), variables, cap)
    return _compose_linear_cached(kind, items, tuple(variables), cap)
