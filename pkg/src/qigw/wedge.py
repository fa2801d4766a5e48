"""Vacuum expectations of words in the operators alpha_k and E_r(z).

Two independent evaluators live here:

* :func:`vev` runs the commutation-rule rewrite system (move the rightmost
  non-negative-energy operator to the right until it annihilates the vacuum).
* :func:`fock_vev` acts literally with the fermionic operators on
  semi-infinite wedge states and reads off the vacuum coefficient.

Expectations contain ``1/varsigma(L)`` factors.  For a single-variable ``L``
the pole is kept as a monomial prefactor (:class:`ShiftedSeries`); for
composite ``L`` it is carried as an explicit denominator and divided out
exactly once all contributions have been summed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .series import TruncatedSeries, compose_linear, linear_poly

__all__ = [
    "LinearForm",
    "Alpha",
    "E",
    "word_energy",
    "ShiftedSeries",
    "vev",
    "fock_vev",
    "parse_word",
    "format_word",
    "CutoffError",
    "RewriteError",
]


class RewriteError(RuntimeError):
    pass


class CutoffError(RuntimeError):
    pass


# linear forms ---------------------------------------------------------------

class LinearForm:
    """Integer linear combination of formal variables, e.g. ``2*z1 - z2``."""

    __slots__ = ("items",)

    def __init__(self, coeffs: Mapping[str, int] | Iterable[Tuple[str, int]] = ()):
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        acc: Dict[str, int] = {}
        for v, c in coeffs:
            acc[v] = acc.get(v, 0) + int(c)
        object.__setattr__(self, "items", tuple(sorted((v, c) for v, c in acc.items() if c)))

    def __setattr__(self, name, value):
        raise AttributeError("LinearForm is immutable")

    @classmethod
    def of(cls, var: str, c: int = 1) -> "LinearForm":
        return cls({var: c})

    def as_dict(self) -> Dict[str, int]:
        return dict(self.items)

    def __bool__(self):
        return bool(self.items)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.items + other.items)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "LinearForm":
        return LinearForm((v, c * x) for v, x in self.items)

    def variables(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.items)

    def primitive(self) -> Tuple[int, "LinearForm"]:
        """Split as ``c * L`` with ``L`` primitive and its first coefficient positive."""
        if not self.items:
            raise ZeroDivisionError("zero linear form")
        g = 0
        for _, c in self.items:
            g = gcd(g, c)
        if self.items[0][1] < 0:
            g = -g
        return g, LinearForm((v, c // g) for v, c in self.items)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __lt__(self, other):
        return self.items < other.items

    def __repr__(self):
        return f"LinearForm({str(self)!r})"

    def __str__(self):
        if not self.items:
            return "0"
        out = ""
        for v, c in self.items:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = v if mag == 1 else f"{mag}{v}"
            out += (sign if out or c < 0 else "") + term
        return out


ZERO_FORM = LinearForm()


# generators -----------------------------------------------------------------

@dataclass(frozen=True)
class Alpha:
    k: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("alpha_0 is not a generator")

    @property
    def energy(self) -> int:
        return self.k

    @property
    def r(self) -> int:
        return self.k

    @property
    def arg(self) -> LinearForm:
        return ZERO_FORM

    def __str__(self):
        return f"a{self.k}"


@dataclass(frozen=True)
class E:
    r: int
    arg: LinearForm

    @property
    def energy(self) -> int:
        return self.r

    def __str__(self):
        return f"E{self.r}({self.arg})"


Generator = Alpha | E
Word = Tuple[Generator, ...]


def make_generator(r: int, arg: LinearForm) -> Generator:
    """E_r(arg), identified with alpha_r when the argument vanishes."""
    if not arg:
        if r == 0:
            raise RewriteError("E_0(0) is singular")
        return Alpha(r)
    return E(r, arg)


def word_energy(word: Sequence[Generator]) -> int:
    return sum(g.energy for g in word)


_TOKEN = re.compile(r"\s*(?:a(?P<ak>-?\d+)|E(?P<er>-?\d+)\((?P<arg>[^)]*)\))")
_TERM = re.compile(r"([+-]?)(\d*)\*?([A-Za-z_]\w*)")


def parse_linear_form(text: str) -> LinearForm:
    text = text.replace(" ", "")
    if text in ("", "0"):
        return ZERO_FORM
    pos, acc = 0, []
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad linear form {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        acc.append((m.group(3), sign * int(m.group(2) or 1)))
        pos = m.end()
    return LinearForm(acc)


def parse_word(text: str) -> Word:
    """Parse e.g. ``"a2 E0(z) E-1(z+2w) a-2"``."""
    out: List[Generator] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        if m.group("ak") is not None:
            out.append(Alpha(int(m.group("ak"))))
        else:
            out.append(make_generator(int(m.group("er")), parse_linear_form(m.group("arg"))))
        pos = m.end()
        while pos < len(text) and text[pos] in " ,*":
            pos += 1
    return tuple(out)


def format_word(word: Sequence[Generator]) -> str:
    return " ".join(str(g) for g in word)


# monomial-prefactored series --------------------------------------------------

class ShiftedSeries:
    """``numerator / prod(z_i ** shift_i)``.

    Known up to total (Laurent) degree ``numerator.cap - sum(shift)``.
    """

    __slots__ = ("numerator", "shift")

    def __init__(self, numerator: TruncatedSeries, shift: Sequence[int] | None = None):
        self.numerator = numerator
        self.shift = tuple(shift) if shift is not None else (0,) * len(numerator.variables)

    @property
    def variables(self):
        return self.numerator.variables

    @property
    def cap(self) -> int:
        return self.numerator.cap - sum(self.shift)

    @classmethod
    def constant(cls, c, variables, cap: int) -> "ShiftedSeries":
        return cls(TruncatedSeries.constant(Fraction(c), variables, cap))

    @classmethod
    def from_series(cls, s: TruncatedSeries) -> "ShiftedSeries":
        return cls(s)

    def _times_monomial(self, exps: Sequence[int]) -> TruncatedSeries:
        d = sum(exps)
        if not d:
            return self.numerator
        num = self.numerator
        terms = {tuple(a + b for a, b in zip(e, exps)): c for e, c in num.terms.items()}
        return TruncatedSeries(num.variables, num.cap + d, terms)

    def with_shift(self, shift: Sequence[int]) -> "ShiftedSeries":
        extra = [s - t for s, t in zip(shift, self.shift)]
        if any(x < 0 for x in extra):
            raise ValueError("can only enlarge the shift")
        return ShiftedSeries(self._times_monomial(extra), shift)

    def __add__(self, other: "ShiftedSeries") -> "ShiftedSeries":
        if not isinstance(other, ShiftedSeries):
            if not other:
                return self
            other = ShiftedSeries.constant(other, self.variables, self.numerator.cap)
        s = tuple(max(a, b) for a, b in zip(self.shift, other.shift))
        return ShiftedSeries(self.with_shift(s).numerator + other.with_shift(s).numerator, s)

    __radd__ = __add__

    def __neg__(self):
        return ShiftedSeries(-self.numerator, self.shift)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "ShiftedSeries":
        if isinstance(other, ShiftedSeries):
            return ShiftedSeries(
                self.numerator * other.numerator,
                tuple(a + b for a, b in zip(self.shift, other.shift)),
            )
        if isinstance(other, TruncatedSeries):
            return ShiftedSeries(self.numerator * other, self.shift)
        return ShiftedSeries(self.numerator.scale(other), self.shift)

    __rmul__ = __mul__

    def divide_by_variable(self, index: int) -> "ShiftedSeries":
        s = list(self.shift)
        s[index] += 1
        return ShiftedSeries(self.numerator, s)

    def normalized(self) -> "ShiftedSeries":
        """Cancel prefactor powers against common variable factors of the numerator."""
        num, shift = self.numerator, list(self.shift)
        terms = num.terms
        cap = num.cap
        for i in range(len(shift)):
            if not shift[i]:
                continue
            low = min((e[i] for e in terms), default=shift[i])
            k = min(low, shift[i])
            if k:
                terms = {
                    tuple(x - k if j == i else x for j, x in enumerate(e)): c
                    for e, c in terms.items()
                }
                shift[i] -= k
                cap -= k
        return ShiftedSeries(TruncatedSeries(num.variables, cap, terms), shift)

    def truncate(self, cap: int) -> "ShiftedSeries":
        if cap > self.cap:
            raise ValueError(f"series only known to degree {self.cap}")
        return ShiftedSeries(self.numerator.truncate(cap + sum(self.shift)), self.shift)

    def coefficients(self) -> Dict[Tuple[int, ...], object]:
        """Laurent coefficients up to total degree ``cap``."""
        return {
            tuple(a - b for a, b in zip(e, self.shift)): c
            for e, c in self.numerator.terms.items()
            if sum(e) - sum(self.shift) <= self.cap
        }

    def coefficient(self, exps: Sequence[int]):
        if sum(exps) > self.cap:
            raise ValueError(f"degree {sum(exps)} beyond known cap {self.cap}")
        return self.numerator.coefficient(tuple(a + b for a, b in zip(exps, self.shift)))

    def to_series(self) -> TruncatedSeries:
        n = self.normalized()
        if any(n.shift):
            raise ArithmeticError(f"series has negative powers: shift {n.shift}")
        return n.numerator

    def agrees_with(self, other: "ShiftedSeries", cap: int | None = None) -> bool:
        c = min(self.cap, other.cap) if cap is None else cap
        a = {e: v for e, v in self.coefficients().items() if sum(e) <= c}
        b = {e: v for e, v in other.coefficients().items() if sum(e) <= c}
        return a == b

    def __eq__(self, other):
        if isinstance(other, ShiftedSeries):
            return self.cap == other.cap and self.agrees_with(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        mono = " ".join(f"{v}^{k}" for v, k in zip(self.variables, self.shift) if k)
        return f"ShiftedSeries(({self.numerator}) / ({mono or '1'}))"


# sums of ShiftedSeries over composite linear-form denominators -----------------

DenKey = Tuple[LinearForm, ...]


class _Partial:
    """Finite sum of ``ShiftedSeries / prod(L)`` over composite forms ``L``."""

    __slots__ = ("parts",)

    def __init__(self, parts: Dict[DenKey, ShiftedSeries] | None = None):
        self.parts = parts or {}

    def add(self, other: "_Partial", coef=None) -> None:
        for key, val in other.parts.items():
            if coef is not None:
                val = val * coef
            cur = self.parts.get(key)
            self.parts[key] = val if cur is None else cur + val

    def times(self, coef) -> "_Partial":
        return _Partial({k: v * coef for k, v in self.parts.items()})

    def times_inverse_varsigma(self, form: LinearForm, variables, cap: int) -> "_Partial":
        """Multiply by ``1/varsigma(form) = S(form)^{-1} / form``."""
        c, prim = form.primitive()
        rs = compose_linear("s_inv", form.as_dict(), variables, cap)
        out = {}
        if len(prim.items) == 1:
            idx = variables.index(prim.items[0][0])
            for key, val in self.parts.items():
                out[key] = (val * rs).divide_by_variable(idx) * Fraction(1, c)
        else:
            for key, val in self.parts.items():
                nk = tuple(sorted(key + (prim,)))
                v = (val * rs) * Fraction(1, c)
                cur = out.get(nk)
                out[nk] = v if cur is None else cur + v
        return _Partial(out)

    def finalize(self, variables) -> ShiftedSeries:
        if not self.parts:
            return None
        need: Dict[LinearForm, int] = {}
        for key in self.parts:
            counts: Dict[LinearForm, int] = {}
            for f in key:
                counts[f] = counts.get(f, 0) + 1
            for f, m in counts.items():
                need[f] = max(need.get(f, 0), m)
        total = None
        for key, val in self.parts.items():
            missing = dict(need)
            for f in key:
                missing[f] -= 1
            for f, m in missing.items():
                for _ in range(m):
                    # multiplying by an exact linear form gains one known degree
                    num = val.numerator
                    lin = linear_poly(f.as_dict(), variables, num.cap + 1)
                    num = TruncatedSeries(variables, num.cap + 1, num._mul(lin, num.cap + 1))
                    val = ShiftedSeries(num, val.shift)
            total = val if total is None else total + val
        num = total.numerator
        for f, m in need.items():
            for _ in range(m):
                num = num.divide_linear(f.as_dict())
        return ShiftedSeries(num, total.shift)


# rewrite-system evaluation -----------------------------------------------------

def _commutator(g: Generator, h: Generator):
    """[g, h] as ``('scalar', c)``, ``('op', coefficient_form, generator)`` or None."""
    a, b = g.energy, h.energy
    if isinstance(g, Alpha) and isinstance(h, Alpha):
        return ("scalar", a) if a + b == 0 else None
    z, w = g.arg, h.arg
    total = z + w
    if a + b == 0 and not total:
        return ("scalar", a)
    coef = w.scale(a) - z.scale(b)
    if not coef:
        return None
    return ("op", coef, make_generator(a + b, total))


class _RewriteEvaluator:
    def __init__(self, variables: Tuple[str, ...], cap: int, fuel: int):
        self.variables = variables
        self.cap = cap
        self.fuel = fuel
        self.memo: Dict[Word, _Partial] = {}

    def one(self) -> _Partial:
        return _Partial({(): ShiftedSeries.constant(1, self.variables, self.cap)})

    def run(self, word: Word) -> _Partial:
        hit = self.memo.get(word)
        if hit is not None:
            return hit
        self.fuel -= 1
        if self.fuel < 0:
            raise RewriteError("rewrite fuel exhausted")
        res = self._step(word)
        self.memo[word] = res
        return res

    def _step(self, word: Word) -> _Partial:
        # Termination: every branch either shortens the word (commutator) or
        # moves the chosen operator one slot right, so (length, position) drops.
        if word_energy(word) != 0:
            return _Partial()
        if not word:
            return self.one()
        j = max(i for i, g in enumerate(word) if g.energy >= 0)
        g = word[j]
        if j == len(word) - 1:
            if g.energy > 0:
                return _Partial()
            if not g.arg:
                raise RewriteError("E_0(0) reached the vacuum")
            return self.run(word[:-1]).times_inverse_varsigma(g.arg, self.variables, self.cap)
        h = word[j + 1]
        out = _Partial()
        out.add(self.run(word[:j] + (h, g) + word[j + 2:]))
        comm = _commutator(g, h)
        if comm is None:
            return out
        if comm[0] == "scalar":
            out.add(self.run(word[:j] + word[j + 2:]).times(Fraction(comm[1])))
        else:
            _, form, gen = comm
            coef = compose_linear("varsigma", form.as_dict(), self.variables, self.cap)
            out.add(self.run(word[:j] + (gen,) + word[j + 2:]).times(coef))
        return out


def _word_variables(word: Sequence[Generator]) -> Tuple[str, ...]:
    vs = set()
    for g in word:
        vs.update(g.arg.variables())
    return tuple(sorted(vs))


def _check_variables(word, variables):
    variables = tuple(variables) if variables is not None else _word_variables(word)
    missing = set(_word_variables(word)) - set(variables)
    if missing:
        raise ValueError(f"undeclared variables {sorted(missing)}")
    if not variables:
        variables = ("z",)
    return variables


def _evaluate_at_cap(word, variables, cap, build) -> ShiftedSeries:
    """Increase the working cap until the finalised result is valid to ``cap``."""
    n_e = sum(1 for g in word if isinstance(g, E))
    work = cap + n_e
    while True:
        partial = build(work)
        res = partial.finalize(variables)
        if res is None:
            return ShiftedSeries(TruncatedSeries(variables, cap))
        if res.cap >= cap:
            return res.normalized().truncate(cap)
        work += cap - res.cap


def vev(word: Sequence[Generator], variables: Sequence[str] | None = None, cap: int = 6,
        fuel: int = 2_000_000) -> ShiftedSeries:
    """Vacuum expectation ``<word>`` through the commutation rewrite system.

    The result is known to total degree ``cap`` (counting negative powers).
    """
    word = tuple(word)
    variables = _check_variables(word, variables)
    return _evaluate_at_cap(
        word, variables, cap, lambda w: _RewriteEvaluator(variables, w, fuel).run(word)
    )


# literal Fock space evaluation ------------------------------------------------------
# A charge-0 state is (particles, holes): positive occupied positions and negative
# empty positions, stored as doubled half-integers (odd ints).

State = Tuple[Tuple[int, ...], Tuple[int, ...]]
VACUUM: State = ((), ())


def _occupied(state: State, k2: int) -> bool:
    parts, holes = state
    return k2 in parts if k2 > 0 else k2 not in holes


def _count_above(state: State, k2: int) -> int:
    parts, holes = state
    n = sum(1 for p in parts if p > k2)
    if k2 < 0:
        n += (-k2 - 1) // 2 - sum(1 for h in holes if h > k2)
    return n


def _create(state: State, k2: int):
    if _occupied(state, k2):
        return None
    sign = -1 if _count_above(state, k2) % 2 else 1
    parts, holes = state
    if k2 > 0:
        return sign, (tuple(sorted(parts + (k2,))), holes)
    return sign, (parts, tuple(h for h in holes if h != k2))


def _annihilate(state: State, k2: int):
    if not _occupied(state, k2):
        return None
    sign = -1 if _count_above(state, k2) % 2 else 1
    parts, holes = state
    if k2 > 0:
        return sign, (tuple(p for p in parts if p != k2), holes)
    return sign, (parts, tuple(sorted(holes + (k2,))))


def _normal_ordered(state: State, r: int, k2: int):
    """Apply :psi_{k-r} psi_k^*: to a basis state; k2 = 2k."""
    t2 = k2 - 2 * r
    if k2 > 0:
        first = _annihilate(state, k2)
        if first is None:
            return None
        second = _create(first[1], t2)
        if second is None:
            return None
        return first[0] * second[0], second[1]
    first = _create(state, t2)
    if first is None:
        return None
    second = _annihilate(first[1], k2)
    if second is None:
        return None
    return -first[0] * second[0], second[1]


def _state_extent(state: State) -> Fraction:
    parts, holes = state
    return Fraction(max((abs(x) for x in parts + holes), default=0), 2)


def fock_vev(word: Sequence[Generator], variables: Sequence[str] | None = None, cap: int = 6,
             cutoff: Fraction | float | int | None = None) -> ShiftedSeries:
    """Vacuum expectation by literal action on wedge states.

    Every ``E_r(z)`` is expanded as the sum over half-integers ``|k| <= cutoff`` of
    ``e^{z(k-r/2)} :psi_{k-r} psi_k^*:`` plus ``delta_{r,0}/varsigma(z)``.  A state
    whose excitations reach too close to the cutoff raises :class:`CutoffError`.
    """
    word = tuple(word)
    variables = _check_variables(word, variables)
    if cutoff is None:
        cutoff = Fraction(sum(abs(g.energy) for g in word)) + Fraction(1, 2)
    cutoff = Fraction(cutoff)
    if cutoff.denominator != 2:
        raise ValueError("cutoff must be a half-integer")

    def build(work: int) -> _Partial:
        one = ShiftedSeries.constant(1, variables, work)
        vec: Dict[State, _Partial] = {VACUUM: _Partial({(): one})}
        for g in reversed(word):
            r = g.energy
            new: Dict[State, _Partial] = {}
            for state, coeff in vec.items():
                if _state_extent(state) + abs(r) > cutoff:
                    raise CutoffError(
                        f"state {state} (doubled half-integers) too close to cutoff {cutoff} for {g}"
                    )
                k2 = -int(2 * cutoff)
                while k2 <= int(2 * cutoff):
                    hit = _normal_ordered(state, r, k2)
                    if hit is not None:
                        sign, target = hit
                        weight = Fraction(k2 - r, 2)
                        form = g.arg.as_dict()
                        if form:
                            factor = compose_linear(
                                "exp", {v: c * weight for v, c in form.items()}, variables, work
                            ).scale(sign)
                        else:
                            factor = Fraction(sign)
                        new.setdefault(target, _Partial()).add(coeff.times(factor))
                    k2 += 2
                if r == 0:
                    new.setdefault(state, _Partial()).add(
                        coeff.times_inverse_varsigma(g.arg, variables, work)
                    )
            vec = {s: c for s, c in new.items() if c.parts}
        return vec.get(VACUUM, _Partial())

    return _evaluate_at_cap(word, variables, cap, build)
