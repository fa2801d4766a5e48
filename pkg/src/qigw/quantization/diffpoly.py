"""Differential polynomials in u_0, u_1, ... with formal parameters eps and hbar."""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Mapping, Tuple

from ..exact import GaussianRational, I, format_number, parse_number

Key = Tuple[int, int, Tuple[int, ...]]  # (eps power, hbar power, exponents of u_0..u_K)

__all__ = ["DiffPoly", "dx", "var_deriv", "hamiltonian_density", "load_density", "parse_density", "dump_density",
           "format_monomial", "DensityFormatError"]


class DensityFormatError(ValueError):
    pass


def _trim(e: Iterable[int]) -> Tuple[int, ...]:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


class DiffPoly:
    """Finite sum of ``c * eps^a * hbar^b * prod u_i^{e_i}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        clean: Dict[Key, object] = {}
        for (a, b, e), c in (terms or {}).items():
            if c:
                k = (a, b, _trim(e))
                v = clean.get(k, 0) + c
                if v:
                    clean[k] = v
                else:
                    clean.pop(k, None)
        self.terms = clean

    @classmethod
    def u(cls, i: int = 0) -> "DiffPoly":
        return cls({(0, 0, (0,) * i + (1,)): Fraction(1)})

    @classmethod
    def const(cls, c, eps: int = 0, hbar: int = 0) -> "DiffPoly":
        return cls({(eps, hbar, ()): c})

    # ring structure ------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return DiffPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def scale(self, c) -> "DiffPoly":
        return DiffPoly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            return self.scale(other)
        out: Dict[Key, object] = {}
        for (a1, b1, e1), c1 in self.terms.items():
            for (a2, b2, e2), c2 in other.terms.items():
                n = max(len(e1), len(e2))
                e = tuple((e1[i] if i < len(e1) else 0) + (e2[i] if i < len(e2) else 0) for i in range(n))
                k = (a1 + a2, b1 + b2, e)
                out[k] = out.get(k, 0) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = DiffPoly.const(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            other = _coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # calculus ---------------------------------------------------------------------
    def partial(self, i: int) -> "DiffPoly":
        """d/du_i."""
        out = {}
        for (a, b, e), c in self.terms.items():
            if i < len(e) and e[i]:
                ne = list(e)
                ne[i] -= 1
                out[(a, b, tuple(ne))] = c * e[i]
        return DiffPoly(out)

    def max_index(self) -> int:
        return max((len(e) - 1 for _, _, e in self.terms), default=-1)

    # inspection ---------------------------------------------------------------------
    def coefficient(self, eps: int, hbar: int, exps: Iterable[int] = ()):
        return self.terms.get((eps, hbar, _trim(exps)), 0)

    def orders(self, eps: int, hbar: int) -> "DiffPoly":
        """The part with exactly this eps and hbar power, as a DiffPoly without them."""
        return DiffPoly({(0, 0, e): c for (a, b, e), c in self.terms.items() if a == eps and b == hbar})

    def truncate(self, max_eps: int, max_hbar: int) -> "DiffPoly":
        return DiffPoly({k: c for k, c in self.terms.items() if k[0] <= max_eps and k[1] <= max_hbar})

    def u_free(self) -> "DiffPoly":
        return DiffPoly({k: c for k, c in self.terms.items() if not k[2]})

    def differential_degrees(self) -> set:
        """Degrees with deg u_i = i and deg eps = -1."""
        return {sum(i * x for i, x in enumerate(e)) - a for a, _, e in self.terms}

    def __repr__(self):
        return f"DiffPoly({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        return "\n".join(format_monomial(k, c) for k, c in sorted(self.terms.items()))


def _coerce(x) -> DiffPoly:
    if isinstance(x, DiffPoly):
        return x
    return DiffPoly.const(x)


def dx(f: DiffPoly) -> DiffPoly:
    """sum_d u_{d+1} df/du_d."""
    out = DiffPoly()
    for i in range(f.max_index() + 1):
        out = out + f.partial(i) * DiffPoly.u(i + 1)
    return out


def var_deriv(f: DiffPoly) -> DiffPoly:
    """sum_i (-dx)^i df/du_i."""
    out = DiffPoly()
    for i in range(f.max_index() + 1):
        term = f.partial(i)
        for _ in range(i):
            term = -dx(term)
        out = out + term
    return out


# built-in densities ------------------------------------------------------------------

def _density(entries) -> DiffPoly:
    return DiffPoly({(a, b, e): c for a, b, e, c in entries})


_MINUS_I = GaussianRational(0, -1)


def hamiltonian_density(d: int) -> DiffPoly:
    """Densities of the quantum Hamiltonians H_1 and H_2."""
    F = Fraction
    if d == 1:
        return _density([
            (0, 0, (3,), F(1, 6)),
            (2, 0, (1, 0, 1), F(1, 24)),
            (0, 1, (1,), _MINUS_I * F(1, 24)),
        ])
    if d == 2:
        return _density([
            (0, 0, (4,), F(1, 24)),
            (2, 0, (2, 0, 1), F(1, 48)),
            (4, 0, (1, 0, 0, 0, 1), F(1, 480)),
            (0, 1, (1, 0, 1), _MINUS_I * F(2, 48)),
            (0, 1, (2,), _MINUS_I * F(1, 48)),
            (2, 1, (1,), _MINUS_I * F(1, 2880)),
        ])
    raise ValueError(f"no built-in density for d={d}; load one from a file")


# text format --------------------------------------------------------------------------

def format_monomial(key: Key, c) -> str:
    a, b, e = key
    parts = [format_number(c)]
    if a:
        parts.append(f"eps^{a}")
    if b:
        parts.append(f"hbar^{b}")
    us = " ".join(f"u{i}^{x}" for i, x in enumerate(e) if x)
    if us:
        parts.append(us)
    return " * ".join(parts)


_FACTOR = re.compile(r"^(eps|hbar|u(\d+))(?:\^(\d+))?$")


def parse_density(text: str, source: str = "<string>") -> DiffPoly:
    """Parse one monomial per line: ``COEFF * eps^A * hbar^B * u0^E0 u1^E1 ...``."""
    terms: Dict[Key, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = [t for t in line.split() if t != "*"]
        try:
            coef = parse_number(tokens[0])
        except ValueError as exc:
            raise DensityFormatError(f"{source}:{lineno}: bad coefficient {tokens[0]!r}: {exc}") from None
        a = b = 0
        exps: Dict[int, int] = {}
        for tok in tokens[1:]:
            for piece in (p for p in tok.split("*") if p):
                m = _FACTOR.match(piece)
                if not m:
                    raise DensityFormatError(f"{source}:{lineno}: cannot read factor {piece!r}")
                power = int(m.group(3)) if m.group(3) is not None else 1
                if m.group(1) == "eps":
                    a += power
                elif m.group(1) == "hbar":
                    b += power
                else:
                    idx = int(m.group(2))
                    exps[idx] = exps.get(idx, 0) + power
        e = tuple(exps.get(i, 0) for i in range(max(exps) + 1)) if exps else ()
        k = (a, b, _trim(e))
        terms[k] = terms.get(k, 0) + coef
    return DiffPoly(terms)


def load_density(path: str | Path) -> DiffPoly:
    p = Path(path)
    return parse_density(p.read_text(), str(p))


def dump_density(f: DiffPoly) -> str:
    return str(f) + "\n"
