"""Windowed algebra of p-monomials, the map phi, and Moyal-type products.

A monomial ``hbar^m eps^a p_{b_1} ... p_{b_s}`` is stored under the key
``(m, a, (b_1, ..., b_s))`` with sorted indices; its Fourier mode is ``sum b``.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import factorial
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from ..exact import GaussianRational, ipow
from .diffpoly import DiffPoly

PKey = Tuple[int, int, Tuple[int, ...]]

__all__ = [
    "WindowedPElement",
    "WindowError",
    "phi",
    "phi0_tilde",
    "phi_coefficient",
    "moyal_star",
    "tilde_star",
    "commutator",
    "commutator_coefficient",
]


class WindowError(ValueError):
    pass


class WindowedPElement:
    """Finite sum of p-monomials with indices in [-M, M]."""

    __slots__ = ("window", "terms")

    def __init__(self, window: int, terms: Mapping[PKey, object] | None = None):
        if window < 1:
            raise WindowError("window must be at least 1")
        self.window = window
        clean: Dict[PKey, object] = {}
        for (m, a, idx), c in (terms or {}).items():
            if not c:
                continue
            idx = tuple(sorted(idx))
            if idx and (idx[0] < -window or idx[-1] > window):
                raise WindowError(f"index outside window {window}: {idx}")
            k = (m, a, idx)
            v = clean.get(k, 0) + c
            if v:
                clean[k] = v
            else:
                clean.pop(k, None)
        self.terms = clean

    @classmethod
    def one(cls, window: int) -> "WindowedPElement":
        return cls(window, {(0, 0, ()): Fraction(1)})

    @classmethod
    def p(cls, a: int, window: int) -> "WindowedPElement":
        return cls(window, {(0, 0, (a,)): Fraction(1)})

    def _check(self, other: "WindowedPElement"):
        if self.window != other.window:
            raise WindowError(f"window mismatch: {self.window} vs {other.window}")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return WindowedPElement(self.window, t)

    def __neg__(self):
        return WindowedPElement(self.window, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WindowedPElement":
        return WindowedPElement(self.window, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        """Commutative (pointwise) product."""
        if not isinstance(other, WindowedPElement):
            return self.scale(other)
        self._check(other)
        out: Dict[PKey, object] = {}
        for (m1, a1, i1), c1 in self.terms.items():
            for (m2, a2, i2), c2 in other.terms.items():
                k = (m1 + m2, a1 + a2, tuple(sorted(i1 + i2)))
                out[k] = out.get(k, 0) + c1 * c2
        return WindowedPElement(self.window, out)

    def __eq__(self, other):
        return isinstance(other, WindowedPElement) and self.window == other.window and self.terms == other.terms

    __hash__ = None

    def modes(self) -> set:
        return {sum(idx) for _, _, idx in self.terms}

    def mode_part(self, A: int) -> "WindowedPElement":
        return WindowedPElement(self.window, {k: c for k, c in self.terms.items() if sum(k[2]) == A})

    def positive_part(self) -> "WindowedPElement":
        """Set every p_b with b <= 0 to zero."""
        return WindowedPElement(self.window, {k: c for k, c in self.terms.items() if all(b > 0 for b in k[2])})

    def constant_free(self) -> "WindowedPElement":
        return WindowedPElement(self.window, {k: c for k, c in self.terms.items() if k[2]})

    def truncate(self, max_hbar: int | None = None, max_eps: int | None = None) -> "WindowedPElement":
        return WindowedPElement(self.window, {
            k: c for k, c in self.terms.items()
            if (max_hbar is None or k[0] <= max_hbar) and (max_eps is None or k[1] <= max_eps)
        })

    def restrict_window(self, window: int) -> "WindowedPElement":
        return WindowedPElement(window, {
            k: c for k, c in self.terms.items() if all(abs(b) <= window for b in k[2])
        })

    def coefficient(self, hbar: int, eps: int, indices: Sequence[int]):
        return self.terms.get((hbar, eps, tuple(sorted(indices))), 0)

    def __repr__(self):
        return f"WindowedPElement(M={self.window}, {len(self.terms)} terms)"

    def __str__(self):
        from ..exact import format_number

        rows = []
        for (m, a, idx), c in sorted(self.terms.items()):
            mono = " ".join(f"p[{b}]" for b in idx) or "1"
            rows.append(f"{format_number(c)} * hbar^{m} eps^{a} * {mono}")
        return "\n".join(rows) or "0"


# phi -----------------------------------------------------------------------------------

@lru_cache(maxsize=200_000)
def _assignment_sum(slots: Tuple[int, ...], indices: Tuple[int, ...]) -> int:
    """sum over distinct orderings (b_s) of ``indices`` of prod_s b_s^{slots[s]}."""
    total = 0
    for perm in set(permutations(indices)):
        t = 1
        for d, b in zip(slots, perm):
            if d:
                t *= b**d
                if not t:
                    break
        total += t
    return total


def _slots(e: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(i for i, x in enumerate(e) for _ in range(x))


def phi_coefficient(f: DiffPoly, indices: Sequence[int]) -> Dict[Tuple[int, int], object]:
    """Coefficient of ``p_{b_1}...p_{b_s} e^{i (sum b) x}`` in phi(f), keyed by (eps, hbar)."""
    idx = tuple(sorted(indices))
    out: Dict[Tuple[int, int], object] = {}
    for (a, m, e), c in f.terms.items():
        if sum(e) != len(idx):
            continue
        slots = _slots(e)
        s = _assignment_sum(slots, idx)
        if s:
            v = c * ipow(sum(slots)) * s
            key = (a, m)
            out[key] = out.get(key, 0) + v
    return {k: _simplify(v) for k, v in out.items() if v}


def _simplify(v):
    if isinstance(v, GaussianRational) and v.is_real:
        return v.re
    return v


def _multisets(window: int, size: int) -> Iterator[Tuple[int, ...]]:
    return combinations_with_replacement(range(-window, window + 1), size)


def phi(f: DiffPoly, window: int) -> WindowedPElement:
    """f with u_d -> sum_{|a|<=M} (ia)^d p_a e^{iax}; all modes kept."""
    out: Dict[PKey, object] = {}
    for size in sorted({sum(e) for _, _, e in f.terms}):
        for idx in _multisets(window, size):
            for (a, m), c in phi_coefficient(f, idx).items():
                k = (m, a, idx)
                out[k] = out.get(k, 0) + c
    return WindowedPElement(window, out)


def phi0_tilde(f: DiffPoly, window: int) -> WindowedPElement:
    """Mode-zero part of phi(f) with its p-free constant removed."""
    out: Dict[PKey, object] = {}
    for size in sorted({sum(e) for _, _, e in f.terms} - {0}):
        for idx in _multisets(window, size):
            if sum(idx):
                continue
            for (a, m), c in phi_coefficient(f, idx).items():
                k = (m, a, idx)
                out[k] = out.get(k, 0) + c
    return WindowedPElement(window, out)


# Moyal product ------------------------------------------------------------------------------

def _falling(n: int, s: int) -> int:
    out = 1
    for j in range(s):
        out *= n - j
    return out


def _contractions(left: Counter, right: Counter) -> Iterator[Tuple[Dict[int, int], int]]:
    """All choices of s_k pairs (p_k in left, p_{-k} in right), k > 0."""
    ks = [k for k in left if k > 0 and right.get(-k, 0)]

    def rec(i: int, chosen: Dict[int, int]):
        if i == len(ks):
            yield dict(chosen)
            return
        k = ks[i]
        for s in range(min(left[k], right[-k]) + 1):
            if s:
                chosen[k] = s
            yield from rec(i + 1, chosen)
            chosen.pop(k, None)

    for ch in rec(0, {}):
        yield ch


def _contraction_weight(left: Counter, right: Counter, chosen: Mapping[int, int]):
    """prod_k (i hbar k)^s / s! * (d/dp_k)^s (d/dp_{-k})^s, without the hbar power."""
    w = Fraction(1)
    total = 0
    for k, s in chosen.items():
        w *= Fraction(k**s * _falling(left[k], s) * _falling(right[-k], s), factorial(s))
        total += s
    return w * ipow(total), total


def moyal_star(f: WindowedPElement, h: WindowedPElement, tilde: bool = False,
               max_hbar: int | None = None) -> WindowedPElement:
    """f * h = exp(sum_{k>0} i hbar k d/dp_k (x) d/dq_{-k}) f(p) h(q) |_{q=p}."""
    f._check(h)
    out: Dict[PKey, object] = {}
    for (m1, a1, i1), c1 in f.terms.items():
        left = Counter(i1)
        for (m2, a2, i2), c2 in h.terms.items():
            right = Counter(i2)
            for chosen in _contractions(left, right):
                if tilde and not chosen:
                    continue
                w, s = _contraction_weight(left, right, chosen)
                m = m1 + m2 + s
                if max_hbar is not None and m > max_hbar:
                    continue
                rest_l = left.copy()
                rest_r = right.copy()
                for k, n in chosen.items():
                    rest_l[k] -= n
                    rest_r[-k] -= n
                idx = tuple(sorted(rest_l.elements())) + tuple(rest_r.elements())
                key = (m, a1 + a2, tuple(sorted(idx)))
                out[key] = out.get(key, 0) + c1 * c2 * w
    return WindowedPElement(f.window, {k: _simplify(v) for k, v in out.items()})


def tilde_star(f: WindowedPElement, h: WindowedPElement, max_hbar: int | None = None) -> WindowedPElement:
    """f * h - f h."""
    return moyal_star(f, h, tilde=True, max_hbar=max_hbar)


def commutator(f: WindowedPElement, h: WindowedPElement, max_hbar: int | None = None) -> WindowedPElement:
    return moyal_star(f, h, max_hbar=max_hbar) - moyal_star(h, f, max_hbar=max_hbar)


# target-driven commutator coefficients --------------------------------------------------------

def _sub_multisets(c: Counter) -> Iterator[Counter]:
    items = sorted(c.items())

    def rec(i, acc):
        if i == len(items):
            yield Counter({k: v for k, v in acc.items() if v})
            return
        k, n = items[i]
        for t in range(n + 1):
            acc[k] = t
            yield from rec(i + 1, acc)
        acc.pop(k, None)

    yield from rec(0, {})


def positive_partitions(total: int, max_parts: int, max_part: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of ``total`` into at most ``max_parts`` positive parts (non-increasing)."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts <= 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in positive_partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


def _star_coefficient(f: DiffPoly, h: DiffPoly, target: Counter, window: int,
                      max_deg_f: int, max_deg_h: int) -> Dict[Tuple[int, int], object]:
    """Coefficient of the mode-0 monomial ``target`` in phi0~(f) * phi0~(h) - phi0~(f) phi0~(h),
    keyed by (eps, hbar)."""
    out: Dict[Tuple[int, int], object] = {}
    for uf in _sub_multisets(target):
        uh = target - uf
        need = -sum(uf.elements())
        if need <= 0:
            continue
        room = min(max_deg_f - sum(uf.values()), max_deg_h - sum(uh.values()))
        for K in positive_partitions(need, room, window):
            kc = Counter(K)
            F = uf + kc
            H = uh + Counter({-k: n for k, n in kc.items()})
            cf = phi_coefficient(f, tuple(F.elements()))
            if not cf:
                continue
            ch = phi_coefficient(h, tuple(H.elements()))
            if not ch:
                continue
            w, s = _contraction_weight(F, H, kc)
            for (a1, m1), c1 in cf.items():
                for (a2, m2), c2 in ch.items():
                    key = (a1 + a2, m1 + m2 + s)
                    out[key] = out.get(key, 0) + c1 * c2 * w
    return out


def commutator_coefficient(f: DiffPoly, h: DiffPoly, target: Sequence[int], window: int
                           ) -> Dict[Tuple[int, int], object]:
    """Coefficient of a mode-0 monomial in [phi0~(f), phi0~(h)] at window M, keyed by (eps, hbar).

    Exact (window-independent) once M >= sum |target|.
    """
    t = Counter(target)
    if sum(t.elements()):
        raise ValueError("target monomial must have mode 0")
    if any(abs(b) > window for b in t):
        raise WindowError(f"target index outside window {window}")
    df = max(sum(e) for _, _, e in f.terms)
    dh = max(sum(e) for _, _, e in h.terms)
    left = _star_coefficient(f, h, t, window, df, dh)
    right = _star_coefficient(h, f, t, window, dh, df)
    out = dict(left)
    for k, v in right.items():
        out[k] = out.get(k, 0) - v
    return {k: _simplify(v) for k, v in out.items() if v}
