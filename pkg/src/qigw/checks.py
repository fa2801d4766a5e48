"""Cross-check suites: each instance compares two independently computed exact values."""
from __future__ import annotations

import os
import random
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Callable, Dict, List, Sequence, Tuple

from .exact import format_number

__all__ = ["CheckEntry", "CheckReport", "SuiteBounds", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckEntry:
    description: str
    lhs: object
    rhs: object

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class CheckReport:
    suite: str
    entries: List[CheckEntry] = field(default_factory=list)
    informational: List[Tuple[str, object]] = field(default_factory=list)

    def add(self, description: str, lhs, rhs) -> None:
        self.entries.append(CheckEntry(description, lhs, rhs))

    def note(self, description: str, value) -> None:
        self.informational.append((description, value))

    @property
    def failures(self) -> List[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if not self.entries:
            return f"{self.suite}: {len(self.informational)} informational values"
        return f"{self.suite}: {len(self.entries) - len(self.failures)}/{len(self.entries)} passed"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": len(self.entries) - len(self.failures),
            "total": len(self.entries),
            "failures": [
                {"instance": e.description, "lhs": _fmt(e.lhs), "rhs": _fmt(e.rhs)} for e in self.failures
            ],
            "informational": [{"instance": d, "value": _fmt(v)} for d, v in self.informational],
        }

    def render(self) -> str:
        lines = [self.summary()]
        for e in self.failures:
            lines.append(f"  FAIL {e.description}: {_fmt(e.lhs)} != {_fmt(e.rhs)}")
        for d, v in self.informational:
            lines.append(f"  info {d}: {_fmt(v)}")
        return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, (int, Fraction)) or hasattr(x, "im"):
        return format_number(x)
    return str(x)


@dataclass
class SuiteBounds:
    """Ranges for the suites; each field can be overridden by QIGW_<FIELD> in the environment."""

    max_genus: int = 2
    max_points: int = 3
    max_k: int = 3
    cap: int = 8
    window: int = 0  # 0 means the default 2A + 4 per coefficient
    hurwitz_degree: int = 5
    hurwitz_genus: int = 2
    word_length: int = 4
    energy: int = 3
    random_words: int = 40
    moyal_index: int = 6
    moyal_size: int = 5
    moyal_order: int = 4
    seed: int = 0

    @classmethod
    def from_env(cls, env: Dict[str, str] | None = None, **overrides) -> "SuiteBounds":
        env = os.environ if env is None else env
        values = {}
        for f in fields(cls):
            key = f"QIGW_{f.name.upper()}"
            if key in env:
                try:
                    values[f.name] = int(env[key])
                except ValueError:
                    raise ValueError(f"{key} must be an integer, got {env[key]!r}") from None
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def as_dict(self) -> dict:
        return asdict(self)


# suites --------------------------------------------------------------------------------------

def suite_formula2(b: SuiteBounds) -> CheckReport:
    """Closed forms for the connected and disconnected multilinear parts against wedge grids."""
    from .gw import closed_multilinear_coef, grid_multilinear

    rep = CheckReport("formula2")
    for n in range(1, b.max_points + 1):
        for k in range(1, b.max_k + 1):
            for connected in (True, False):
                grid, _ = grid_multilinear(n, k, b.cap, connected)
                closed = {e: c for e, c in closed_multilinear_coef(k, n, b.cap, connected).coefficients().items() if c}
                kind = "connected" if connected else "disconnected"
                for e in sorted(set(grid) | set(closed)):
                    rep.add(f"{kind} n={n} k={k} z^{e}", grid.get(e, 0), closed.get(e, 0))
    return rep


def _string_image(d: Tuple[int, ...], g: int) -> Fraction:
    from .closedform import purely_quantum

    total = Fraction(0)
    for j, x in enumerate(d):
        if x:
            lowered = d[:j] + (x - 1,) + d[j + 1:]
            try:
                total += purely_quantum(lowered, g)
            except ValueError:
                pass  # unstable correlator: no such term in F
    return total


def theorem1_l0_cases(max_points: int) -> List[Tuple[Tuple[int, ...], int]]:
    cases = []
    for n in range(1, max_points + 1):
        for d in product((1, 2), repeat=n):
            for g in range((sum(d) + 1) // 2 + 1):
                cases.append((d, g))
    return cases


def suite_theorem1_l0(b: SuiteBounds) -> CheckReport:
    """<tau_0 tau_d>_{0,g}: quantization chain vs gw interpolation vs string image of the closed formula."""
    from .closedform import CorrelatorKey
    from .gw import interpolate_P
    from .quantization.correlators import QuantumConfig, normalize, quantum_correlator

    cfg = QuantumConfig(window=b.window or None)
    rep = CheckReport("theorem1-l0")
    for d, g in theorem1_l0_cases(b.max_points):
        if g > b.max_genus + 1:
            continue
        k = sum(d) - 2 * g + 1
        q = normalize(CorrelatorKey((0,) + d, 0, g), quantum_correlator(d, 0, g, cfg))
        if k >= 1:
            P = interpolate_P(g, d, k, grid="simplex")
            gwv = P.coefficient((1,) * k) / factorial(k)
            rep.add(f"d={d} g={g} quantization vs gw", q, Fraction(gwv))
        rep.add(f"d={d} g={g} quantization vs closed formula", q, _string_image(d, g))
    return rep


def suite_hurwitz(b: SuiteBounds) -> CheckReport:
    from .closedform import gjv_hurwitz, hurwitz_oracle
    from .partitions import partitions

    rep = CheckReport("hurwitz")
    for d in range(1, b.hurwitz_degree + 1):
        for mu in partitions(d):
            for g in range(b.hurwitz_genus + 1):
                rep.add(f"g={g} mu={mu}", gjv_hurwitz(g, mu), hurwitz_oracle(g, (d,), mu, bound=b.hurwitz_degree))
    return rep


def _wedge_words(length: int, energy: int):
    from .wedge import Alpha, E, LinearForm

    choices = [("a", k) for k in range(-energy, energy + 1) if k] + [("E", r) for r in range(-energy, energy + 1)]
    for w in product(choices, repeat=length):
        if sum(r for _, r in w):
            continue
        yield tuple(
            Alpha(r) if t == "a" else E(r, LinearForm.of(f"z{i + 1}")) for i, (t, r) in enumerate(w)
        )


def _word_cap(word, cap: int) -> int:
    from .wedge import E

    n_e = sum(1 for g in word if isinstance(g, E))
    return min(cap, (8, 8, 6, 4, 4)[min(n_e, 4)])


def _random_word(rng: random.Random, energy: int, variables=("z",)):
    """Arguments are multiples of one variable, so every pole is a monomial one."""
    from .wedge import Alpha, LinearForm, make_generator

    out = []
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.3:
            out.append(Alpha(rng.choice([k for k in range(-energy, energy + 1) if k])))
        else:
            form = LinearForm({v: rng.randint(-3, 3) for v in variables})
            r = rng.randint(-energy, energy)
            if not form and r == 0:
                form = LinearForm.of(variables[0])
            out.append(make_generator(r, form))
    return tuple(out)


def _commutator_rhs(g, h):
    """[g, h] as (scalar, generator or None, coefficient linear form for varsigma)."""
    from .wedge import Alpha, E

    if isinstance(g, Alpha) and isinstance(h, Alpha):
        return (g.k if g.k + h.k == 0 else 0), None, None
    a, b = g.energy, h.energy
    z, w = g.arg, h.arg
    arg = z + w
    if a + b == 0 and not arg:
        return a, None, None  # varsigma(a w - b z) E_0(0) is the scalar a
    from .wedge import make_generator

    return 0, make_generator(a + b, arg), w.scale(a) - z.scale(b)


def _plain_commutator(g, h) -> bool:
    """[g, h] with a nonzero varsigma factor or a scalar."""
    _, gen, form = _commutator_rhs(g, h)
    return gen is None or bool(form)


def suite_wedge_oracle(b: SuiteBounds) -> CheckReport:
    """Rewrite-system vev against literal Fock space action, plus commutators as series identities."""
    from .series import compose_linear
    from .wedge import ShiftedSeries, fock_vev, format_word, vev

    rep = CheckReport("wedge-oracle")
    for length in range(1, b.word_length + 1):
        for word in _wedge_words(length, b.energy):
            cap = _word_cap(word, b.cap)
            lhs, rhs = vev(word, cap=cap), fock_vev(word, cap=cap)
            rep.add(f"<{format_word(word)}> cap {cap}", lhs.agrees_with(rhs), True)
    rng = random.Random(b.seed)
    for _ in range(b.random_words):
        word = _random_word(rng, b.energy)
        variables = ("z",)
        lhs, rhs = vev(word, variables, cap=5), fock_vev(word, variables, cap=5)
        rep.add(f"<{format_word(word)}> random cap 5", lhs.agrees_with(rhs), True)
    # commutation relations: <X g h Y> - <X h g Y> = scalar <X Y> + varsigma(.) <X [g,h]_E Y>
    done = 0
    while done < b.random_words:
        word = _random_word(rng, b.energy)
        spots = [i for i in range(len(word) - 1) if _plain_commutator(word[i], word[i + 1])]
        if not spots:
            continue
        i = rng.choice(spots)
        done += 1
        g, h = word[i], word[i + 1]
        scalar, gen, form = _commutator_rhs(g, h)
        variables = ("z",)
        cap = 4
        swapped = word[:i] + (h, g) + word[i + 2:]
        rest = word[:i] + word[i + 2:]
        lhs = fock_vev(word, variables, cap) - fock_vev(swapped, variables, cap)
        total = ShiftedSeries.constant(0, variables, cap)
        if scalar:
            base = fock_vev(rest, variables, cap) if rest else ShiftedSeries.constant(1, variables, cap)
            total = total + base * scalar
        if gen is not None and form:
            inner = fock_vev(word[:i] + (gen,) + word[i + 2:], variables, cap + 1)
            total = total + inner * compose_linear("varsigma", form.as_dict(), variables, cap + 2)
        rep.add(f"[{g}, {h}] in <{format_word(word)}>", lhs.agrees_with(total), True)
    return rep


def moyal_targets(max_index: int, max_size: int) -> List[Tuple[int, ...]]:
    out = []
    for size in range(1, max_size + 1):
        for t in combinations_with_replacement(range(-max_index, max_index + 1), size):
            if sum(t) == 0:
                out.append(t)
    return out


def suite_moyal(b: SuiteBounds) -> CheckReport:
    """[Hbar_1, Hbar_2] = 0 on mode-0 targets, window-stable; Heisenberg relations."""
    from .quantization.diffpoly import hamiltonian_density
    from .quantization.pspace import WindowedPElement, commutator, commutator_coefficient

    rep = CheckReport("moyal")
    for a in range(1, 4):
        c = commutator(WindowedPElement.p(a, a), WindowedPElement.p(-a, a))
        rep.add(f"[p_{a}, p_-{a}]", c.terms, {(1, 0, ()): _i(a)})
    h1, h2 = hamiltonian_density(1), hamiltonian_density(2)
    for t in moyal_targets(b.moyal_index, b.moyal_size):
        M = b.window or sum(abs(x) for x in t) + 4
        r1 = commutator_coefficient(h1, h2, t, M)
        r2 = commutator_coefficient(h1, h2, t, M + 2)
        r1 = {k: v for k, v in r1.items() if k[0] <= b.moyal_order and k[1] <= b.moyal_order}
        r2 = {k: v for k, v in r2.items() if k[0] <= b.moyal_order and k[1] <= b.moyal_order}
        rep.add(f"window {M} vs {M + 2} at p{list(t)}", r1, r2)
        rep.add(f"[H1, H2] at p{list(t)}", r1, {})
    return rep


def _i(a: int):
    from .exact import GaussianRational

    return GaussianRational(0, a)


def suite_dilaton(b: SuiteBounds) -> CheckReport:
    """Quantum dilaton residuals of the assembled table; informational only."""
    from .quantization.correlators import QuantumConfig, assemble_tau

    rep = CheckReport("dilaton")
    table = assemble_tau(b.max_genus, min(b.max_points, 2), QuantumConfig(window=b.window or None))
    for key, v in sorted(table.dilaton_residuals.items(), key=lambda kv: (kv[0].g, kv[0].l, kv[0].d)):
        rep.note(f"residual d={key.d} l={key.l} h={key.h}", v)
    return rep


SUITES: Dict[str, Callable[[SuiteBounds], CheckReport]] = {
    "formula2": suite_formula2,
    "theorem1-l0": suite_theorem1_l0,
    "hurwitz": suite_hurwitz,
    "wedge-oracle": suite_wedge_oracle,
    "moyal": suite_moyal,
    "dilaton": suite_dilaton,
}


def run_suite(name: str, bounds: SuiteBounds | None = None) -> CheckReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](bounds or SuiteBounds.from_env())
