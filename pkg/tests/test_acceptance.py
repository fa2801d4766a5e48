"""Acceptance criteria 1-9, exact equality throughout. Each test records one PASS/FAIL line,
printed in the terminal summary under "acceptance"."""
import time
from fractions import Fraction as F
from itertools import combinations_with_replacement, product

import pytest

from conftest import ACCEPTANCE
from qigw.checks import SuiteBounds, run_suite
from qigw.closedform import main_formula_rhs, purely_quantum, hurwitz_oracle
from qigw.exact import format_number, parse_number
from qigw.gw import interpolate_P
from qigw.quantization.correlators import assemble_tau

BOUNDS = SuiteBounds()


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.secs = time.perf_counter() - self.t0
        return False


def record(n, ok, secs, limit, detail=""):
    in_time = secs <= limit
    note = detail if in_time else f"{detail}; over the {limit}s budget"
    ACCEPTANCE[n] = (ok and in_time, secs, note)
    assert ok, detail
    assert in_time, note


def test_criterion_1_tau1_and_constant_term(golden):
    with Timer() as t:
        table = assemble_tau(max_genus=2, max_points=1)
    got = {(v["l"], v["h"]): table.normalized((1,), v["l"], v["h"]) for v in golden["tau_1"]["values"]}
    want = {(v["l"], v["h"]): parse_number(v["value"]) for v in golden["tau_1"]["values"]}
    c = golden["constant_term"]
    const = table.constant_term.get((c["l"], c["h"]))
    ok = got == want and const == parse_number(c["value"])
    record(1, ok, t.secs, 1, "tau_1 " + ", ".join(f"{k}={format_number(v)}" for k, v in got.items())
           + f"; constant term {format_number(const)}")


def main_formula_cases():
    for g in range(4):
        for n in range(1, 5):
            if n < 1 + 2 * (g == 0):
                continue
            yield g, n


def test_criterion_2_main_formula():
    count = 0
    bad = []
    with Timer() as t:
        for g, n in main_formula_cases():
            rhs = main_formula_rhs(n, g)
            N = 2 * g - 3 + n
            for s in range(N, N + 2 * g + 1):
                for d in product(range(s + 1), repeat=n):
                    if sum(d) != s:
                        continue
                    count += 1
                    if purely_quantum(d, g) != rhs.coefficient(d):
                        bad.append((d, g))
        spots = [purely_quantum((2,), 1), purely_quantum((0,), 1), purely_quantum((0, 0, 0), 0)]
    ok = not bad and spots == [F(1, 24), F(-1, 24), F(1)]
    record(2, ok, t.secs, 10, f"{count} instances, mismatches {bad[:3]}, spots {[format_number(x) for x in spots]}")


@pytest.mark.slow
def test_criterion_3_bridge_at_l0():
    with Timer() as t:
        rep = run_suite("theorem1-l0", BOUNDS)
    record(3, rep.ok and rep.entries, t.secs, 300, rep.summary())


def _criterion_4_cases():
    for g in range(3):
        for n in range(1, 4):
            for k in range(1, 4):
                for d in combinations_with_replacement(range(2 * g + k), n):
                    if sum(d) == 2 * g - 1 + k:
                        yield g, d, k


@pytest.mark.slow
def test_criterion_4_polynomial_structure():
    problems, count = [], 0
    with Timer() as t:
        for g, d, k in _criterion_4_cases():
            n = len(d)
            poly = interpolate_P(g, d, k, grid="tensor", check=True)  # raises on a held-out miss
            count += 1
            degrees = {sum(e) for e in poly.terms}
            if not poly.terms or max(degrees) > 2 * g + n - 1 or any((x - n + 1) % 2 for x in degrees):
                problems.append((g, d, k, sorted(degrees)))
    record(4, not problems and count > 0, t.secs, 120, f"{count} polynomials, problems {problems[:3]}")


@pytest.mark.slow
def test_criterion_5_closed_multilinear_forms():
    with Timer() as t:
        rep = run_suite("formula2", BOUNDS)
    record(5, rep.ok and rep.entries, t.secs, 120, rep.summary())


def test_criterion_6_wedge_oracle():
    with Timer() as t:
        rep = run_suite("wedge-oracle", BOUNDS)
    record(6, rep.ok and rep.entries, t.secs, 120, rep.summary())


def test_criterion_7_hurwitz():
    with Timer() as t:
        rep = run_suite("hurwitz", BOUNDS)
        spot = hurwitz_oracle(0, (3,), (1, 1, 1))
    record(7, rep.ok and rep.entries and spot == 6, t.secs, 60, f"{rep.summary()}; H^0_3,(1,1,1) = {spot}")


def test_criterion_8_moyal(golden):
    with Timer() as t:
        rep = run_suite("moyal", BOUNDS)
    record(8, rep.ok and rep.entries, t.secs, 300, rep.summary())


def test_criterion_9_dilaton_is_reported():
    with Timer() as t:
        rep = run_suite("dilaton", BOUNDS)
    nonzero = sum(1 for _, v in rep.informational if v != 0)
    ACCEPTANCE[9] = (True, t.secs, f"{rep.summary()}, {nonzero} nonzero")
    assert rep.informational
