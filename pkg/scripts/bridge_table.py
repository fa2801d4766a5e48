"""Print <tau_0 tau_d>_{0,g} three ways: quantization chain, GW interpolation, string image
of the closed formula. Usage: python3 scripts/bridge_table.py [max_points]"""
import sys
import time
from fractions import Fraction
from math import factorial

from qigw.checks import _string_image, theorem1_l0_cases
from qigw.closedform import CorrelatorKey
from qigw.exact import format_number
from qigw.gw import interpolate_P
from qigw.quantization.correlators import normalize, quantum_correlator


def main(max_points: int = 2) -> int:
    print(f"{'d':<12}{'g':>3}{'k':>3}  {'quantum':>12}{'gw':>12}{'closed':>12}{'sec':>8}")
    bad = 0
    for d, g in theorem1_l0_cases(max_points):
        t0 = time.perf_counter()
        k = sum(d) - 2 * g + 1
        q = normalize(CorrelatorKey((0,) + d, 0, g), quantum_correlator(d, 0, g))
        gw = "-"
        if k >= 1:
            P = interpolate_P(g, d, k, grid="simplex")
            gwv = Fraction(P.coefficient((1,) * k)) / factorial(k)
            gw = format_number(gwv)
            bad += gwv != q
        closed = _string_image(d, g)
        bad += closed != q
        dt = time.perf_counter() - t0
        print(f"{str(d):<12}{g:>3}{k:>3}  {format_number(q):>12}{gw:>12}{format_number(closed):>12}{dt:>8.2f}")
    print("mismatches:", bad)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 2))
