"""Assemble F^(q) coefficients by the quantum string equation and print the normalized table,
the constant term and the dilaton residuals. Usage: python3 scripts/tau_table.py [max_genus] [max_points]"""
import sys
import time

from qigw.closedform import witten_kontsevich
from qigw.exact import format_number
from qigw.quantization.correlators import assemble_tau


def main(max_genus: int = 2, max_points: int = 2) -> None:
    t0 = time.perf_counter()
    table = assemble_tau(max_genus, max_points)
    print(f"assembled in {time.perf_counter() - t0:.2f}s, {table.checks} consistency checks")
    print(f"{'d':<14}{'l':>3}{'h':>3}  {'value':>12}  classical")
    for key in sorted(table.values, key=lambda k: (k.g, k.l, k.n, k.d)):
        v = table.normalized(key.d, key.l, key.h)
        wk = format_number(witten_kontsevich(key.d, key.l)) if key.h == 0 else ""
        print(f"{str(key.d):<14}{key.l:>3}{key.h:>3}  {format_number(v):>12}  {wk}")
    for (l, h), c in sorted(table.constant_term.items()):
        print(f"constant term eps^{2 * l} hbar^{h}: {format_number(c)}")
    nonzero = {k: v for k, v in table.dilaton_residuals.items() if v != 0}
    print(f"dilaton residuals: {len(table.dilaton_residuals)} instances, {len(nonzero)} nonzero")
    for key, v in sorted(nonzero.items(), key=lambda kv: (kv[0].g, kv[0].d)):
        print(f"  d={key.d} l={key.l} h={key.h}: {format_number(v)}")


if __name__ == "__main__":
    main(*(int(x) for x in sys.argv[1:3]))
