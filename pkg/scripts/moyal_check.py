"""[Hbar_1, Hbar_2] on mode-0 targets at growing windows: shows where truncation residue sits
and that window-exact coefficients vanish. Usage: python3 scripts/moyal_check.py [max_index]"""
import sys

from qigw.exact import format_number
from qigw.quantization.diffpoly import hamiltonian_density
from qigw.quantization.pspace import commutator, commutator_coefficient, phi0_tilde
from qigw.checks import moyal_targets


def main(max_index: int = 4) -> None:
    h1, h2 = hamiltonian_density(1), hamiltonian_density(2)
    for M in (2, 3, 4):
        c = commutator(phi0_tilde(h1, M), phi0_tilde(h2, M))
        edge = max((max(map(abs, k[2]), default=0) for k in c.terms), default=None)
        print(f"full commutator at window {M}: {len(c.terms)} residual terms, smallest max|index| {edge}"
              if c.terms else f"full commutator at window {M}: 0")
    nonzero = 0
    targets = moyal_targets(max_index, 5)
    for t in targets:
        M = sum(abs(x) for x in t) + 4
        r = commutator_coefficient(h1, h2, t, M)
        if r:
            nonzero += 1
            print("nonzero at", t, {k: format_number(v) for k, v in r.items()})
    print(f"{len(targets)} window-exact targets, {nonzero} nonzero")


if __name__ == "__main__":
    main(*(int(x) for x in sys.argv[1:2]))
