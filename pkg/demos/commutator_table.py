"""Slope-ordered factorization of theta^{l1}[t x] theta^{l2}[t y] for small
exponents, with the q = 1 wall functions next to the quantum spectra."""
import sys

from tvx.classical import classical_commutator
from tvx.cli import classical_str
from tvx.factorization import commutator_factorization
from tvx.invariants import central_spectra


def show(l1, l2, order):
    print(f"l1={l1} l2={l2} order={order}")
    quantum = central_spectra(commutator_factorization(l1, l2, order))
    classical = classical_commutator(l1, l2, order)
    for g, sp in quantum.items():
        rows = ", ".join(f"Omega_{n}({k}) = {om}" for k, n, om in sp.rows())
        print(f"  {g}: {rows}")
        print(f"      P = {[str(sp.poincare(k)) for k in sp.multiples()]}")
        print(f"      f = {classical_str(classical.function(g))}")


if __name__ == "__main__":
    order = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    for l1, l2 in ((1, 1), (2, 1), (2, 2)):
        show(l1, l2, order)
