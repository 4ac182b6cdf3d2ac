"""Refined tropical invariants against stable quiver Poincare polynomials,
with the per-refinement abelian terms."""
from tvx.quiver import comparison_report, coprime_sweep

for P1, P2 in coprime_sweep(max_lines=3, max_size=5):
    rep = comparison_report(P1, P2)
    mark = "ok " if rep.ok else "BAD"
    print(f"{mark} P1={P1} P2={P2}  N^={rep.tropical}  P={rep.quiver}")
    for w1, w2, ab, trop in rep.refinements:
        print(f"       w=({w1},{w2})  abelian={ab}  trop={trop}")
