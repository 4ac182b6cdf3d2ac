"""Saturate a perturbed two-line diagram, check the loop identity, collapse
it, and write both an SVG of the diagram and one of a tropical curve."""
import sys

from tvx.algebra import SeriesContext
from tvx.factorization import saturate_central, standard_lines
from tvx.invariants import central_spectra, perturbative_spectra
from tvx.io import curve_svg, diagram_svg, write_text
from tvx.scattering import is_consistent, perturbative_saturation
from tvx.tropical import WeightVector, enumerate_curves

k = int(sys.argv[1]) if len(sys.argv) > 1 else 2
ctx = SeriesContext(["t"], [k])
lines = standard_lines(ctx, [2, 1], variables=["t", "t"])
diag = perturbative_saturation(lines, k, seed=0xC0FFEE)
print(f"walls: {len(diag.walls)}  consistent: {is_consistent(diag)}")
collapsed = perturbative_spectra(diag, 2, k)
print("collapse agrees with central engine:", collapsed == central_spectra(saturate_central(lines, ctx)))
write_text("perturbed.svg", diagram_svg(diag))
curves, _ = enumerate_curves(WeightVector.of((1, 2), (1, 1)))
write_text("curve.svg", curve_svg(curves[0]))
print("wrote perturbed.svg and curve.svg")
