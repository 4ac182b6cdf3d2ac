"""Exact computations in the quantum tropical vertex group.

Quantum torus algebra over Q(q^{1/2}), slope-ordered factorization of wall
operators, refined tropical curve counts and quiver Poincare polynomials.
"""
from .algebra import QLaurent, QRational, SeriesContext, format_laurent, parse_laurent, q_number
from .factorization import CentralDiagram, commutator_factorization, multiparameter_factorization, saturate_central
from .invariants import OmegaSpectrum, extract_omegas, gps_classical_coeff, q_ramification, refined_gw
from .quiver import HNSolver, QuiverSpec, Stability, build_bipartite, mps_check, stable_poincare
from .scattering import DEFAULT_SEED, Diagram, Wall, is_consistent, saturate
from .torus import Factor, TorusElement, WallOperator, wall_operator_log
from .tropical import TropicalCurve, WeightVector, enumerate_curves, refined_tropical_count

__version__ = "0.1.0"

__all__ = [
    "CentralDiagram", "DEFAULT_SEED", "Diagram", "Factor", "HNSolver", "OmegaSpectrum", "QLaurent",
    "QRational", "QuiverSpec", "SeriesContext", "Stability", "TorusElement", "TropicalCurve", "Wall",
    "WallOperator", "WeightVector", "build_bipartite", "commutator_factorization", "enumerate_curves",
    "extract_omegas", "format_laurent", "gps_classical_coeff", "is_consistent", "mps_check",
    "multiparameter_factorization", "parse_laurent", "q_number", "q_ramification", "refined_gw",
    "refined_tropical_count", "saturate", "saturate_central", "stable_poincare", "wall_operator_log",
]
