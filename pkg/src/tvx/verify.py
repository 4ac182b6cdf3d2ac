"""Verification suites.  Each returns a list of case dicts with an "ok" flag."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from .algebra import QRational, SeriesContext
from .classical import classical_commutator, classical_from_quantum
from .factorization import commutator_factorization, saturate_central, standard_lines
from .invariants import (
    OmegaSpectrum,
    gps_chain,
    ordered_partitions,
    perturbative_spectra,
    refined_gw,
    round_trip,
    specialize_multiparameter,
    central_spectra,
)
from .factorization import multiparameter_factorization
from .quiver import (
    abelian_poincare,
    comparison_report,
    coprime_sweep,
    enumerate_refinements,
    mps_check,
    poincare_of_partitions,
)
from .scattering import DEFAULT_SEED, central_to_diagram, is_consistent, perturbative_saturation
from .torus import Factor, WallOperator, standard_sigma
from .tropical import WeightVector, config_seeds, count_on_seed, integer_partitions, refined_tropical_count, weight_vectors

LINE_DIRECTIONS = ((1, 0), (0, 1), (1, 1))


def consistency_cases(max_lines: int = 3, order: int = 4, max_ell: int = 2) -> list:
    """Standard diagrams: n lines in directions (1,0), (0,1), (1,1), exponents
    up to max_ell, one deformation variable per line, truncation orders 1..order."""
    out = []
    for n in range(1, max_lines + 1):
        for ells in itertools.product(range(1, max_ell + 1), repeat=n):
            for k in range(1, order + 1):
                out.append((n, ells, k))
    return out


def standard_diagram(n: int, ells, k: int):
    names = [f"t{i + 1}" for i in range(n)]
    ctx = SeriesContext(names, [k] * n)
    return ctx, standard_lines(ctx, ells, directions=LINE_DIRECTIONS[:n], variables=names)


@lru_cache(maxsize=None)
def saturated_standard(n: int, ells: tuple, k: int):
    ctx, lines = standard_diagram(n, ells, k)
    return saturate_central(lines, ctx)


def suite_consistency(max_lines: int = 3, order: int = 4, max_ell: int = 2, **_) -> list:
    """Saturate each standard diagram and take the path ordered product around
    an enclosing rectangle of the resulting diagram."""
    res = []
    for n, ells, k in consistency_cases(max_lines, order, max_ell):
        diag = saturated_standard(n, tuple(ells), k)
        ok = is_consistent(central_to_diagram(diag))
        res.append({"case": {"lines": n, "ells": list(ells), "order": k}, "rays": len(diag.directions()), "ok": ok})
    return res


PERTURBATIVE_CASES = (
    ((1, 1), 1), ((1, 1), 2), ((1, 1), 3), ((1, 1), 4),
    ((2, 1), 1), ((2, 1), 2), ((2, 2), 1), ((2, 2), 2),
    ((1, 1, 1), 1), ((1, 1, 1), 2),
)


def suite_perturbative(seed: int = DEFAULT_SEED, cases=PERTURBATIVE_CASES, **_) -> list:
    """Perturbed nilpotent diagrams: saturation by scattering pairs, then the
    loop identity on the full (non-collapsed) diagram, and the collapsed
    per-direction spectra against the central engine."""
    res = []
    for ells, k in cases:
        n = len(ells)
        ctx = SeriesContext(["t"], [k])
        lines = standard_lines(ctx, ells, directions=LINE_DIRECTIONS[:n], variables=["t"] * n)
        diag = perturbative_saturation(lines, k, seed)
        loop = is_consistent(diag)
        collapsed = perturbative_spectra(diag, n, k) == central_spectra(saturate_central(lines, ctx))
        res.append({"case": {"ells": list(ells), "order": k, "seed": seed}, "walls": len(diag.walls),
                    "loop": loop, "collapse": collapsed, "ok": loop and collapsed})
    return res


def suite_invariance(max_size: int = 6, n_seeds: int = 10, seed: int = DEFAULT_SEED, **_) -> list:
    res = []
    seeds = config_seeds(seed, n_seeds)
    for s1 in range(1, max_size):
        for s2 in range(1, max_size - s1 + 1):
            for w1 in integer_partitions(s1):
                for w2 in integer_partitions(s2):
                    w = WeightVector((w1, w2))
                    vals = [count_on_seed(w, seed=s) for s in seeds]
                    ok = all(v == vals[0] for v in vals) and vals[0].is_bar_symmetric()
                    res.append({"case": str(w), "count": str(vals[0]), "ok": ok})
    return res


def suite_classical_limit(max_ell: int = 2, order: int = 4, **_) -> list:
    res = []
    for l1 in range(1, max_ell + 1):
        for l2 in range(1, max_ell + 1):
            for k in range(1, order + 1):
                quantum = commutator_factorization(l1, l2, k)
                classical = classical_commutator(l1, l2, k)
                dirs = set(quantum.directions()) | set(classical.directions())
                ok = True
                for g in dirs:
                    f = classical_from_quantum(quantum.ray(g), classical.ctx)
                    if f != classical.function(g):
                        ok = False
                res.append({"case": {"l1": l1, "l2": l2, "order": k}, "directions": len(dirs), "ok": ok})
    return res


def random_spectrum(rng: random.Random, ctx: SeriesContext, gamma=(1, 1)) -> WallOperator:
    facs = []
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(1, 3)
        n = rng.randint(-2, 2)
        om = rng.choice([Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2)])
        facs.append(Factor(k, n, om, standard_sigma(ctx, gamma, k)))
    return WallOperator(gamma, facs)


ROUNDTRIP_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, 3))


def suite_roundtrip(n_cases: int = 100, seed: int = DEFAULT_SEED, order: int | None = None, **_) -> list:
    """Random spectra with k <= 3, |n| <= 2; the default truncation keeps every
    factor visible (3 (a + b) <= 12)."""
    rng = random.Random(seed)
    if order is None:
        order = 3 * max(a + b for a, b in ROUNDTRIP_DIRECTIONS)
    ctx = SeriesContext(["t"], [order])
    res = []
    for i in range(n_cases):
        gamma = rng.choice(ROUNDTRIP_DIRECTIONS)
        op = random_spectrum(rng, ctx, gamma)
        got = round_trip(op, ctx)
        res.append({"case": i, "gamma": list(gamma), "ok": got == OmegaSpectrum.from_operator(op)})
    return res


def suite_mps(max_lines: int = 4, max_size: int = 6, **_) -> list:
    """The refinement identity, plus abelian Poincare = N^trop for every
    weight vector that occurs."""
    res = []
    for P1, P2 in coprime_sweep(max_lines, max_size):
        ok = mps_check(P1, P2)
        mism = []
        for ref in enumerate_refinements(P1, P2):
            w = ref.weight_vector()
            if abelian_poincare(*w) != refined_tropical_count(WeightVector(w)):
                mism.append([list(w[0]), list(w[1])])
        res.append({"case": [list(P1), list(P2)], "identity": ok, "trop_mismatch": mism, "ok": ok and not mism})
    return res


def suite_comparison(max_lines: int = 4, max_size: int = 6, **_) -> list:
    res = []
    for P1, P2 in coprime_sweep(max_lines, max_size):
        rep = comparison_report(P1, P2)
        res.append({
            "case": [list(P1), list(P2)],
            "refined_gw": str(rep.tropical),
            "poincare": str(rep.quiver),
            "refinements": [{"w": [list(a), list(b)], "abelian": str(x), "trop": str(y), "ok": x == y}
                            for a, b, x, y in rep.refinements],
            "ok": rep.ok,
        })
    return res


def suite_specialization(max_ell: int = 2, order: int = 3, **_) -> list:
    res = []
    for l1 in range(1, max_ell + 1):
        for l2 in range(1, max_ell + 1):
            multi = multiparameter_factorization(l1, l2, order)
            spec = specialize_multiparameter(multi, order)
            direct = central_spectra(commutator_factorization(l1, l2, order))
            res.append({"case": {"l1": l1, "l2": l2, "order": order}, "directions": len(direct), "ok": spec == direct})
    return res


def suite_gps(max_ell: int = 2, order: int = 6, **_) -> list:
    res = []
    for l1 in range(1, max_ell + 1):
        for l2 in range(1, max_ell + 1):
            for g, k, engine, formula in gps_chain(l1, l2, order):
                res.append({"case": {"l1": l1, "l2": l2, "gamma": list(g), "k": k},
                            "engine": str(engine), "formula": str(formula), "ok": engine == formula})
    return res


def suite_bar_symmetry(max_lines: int = 3, order: int = 4, max_ell: int = 2, max_size: int = 6,
                       seed: int = DEFAULT_SEED, **_) -> list:
    """v -> 1/v invariance of N^trop, N^[(P1, P2)], P(k gamma) and the stable
    Poincare polynomials over the sweeps of the other suites."""
    res = []
    for s1 in range(1, max_size):
        for s2 in range(1, max_size - s1 + 1):
            for w in weight_vectors(s1, s2):
                n = refined_tropical_count(w, seed=seed)
                res.append({"case": {"N_trop": str(w)}, "value": str(n), "ok": n.is_bar_symmetric()})
    for l1 in range(1, 4):
        for l2 in range(1, 5 - l1):
            for s1 in range(l1, max_size + 1):
                for s2 in range(l2, max_size - s1 + 1):
                    for P1 in ordered_partitions(s1, l1, allow_zero=False):
                        for P2 in ordered_partitions(s2, l2, allow_zero=False):
                            x = QRational.coerce(refined_gw(P1, P2))
                            res.append({"case": {"N_hat": [list(P1), list(P2)]}, "value": str(x), "ok": x.bar() == x})
    for n, ells, k in consistency_cases(max_lines, order, max_ell):
        for g, sp in central_spectra(saturated_standard(n, tuple(ells), k)).items():
            for m in sp.multiples():
                p = sp.poincare(m)
                res.append({"case": {"P": {"ells": list(ells), "order": k, "gamma": list(g), "k": m}},
                             "value": str(p), "ok": p.is_bar_symmetric()})
    for P1, P2 in coprime_sweep(4, max_size):
        p = poincare_of_partitions(P1, P2)
        res.append({"case": {"stable_poincare": [list(P1), list(P2)]}, "value": str(p), "ok": p.is_bar_symmetric()})
    return res


SUITES = {
    "consistency": suite_consistency,
    "perturbative": suite_perturbative,
    "invariance": suite_invariance,
    "classical-limit": suite_classical_limit,
    "roundtrip": suite_roundtrip,
    "mps": suite_mps,
    "comparison": suite_comparison,
    "specialization": suite_specialization,
    "gps": suite_gps,
    "bar-symmetry": suite_bar_symmetry,
}


def run_suite(name: str, **params) -> list:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**params)
