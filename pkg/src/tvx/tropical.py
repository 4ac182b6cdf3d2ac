"""Rational plane tropical curves with prescribed parallel ends.

Curves are enumerated with the scattering engine: every end becomes a line
carrying theta[u_i e_{w alpha}] with its own nilpotent u_i, and a curve is a
ray whose nilpotent mask contains every end.  Its parent links are the
trivalent tree of the curve, and its coefficient is the product of the
refined vertex multiplicities [mu_V]_q.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import QLaurent, q_number
from .scattering import DEFAULT_SEED, Diagram, Wall, elementary_lines, saturate_generic
from .torus import pairing

ALPHA1 = (1, 0)
ALPHA2 = (0, 1)


class TropicalInvarianceError(RuntimeError):
    """Counts differ between generic configurations."""


@dataclass(frozen=True)
class WeightVector:
    """Sorted weights of the incoming ends, one tuple per direction class."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(w) for w in p)) for p in self.parts)
        if any(w < 1 for p in parts for w in p):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts) -> "WeightVector":
        return cls(tuple(parts))

    def sizes(self) -> tuple:
        return tuple(sum(p) for p in self.parts)

    def n_ends(self) -> int:
        return sum(len(p) for p in self.parts)

    def __str__(self):
        return "(" + ", ".join("(" + ",".join(map(str, p)) + ")" for p in self.parts) + ")"


@dataclass
class EndConfiguration:
    """The end lines of a sampled configuration: (direction, weight, base point)."""

    ends: list
    seed: int
    attempt: int = 0

    @classmethod
    def from_diagram(cls, diag: Diagram) -> "EndConfiguration":
        ends = [(w.label[1], w.label[2], w.base) for w in diag.lines()]
        return cls(ends, diag.seed, diag.attempt)


@dataclass
class Vertex:
    point: tuple
    edges: tuple  # lattice vectors of the two incoming edges (weight included)
    out: tuple

    @property
    def multiplicity(self) -> int:
        return abs(pairing(self.edges[0], self.edges[1]))


@dataclass
class TropicalCurve:
    """A trivalent rational curve read off the provenance tree of a ray."""

    root: Wall
    vertices: list = field(default_factory=list)
    ends: list = field(default_factory=list)
    tree: tuple = ()
    edges: list = field(default_factory=list)  # (start or None for an end, stop, lattice)

    @property
    def outgoing(self) -> tuple:
        return self.root.lattice

    def multiplicities(self) -> list:
        return [v.multiplicity for v in self.vertices]

    def mikhalkin(self) -> int:
        out = 1
        for m in self.multiplicities():
            out *= m
        return out

    def is_balanced(self) -> bool:
        return all(v.out == (v.edges[0][0] + v.edges[1][0], v.edges[0][1] + v.edges[1][1]) for v in self.vertices)

    def to_json(self) -> dict:
        return {
            "outgoing": list(self.outgoing),
            "base": [str(c) for c in self.root.base],
            "ends": [{"index": e[0], "direction": list(e[1]), "weight": e[2]} for e in self.ends],
            "vertices": [
                {"point": [str(c) for c in v.point], "edges": [list(e) for e in v.edges],
                 "mu": v.multiplicity, "mu_q": str(q_number(v.multiplicity))}
                for v in self.vertices
            ],
            "mu": self.mikhalkin(),
            "mu_q": str(bg_multiplicity(self)),
        }


def curve_from_ray(diag: Diagram, ray: Wall) -> TropicalCurve:
    curve = TropicalCurve(ray)

    def walk(w: Wall):
        if w.parents is None:
            curve.ends.append(w.label)
            return w.label[0]
        a, b = (diag.walls[i] for i in w.parents)
        curve.vertices.append(Vertex(w.base, (a.lattice, b.lattice), w.lattice))
        for c in (a, b):
            curve.edges.append((None if c.parents is None else c.base, w.base, c.lattice))
        return (walk(a), walk(b))

    curve.tree = walk(ray)
    return curve


def edge_multiplicity(w1: int, v1, w2: int, v2) -> int:
    """w1 w2 |det(v1, v2)| for two edges at a vertex."""
    return abs(w1 * w2 * (v1[0] * v2[1] - v1[1] * v2[0]))


def vertex_multiplicity(curve: TropicalCurve, i: int) -> int:
    v = curve.vertices[i]
    return v.multiplicity


def bg_multiplicity(curve: TropicalCurve) -> QLaurent:
    """Block-Goettsche multiplicity: product of [mu_V]_q over vertices."""
    out = QLaurent.const(1)
    for m in curve.multiplicities():
        out = out * q_number(m)
    return out


def _ends(w: WeightVector, directions) -> list:
    if len(directions) != len(w.parts):
        raise ValueError("one direction per weight class")
    return [(tuple(al), wt) for al, part in zip(directions, w.parts) for wt in part]


def saturate_ends(w: WeightVector, directions=(ALPHA1, ALPHA2), seed: int = DEFAULT_SEED) -> Diagram:
    ends = _ends(w, directions)
    return saturate_generic(lambda rng, attempt: elementary_lines(ends, seed, rng, attempt), seed)


def enumerate_curves(w: WeightVector, directions=(ALPHA1, ALPHA2), seed: int = DEFAULT_SEED):
    """All curves with the given ends on one seeded generic configuration.

    Returns (curves, configuration).
    """
    diag = saturate_ends(w, directions, seed)
    full = (1 << w.n_ends()) - 1
    curves = []
    for ray in diag.rays():
        if ray.mask != full:
            continue
        c = curve_from_ray(diag, ray)
        if c.root.coeff != bg_multiplicity(c):
            raise AssertionError("ray coefficient differs from the product of vertex multiplicities")
        curves.append(c)
    return curves, EndConfiguration.from_diagram(diag)


def count_on_seed(w: WeightVector, directions=(ALPHA1, ALPHA2), seed: int = DEFAULT_SEED) -> QLaurent:
    curves, _ = enumerate_curves(w, directions, seed)
    total = QLaurent()
    for c in curves:
        total = total + bg_multiplicity(c)
    return total


def config_seeds(seed: int, n: int) -> list:
    return [seed + 7919 * i for i in range(n)]


@lru_cache(maxsize=None)
def _refined(parts: tuple, directions: tuple, seeds: tuple) -> QLaurent:
    w = WeightVector(parts)
    vals = [count_on_seed(w, directions, s) for s in seeds]
    for s, val in zip(seeds[1:], vals[1:]):
        if val != vals[0]:
            raise TropicalInvarianceError(f"count for {w} differs on seed {s}: {vals[0]} vs {val}")
    return vals[0]


def refined_tropical_count(w: WeightVector, alpha1=ALPHA1, alpha2=ALPHA2, seed: int = DEFAULT_SEED,
                           n_configs: int = 2, directions=None) -> QLaurent:
    """N^trop counted with Block-Goettsche multiplicity, checked on n_configs samples."""
    dirs = tuple(tuple(d) for d in (directions or (alpha1, alpha2)))
    if n_configs < 1:
        raise ValueError("need at least one configuration")
    return _refined(w.parts, dirs, tuple(config_seeds(seed, n_configs)))


def classical_tropical_count(w: WeightVector, alpha1=ALPHA1, alpha2=ALPHA2, seed: int = DEFAULT_SEED,
                             n_configs: int = 2) -> Fraction:
    return refined_tropical_count(w, alpha1, alpha2, seed, n_configs).eval_at_one()


def mikhalkin_count(w: WeightVector, directions=(ALPHA1, ALPHA2), seed: int = DEFAULT_SEED) -> int:
    """Sum of mu(h) computed directly from vertex multiplicities."""
    curves, _ = enumerate_curves(w, directions, seed)
    return sum(c.mikhalkin() for c in curves)


def integer_partitions(n: int, max_part: int | None = None) -> list:
    """Partitions of n as ascending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in integer_partitions(n - first, first):
            out.append(tuple(sorted(rest + (first,))))
    return out


def weight_vectors(size1: int, size2: int) -> list:
    return [WeightVector((a, b)) for a in integer_partitions(size1) for b in integer_partitions(size2)]
