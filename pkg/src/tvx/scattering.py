"""Scattering diagrams with exact rational geometry.

A perturbed standard diagram consists of lines carrying elementary operators
theta[c u_I e_alpha] with u_I a square-free product of nilpotent variables.
Saturation adds, for every pair of walls with disjoint nilpotent support that
meet in a single point, the ray

    (p + R_{>=0}(al1 + al2),  theta[[<al1, al2>]_q c1 c2 u_{I1} u_{I2} e_{al1 + al2}])

(al1 of smaller slope), until nothing new appears.  Every wall remembers the
pair that produced it, which is the tropical curve it represents.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable

from .algebra import (
    Multidegree,
    NotClearedError,
    QLaurent,
    QRational,
    SeriesContext,
    q_number,
)
from .torus import (
    ElementaryAction,
    TorusElement,
    WallOperator,
    X,
    Y,
    apply_operator,
    pairing,
    primitive,
    slope_key,
    wall_operator_log,
)

GRID_Q = 10007
GRID_B = 10 ** 6
MAX_RETRIES = 32
DEFAULT_SEED = 0xC0FFEE


class DegenerateError(RuntimeError):
    """The sampled configuration is not generic."""


class PathError(ValueError):
    """The path is not admissible for the diagram."""


def _cross(p, q) -> Fraction:
    return p[0] * q[1] - p[1] * q[0]


@dataclass(eq=False)
class Wall:
    """A line or ray carrying the elementary operator theta[coeff * u_mask * e_lattice]."""

    kind: str
    base: tuple
    lattice: tuple
    coeff: object
    mask: int
    round: int = 0
    parents: tuple | None = None
    label: tuple | None = None
    index: int = -1
    sigma_exps: tuple | None = None
    operator: WallOperator | None = None

    @property
    def direction(self):
        return primitive(self.lattice)

    def action(self, ctx: SeriesContext):
        if self.operator is not None:
            return OperatorAction(self.operator)
        exps = self.sigma_exps if self.sigma_exps is not None else ctx.zero_exps
        return ElementaryAction(ctx, self.lattice, self.coeff, Multidegree(exps, self.mask))

    def contains(self, p) -> bool:
        d = self.direction
        rel = (p[0] - self.base[0], p[1] - self.base[1])
        if _cross(rel, d):
            return False
        if self.kind == "line":
            return True
        return rel[0] * d[0] + rel[1] * d[1] >= 0


class OperatorAction:
    """Adapter giving a WallOperator the apply/inverse interface."""

    def __init__(self, op: WallOperator, inv: bool = False):
        self.op = op
        self.inv = inv

    def inverse(self) -> "OperatorAction":
        return OperatorAction(self.op, not self.inv)

    def apply(self, elem):
        return apply_operator(elem, self.op, self.inv)


def operator_wall(kind: str, op: WallOperator, base=(Fraction(0), Fraction(0))) -> Wall:
    """A wall carrying a general operator (no nilpotent mask)."""
    return Wall(kind, tuple(base), op.gamma, None, 0, operator=op)


def central_to_diagram(central) -> "Diagram":
    """Lines through the origin and rays from the origin of a CentralDiagram."""
    diag = Diagram(central.ctx, [])
    for op in central.lines:
        diag.add(operator_wall("line", op))
    for g in central.directions():
        diag.add(operator_wall("ray", central.rays[g]))
    return diag


def intersect(w1: Wall, w2: Wall):
    """Return ("point", p, s1, s2), ("parallel", collinear) or None."""
    d1, d2 = w1.direction, w2.direction
    det = _cross(d1, d2)
    rel = (w2.base[0] - w1.base[0], w2.base[1] - w1.base[1])
    if det == 0:
        return ("parallel", _cross(rel, d1) == 0)
    s1 = Fraction(_cross(rel, d2)) / det
    s2 = Fraction(_cross(rel, d1)) / det
    if w1.kind == "ray" and s1 < 0:
        return None
    if w2.kind == "ray" and s2 < 0:
        return None
    p = (w1.base[0] + s1 * d1[0], w1.base[1] + s1 * d1[1])
    return ("point", p, s1, s2)


@dataclass
class Diagram:
    ctx: SeriesContext
    walls: list = field(default_factory=list)
    seed: int | None = None
    attempt: int = 0

    def add(self, w: Wall) -> Wall:
        w.index = len(self.walls)
        self.walls.append(w)
        return w

    def lines(self):
        return [w for w in self.walls if w.kind == "line"]

    def rays(self):
        return [w for w in self.walls if w.kind == "ray"]

    def leaves(self, w: Wall) -> list:
        if w.parents is None:
            return [w]
        return self.leaves(self.walls[w.parents[0]]) + self.leaves(self.walls[w.parents[1]])

    def singular_points(self) -> list:
        pts = {w.base for w in self.walls if w.kind == "ray"}
        for a, b in combinations(self.walls, 2):
            r = intersect(a, b)
            if r and r[0] == "point":
                pts.add(r[1])
        return sorted(pts)

    def to_json(self) -> dict:
        from .io import coeff_to_json
        out = []
        for w in self.walls:
            out.append({
                "index": w.index,
                "kind": w.kind,
                "base": [str(w.base[0]), str(w.base[1])],
                "direction": list(w.direction),
                "lattice": list(w.lattice),
                "coeff": coeff_to_json(w.coeff),
                "mask": w.mask,
                "round": w.round,
                "parents": list(w.parents) if w.parents else None,
                "label": list(w.label) if w.label else None,
            })
        return {"context": self.ctx.to_json(), "seed": self.seed, "attempt": self.attempt, "walls": out}


# ---------------------------------------------------------------------------
# perturbation


def _offset(rng: random.Random) -> tuple:
    return (Fraction(rng.randint(-GRID_B, GRID_B), GRID_Q), Fraction(rng.randint(-GRID_B, GRID_B), GRID_Q))


def line_coefficients(op: WallOperator, k: int) -> dict:
    """a_{jw} for a line operator over one central variable t: the log is
    sum_j sum_w a_{jw} t^j e_{w alpha} / (v - 1/v)."""
    tctx = SeriesContext(["t"], [k])
    remapped = WallOperator(op.gamma, [f._replace(sigma=Multidegree((sum(f.sigma[0]),), 0)) for f in op.factors])
    lg = wall_operator_log(remapped, tctx)
    out = {}
    vm = QLaurent({1: 1, -1: -1})
    for (e, m, a, b), c in lg.items():
        j = e[0]
        w = a // op.gamma[0] if op.gamma[0] else b // op.gamma[1]
        val = c * vm
        if isinstance(val, QRational) and val.is_laurent():
            val = val.to_laurent()
        out[(j, w)] = val
    return out


def nilpotent_context(n_lines: int, k: int) -> SeriesContext:
    return SeriesContext([], [], [(i, j) for i in range(1, n_lines + 1) for j in range(1, k + 1)])


def perturb_standard(lines: list, k: int, seed: int = DEFAULT_SEED, rng: random.Random | None = None,
                     attempt: int = 0) -> Diagram:
    """Replace each line theta_i (over t_i, mod t_i^{k+1}) by elementary lines

        R alpha_i + beta_{iJw},  theta[(#J)! a_{i(#J)w} u_{iJ} e_{w alpha_i}]

    for nonempty J in {1..k}."""
    ctx = nilpotent_context(len(lines), k)
    rng = rng or random.Random(seed)
    diag = Diagram(ctx, [], seed, attempt)
    for i, op in enumerate(lines, start=1):
        coeffs = line_coefficients(op, k)
        for size in range(1, k + 1):
            for J in combinations(range(1, k + 1), size):
                mask = 0
                for j in J:
                    mask |= 1 << ctx.nilpotent.index((i, j))
                for (j, w), a in sorted(coeffs.items()):
                    if j != size or not a:
                        continue
                    lat = (w * op.gamma[0], w * op.gamma[1])
                    diag.add(Wall("line", _offset(rng), lat, a * factorial(size), mask, 0, None, (i, J, w)))
    return diag


def elementary_lines(ends: list, seed: int = DEFAULT_SEED, rng: random.Random | None = None, attempt: int = 0) -> Diagram:
    """One unit-coefficient line per end (alpha, weight), each with its own nilpotent."""
    ctx = SeriesContext([], [], list(range(len(ends))))
    rng = rng or random.Random(seed)
    diag = Diagram(ctx, [], seed, attempt)
    for idx, (al, w) in enumerate(ends):
        diag.add(Wall("line", _offset(rng), (w * al[0], w * al[1]), QLaurent.const(1), 1 << idx, 0, None, (idx, tuple(al), w)))
    return diag


# ---------------------------------------------------------------------------
# saturation


def scatter_pair(d1: Wall, d2: Wall, point=None):
    """Ray produced by a scattering pair, or None for parallel / overlapping data."""
    if d1.mask & d2.mask:
        return None
    k = pairing(d1.lattice, d2.lattice)
    if k == 0:
        return None
    if k < 0:
        d1, d2 = d2, d1
        k = -k
    if point is None:
        r = intersect(d1, d2)
        if not r or r[0] != "point":
            return None
        point = r[1]
    lat = (d1.lattice[0] + d2.lattice[0], d1.lattice[1] + d2.lattice[1])
    coeff = q_number(k) * d1.coeff * d2.coeff
    return Wall("ray", point, lat, coeff, d1.mask | d2.mask, 0, (d1.index, d2.index))


def saturate(diag: Diagram, max_rounds: int | None = None) -> Diagram:
    """Add rays from scattering pairs round by round until stable.

    Raises DegenerateError on any non-generic coincidence: collinear
    disjoint walls, a disjoint wall through a ray's base point, or three
    pairwise disjoint walls through one point.
    """
    points: dict = {}
    new = list(diag.walls)
    old: list = []
    rnd = 0
    limit = max_rounds if max_rounds is not None else len(diag.ctx.nilpotent) + 1
    while new and rnd < limit:
        rnd += 1
        born = []
        pool = old + new
        for i, a in enumerate(new):
            am = a.mask
            # pairs (new, old) and (new, new) with the new one first in pool order
            for b in pool[: len(old) + i]:
                if am & b.mask:
                    continue
                r = intersect(a, b)
                if r is None:
                    continue
                if r[0] == "parallel":
                    if r[1]:
                        raise DegenerateError("collinear walls with disjoint support")
                    continue
                _, p, s1, s2 = r
                if (a.kind == "ray" and s1 == 0) or (b.kind == "ray" and s2 == 0):
                    raise DegenerateError("a wall passes through a ray's base point")
                points.setdefault(p, []).append((a.mask, b.mask))
                ray = scatter_pair(a, b, p)
                if ray is not None:
                    ray.round = rnd
                    born.append(ray)
        old = pool
        new = []
        for ray in born:
            new.append(diag.add(ray))
    for p, pairs in points.items():
        if len(pairs) < 2:
            continue
        masks = set()
        for m1, m2 in pairs:
            masks.add(m1)
            masks.add(m2)
        for a, b, c in combinations(sorted(masks), 3):
            if not (a & b) and not (a & c) and not (b & c):
                raise DegenerateError(f"three disjoint walls meet at {p}")
    return diag


def saturate_generic(build, seed: int = DEFAULT_SEED, retries: int = MAX_RETRIES) -> Diagram:
    """build(rng, attempt) -> Diagram; resample until saturation is generic."""
    rng = random.Random(seed)
    last = None
    for attempt in range(retries):
        diag = build(rng, attempt)
        try:
            return saturate(diag)
        except DegenerateError as exc:
            last = exc
    raise DegenerateError(f"no generic sample after {retries} attempts: {last}")


# ---------------------------------------------------------------------------
# path ordered products


def _bbox(points):
    xs = [p[0] for p in points] or [Fraction(0)]
    ys = [p[1] for p in points] or [Fraction(0)]
    return min(xs), min(ys), max(xs), max(ys)


def enclosing_loop(diag: Diagram) -> list:
    """Clockwise rectangle around every singular point, starting bottom-left.

    With base points in [-R, R]^2 and primitive directions of sup-norm at
    most M, two walls meeting transversally do so within R(1 + 4M^2) of the
    origin, so no pairwise intersection has to be computed.
    """
    R = max([abs(c) for w in diag.walls for c in w.base] + [Fraction(1)])
    M = max([abs(c) for w in diag.walls for c in w.direction] + [1])
    H = R * (1 + 4 * M * M) + 1
    x0, x1 = -H - Fraction(1, 7), H + Fraction(1, 11)
    y0, y1 = -H - Fraction(1, 13), H + Fraction(1, 17)
    return [(x0, y0), (x0, y1), (x1, y1), (x1, y0), (x0, y0)]


def _segment_crossings(diag: Diagram, a, b, seg_index: int):
    d = (b[0] - a[0], b[1] - a[1])
    out = []
    for w in diag.walls:
        wd = w.direction
        det = _cross(d, wd)
        rel = (w.base[0] - a[0], w.base[1] - a[1])
        if det == 0:
            if _cross(rel, d) == 0:
                raise PathError("path runs along a wall")
            continue
        s = Fraction(_cross(rel, wd)) / det  # along the segment
        u = Fraction(_cross(rel, d)) / det  # along the wall
        if not (0 <= s <= 1):
            continue
        if w.kind == "ray" and u < 0:
            continue
        if w.kind == "ray" and u == 0:
            raise PathError("path meets a ray's base point")
        if s == 0 or s == 1:
            raise PathError("path corner lies on a wall")
        eps = 1 if _cross(d, wd) > 0 else -1
        out.append((seg_index, s, w, eps))
    return out


def path_crossings(diag: Diagram, path: list, check_singular: bool = True) -> list:
    """Ordered (wall, eps) crossings along a polygonal path."""
    if check_singular:
        sing = set(diag.singular_points())
        for p in path:
            if p in sing:
                raise PathError("path vertex is singular")
    cr = []
    for i in range(len(path) - 1):
        cr.extend(_segment_crossings(diag, path[i], path[i + 1], i))
    cr.sort(key=lambda t: (t[0], t[1]))
    for (i1, s1, w1, _), (i2, s2, w2, _) in zip(cr, cr[1:]):
        if i1 == i2 and s1 == s2 and not (w1.mask & w2.mask) and pairing(w1.lattice, w2.lattice):
            raise PathError("path crosses two non-commuting walls at one point")
    return [(w, eps) for _, _, w, eps in cr]


def path_ordered_product(diag: Diagram, path: list | None = None, elements=None):
    """theta_1^{e1} o ... o theta_s^{es} evaluated on x and y (or given elements)."""
    if path is None:
        cross = path_crossings(diag, enclosing_loop(diag), check_singular=False)
    else:
        cross = path_crossings(diag, path)
    ctx = diag.ctx
    if elements is None:
        elements = [TorusElement.e(ctx, X), TorusElement.e(ctx, Y)]
    acts = [(w.action(ctx), eps) for w, eps in cross]
    out = []
    for elem in elements:
        for act, eps in reversed(acts):
            elem = (act if eps > 0 else act.inverse()).apply(elem)
        out.append(elem)
    return out


def is_consistent(diag: Diagram, path: list | None = None) -> bool:
    x, y = path_ordered_product(diag, path)
    return x == TorusElement.e(diag.ctx, X) and y == TorusElement.e(diag.ctx, Y)


# ---------------------------------------------------------------------------
# collapse and read-back


def asymptotic_collapse(diag: Diagram) -> Diagram:
    """Move every wall to the origin; parallel walls stay separate (they commute)."""
    out = Diagram(diag.ctx, [], diag.seed, diag.attempt)
    origin = (Fraction(0), Fraction(0))
    for w in diag.walls:
        out.add(Wall(w.kind, origin, w.lattice, w.coeff, w.mask, w.round, w.parents, w.label, sigma_exps=w.sigma_exps))
    return out


def merge_by_direction(diag: Diagram, rays_only: bool = True) -> dict:
    """Total log per primitive direction: sum of c u_I e_lattice / (v - 1/v)."""
    ctx = diag.ctx
    vm = QLaurent({1: 1, -1: -1})
    acc: dict = {}
    for w in diag.walls:
        if rays_only and w.kind != "ray":
            continue
        g = w.direction
        exps = w.sigma_exps if w.sigma_exps is not None else ctx.zero_exps
        key = (exps, w.mask, w.lattice[0], w.lattice[1])
        t = acc.setdefault(g, {})
        val = QRational(QLaurent.const(1), vm) * w.coeff
        s = t.get(key)
        s = val if s is None else s + val
        if s:
            t[key] = s
        else:
            t.pop(key)
    return {g: TorusElement(ctx, t) for g, t in acc.items() if t}


def read_back(log_u: TorusElement, n_lines: int, k: int, tctx: SeriesContext) -> TorusElement:
    """Pull a log over the u_{ij} back to the t_i: coefficient of t^d is the
    coefficient of the initial-segment mask divided by prod d_i!."""
    uctx = log_u.ctx
    idx = {name: b for b, name in enumerate(uctx.nilpotent)}
    out = {}
    for (e, m, a, b), c in log_u.items():
        d = [0] * n_lines
        for (i, j), bit in idx.items():
            if m >> bit & 1:
                d[i - 1] += 1
        init = 0
        for i in range(1, n_lines + 1):
            for j in range(1, d[i - 1] + 1):
                init |= 1 << idx[(i, j)]
        if m != init:
            continue
        denom = 1
        for x in d:
            denom *= factorial(x)
        out[(tuple(d), 0, a, b)] = c * Fraction(1, denom)
    return TorusElement(tctx, out)


def rays_to_t(diag: Diagram, n_lines: int, k: int, tctx: SeriesContext) -> dict:
    """Per-direction logs over the central variables t_1..t_n."""
    return {g: read_back(el, n_lines, k, tctx) for g, el in merge_by_direction(diag).items()}


def perturbative_saturation(lines: list, k: int, seed: int = DEFAULT_SEED) -> Diagram:
    return saturate_generic(lambda rng, attempt: perturb_standard(lines, k, seed, rng, attempt), seed)
