"""Order-by-order factorization of products of wall operators.

Given lines through the origin, find the rays that make the central diagram
consistent: the product of all walls in decreasing slope order must equal
the product of the lines in increasing slope order.  We proceed degree by
degree in the maximal ideal.  If D = P^-1 o A is the identity modulo m^N,
its degree N part is the inner derivation by some X = sum l_m sigma e_m, and

    D(x) - x = sum l_m (v^{-m_b} - v^{m_b}) sigma e_{m + (1,0)}
    D(y) - y = sum l_m (v^{m_a} - v^{-m_a}) sigma e_{m + (0,1)}

in degree N.  The new factors at lattice m have leading log l_m sigma e_m,
i.e. P(m) = sum_n Omega_n v^n = l_m (v - 1/v).  Both generators are read
and required to agree, which is a built-in consistency check.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Multidegree, NotClearedError, QLaurent, SeriesContext, q_number
from .torus import (
    Factor,
    TorusElement,
    WallOperator,
    X,
    Y,
    apply_operator,
    is_positive,
    slope_key,
    split_multiple,
)

log = logging.getLogger(__name__)


class FactorizationError(RuntimeError):
    pass


@dataclass
class CentralDiagram:
    """Lines through the origin plus rays from the origin."""

    ctx: SeriesContext
    lines: list
    rays: dict = field(default_factory=dict)

    def ascending_lines(self) -> list:
        return sorted(self.lines, key=lambda op: slope_key(op.gamma))

    def descending_walls(self) -> list:
        """Lines and rays in decreasing slope order (parallel walls commute)."""
        walls = list(self.lines) + [op for op in self.rays.values() if op.factors]
        return sorted(walls, key=lambda op: slope_key(op.gamma), reverse=True)

    def directions(self) -> list:
        return sorted((g for g, op in self.rays.items() if op.factors), key=slope_key, reverse=True)

    def ray(self, gamma) -> WallOperator:
        return self.rays.get(tuple(gamma), WallOperator(tuple(gamma), []))

    def loop_images(self):
        """Images of x and y under the clockwise loop product (identity iff consistent)."""
        out = []
        for g in (X, Y):
            elem = TorusElement.e(self.ctx, g)
            for op in reversed(self.ascending_lines()):
                elem = apply_operator(elem, op)
            for op in self.descending_walls():
                elem = apply_operator(elem, op, inverse=True)
            out.append(elem)
        return out

    def is_consistent(self) -> bool:
        x, y = self.loop_images()
        return x == TorusElement.e(self.ctx, X) and y == TorusElement.e(self.ctx, Y)


def _apply_all(elem, ops_inv):
    for op, inv in ops_inv:
        elem = apply_operator(elem, op, inv)
    return elem


def _discrepancy(diag: CentralDiagram, targets):
    """D(g) for g in (x, y) where D = P^-1 o A."""
    desc = diag.descending_walls()
    out = []
    for g, a_img in zip((X, Y), targets):
        elem = a_img
        # P = F_1 o ... o F_r; P^-1 applies F_1^-1 first
        for op in desc:
            elem = apply_operator(elem, op, inverse=True)
        out.append(elem)
    return out


def _extract_degree(ctx: SeriesContext, dx: TorusElement, dy: TorusElement, N: int):
    """Read the degree N inner derivation from D(x), D(y)."""
    deg = ctx.degree
    cx: dict = {}
    cy: dict = {}
    for (e, m, a, b), c in dx.items():
        d = deg((e, m))
        if d == 0:
            if (a, b) != X or c != 1:
                raise FactorizationError("discrepancy has a degree-0 defect")
            continue
        if d < N:
            raise FactorizationError(f"discrepancy not trivial below degree {N}")
        if d == N:
            cx[(e, m, a - 1, b)] = c
    for (e, m, a, b), c in dy.items():
        d = deg((e, m))
        if d == 0:
            if (a, b) != Y or c != 1:
                raise FactorizationError("discrepancy has a degree-0 defect")
            continue
        if d < N:
            raise FactorizationError(f"discrepancy not trivial below degree {N}")
        if d == N:
            cy[(e, m, a, b - 1)] = c
    found = {}
    for key in sorted(set(cx) | set(cy)):
        e, m, ma, mb = key
        if not is_positive((ma, mb)):
            raise FactorizationError(f"defect in non-positive lattice direction {(ma, mb)}")
        px = py = None
        if mb:
            px = -(QLaurent.const(0) + cx.get(key, QLaurent())).exact_div(q_number(mb))
        elif key in cx:
            raise FactorizationError("x-defect at a lattice vector with m_b = 0")
        if ma:
            py = (QLaurent.const(0) + cy.get(key, QLaurent())).exact_div(q_number(ma))
        elif key in cy:
            raise FactorizationError("y-defect at a lattice vector with m_a = 0")
        if px is not None and py is not None and px != py:
            raise FactorizationError(f"x and y defects disagree at {(ma, mb)}: {px} vs {py}")
        P = px if px is not None else py
        if P:
            found[(Multidegree(e, m), (ma, mb))] = P
    return found


def saturate_central(lines: list, ctx: SeriesContext, max_degree: int | None = None) -> CentralDiagram:
    """Find the rays completing the given lines to a consistent central diagram."""
    diag = CentralDiagram(ctx, list(lines), {})
    asc = diag.ascending_lines()
    targets = []
    for g in (X, Y):
        elem = TorusElement.e(ctx, g)
        for op in reversed(asc):
            elem = apply_operator(elem, op)
        targets.append(elem)
    top = ctx.nilpotency_bound() if max_degree is None else max_degree
    for N in range(1, top + 1):
        dx, dy = _discrepancy(diag, targets)
        try:
            found = _extract_degree(ctx, dx, dy, N)
        except NotClearedError as exc:
            raise FactorizationError(f"defect at degree {N} does not clear: {exc}") from exc
        for (sigma, m), P in found.items():
            k, gamma = split_multiple(m)
            op = diag.rays.setdefault(gamma, WallOperator(gamma, []))
            for n, om in P.items():
                op.factors.append(Factor(k, n, Fraction(om), sigma))
        log.debug("degree %d: %d new factors", N, len(found))
    return diag


def standard_lines(ctx: SeriesContext, ells, directions=((1, 0), (0, 1)), variables=None) -> list:
    """theta^{l_i}[t_i e_{alpha_i}] for each line i."""
    lines = []
    if variables is None:
        variables = ctx.central if len(ctx.central) == len(ells) else [ctx.central[0]] * len(ells)
    for ell, al, var in zip(ells, directions, variables):
        lines.append(WallOperator(tuple(al), [Factor(1, 0, Fraction(ell), ctx.var(var))]))
    return lines


def commutator_factorization(l1: int, l2: int, order: int, single: bool = True) -> CentralDiagram:
    """Slope-ordered factorization for theta^{l1}[t x], theta^{l2}[t y] (or s, t)."""
    if single:
        ctx = SeriesContext(["t"], [order])
        lines = standard_lines(ctx, [l1, l2], variables=["t", "t"])
    else:
        ctx = SeriesContext(["s", "t"], [order, order])
        lines = standard_lines(ctx, [l1, l2], variables=["s", "t"])
    return saturate_central(lines, ctx)


def multiparameter_factorization(l1: int, l2: int, order: int, alphas=((1, 0), (0, 1))) -> CentralDiagram:
    """Lines theta[s_i e_alpha1] (i <= l1) and theta[t_j e_alpha2] (j <= l2)."""
    names = [f"s{i + 1}" for i in range(l1)] + [f"t{j + 1}" for j in range(l2)]
    ctx = SeriesContext(names, [order] * len(names))
    lines = []
    for i in range(l1):
        lines.append(WallOperator(alphas[0], [Factor(1, 0, Fraction(1), ctx.var(names[i]))]))
    for j in range(l2):
        lines.append(WallOperator(alphas[1], [Factor(1, 0, Fraction(1), ctx.var(names[l1 + j]))]))
    return saturate_central(lines, ctx)
