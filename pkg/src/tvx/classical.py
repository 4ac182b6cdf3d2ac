"""The classical tropical vertex group (q = 1), computed independently.

Functions are commutative truncated series; theta_{gamma, f} acts by
e_beta -> e_beta f^<gamma, beta>.  Wall functions of a consistent central
diagram are found degree by degree exactly as in the quantum engine, but
with rational coefficients throughout and no v anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Multidegree, SeriesContext, Series
from .torus import is_positive, pairing, slope_key, split_multiple, X, Y


class CSeries(Series):
    """Commutative series over a SeriesContext with rational coefficients."""

    __slots__ = ()


class ClassicalWall:
    """theta_{gamma, f} with f = 1 + (maximal ideal) supported on multiples of gamma."""

    def __init__(self, gamma, f: CSeries):
        self.gamma = tuple(gamma)
        self.f = f
        self._pow: dict = {}

    def power(self, j: int) -> CSeries:
        if j not in self._pow:
            if j >= 0:
                self._pow[j] = self.f ** j
            else:
                self._pow[j] = self.power(-j).inverse()
        return self._pow[j]

    def apply(self, elem: CSeries, inverse: bool = False) -> CSeries:
        ctx = elem.ctx
        acc: dict = {}
        mul = ctx.mul
        for (e, m, a, b), c in elem.items():
            j = pairing(self.gamma, (a, b))
            if inverse:
                j = -j
            if not j:
                s = acc.get((e, m, a, b), 0) + c
                acc[(e, m, a, b)] = s
                continue
            for (e2, m2, a2, b2), c2 in self.power(j).items():
                d = mul((e, m), (e2, m2))
                if d is None:
                    continue
                key = (d[0], d[1], a + a2, b + b2)
                acc[key] = acc.get(key, 0) + c * c2
        return CSeries._raw(ctx, {k: c for k, c in acc.items() if c})


def line_function(ctx: SeriesContext, alpha, sigma: Multidegree, ell) -> CSeries:
    """(1 + sigma e_alpha)^ell."""
    base = CSeries(ctx, {(sigma[0], sigma[1], alpha[0], alpha[1]): 1}) + CSeries.one(ctx)
    return base.power(Fraction(ell))


@dataclass
class ClassicalDiagram:
    ctx: SeriesContext
    lines: list
    rays: dict = field(default_factory=dict)

    def descending_walls(self):
        walls = list(self.lines) + list(self.rays.values())
        return sorted(walls, key=lambda w: slope_key(w.gamma), reverse=True)

    def ascending_lines(self):
        return sorted(self.lines, key=lambda w: slope_key(w.gamma))

    def function(self, gamma) -> CSeries:
        w = self.rays.get(tuple(gamma))
        return w.f if w is not None else CSeries.one(self.ctx)

    def directions(self):
        return sorted((g for g, w in self.rays.items() if w.f != CSeries.one(self.ctx)), key=slope_key, reverse=True)

    def is_consistent(self) -> bool:
        for g in (X, Y):
            elem = CSeries.monomial(self.ctx, g)
            for w in reversed(self.ascending_lines()):
                elem = w.apply(elem)
            for w in self.descending_walls():
                elem = w.apply(elem, inverse=True)
            if elem != CSeries.monomial(self.ctx, g):
                return False
        return True


def saturate_classical(lines: list, ctx: SeriesContext) -> ClassicalDiagram:
    diag = ClassicalDiagram(ctx, list(lines), {})
    targets = []
    for g in (X, Y):
        elem = CSeries.monomial(ctx, g)
        for w in reversed(diag.ascending_lines()):
            elem = w.apply(elem)
        targets.append(elem)
    deg = ctx.degree
    for N in range(1, ctx.nilpotency_bound() + 1):
        walls = diag.descending_walls()
        dd = []
        for tgt in targets:
            elem = tgt
            for w in walls:
                elem = w.apply(elem, inverse=True)
            dd.append(elem)
        cx = {(e, m, a - 1, b): c for (e, m, a, b), c in dd[0].items() if deg((e, m)) == N}
        cy = {(e, m, a, b - 1): c for (e, m, a, b), c in dd[1].items() if deg((e, m)) == N}
        for g, el in zip((X, Y), dd):
            for (e, m, a, b), c in el.items():
                d = deg((e, m))
                if 0 < d < N or (d == 0 and ((a, b) != g or c != 1)):
                    raise RuntimeError(f"classical discrepancy not trivial below degree {N}")
        for key in sorted(set(cx) | set(cy)):
            e, m, ma, mb = key
            if not is_positive((ma, mb)):
                raise RuntimeError(f"classical defect in direction {(ma, mb)}")
            k, gamma = split_multiple((ma, mb))
            cands = []
            if gamma[1]:
                cands.append(-Fraction(cx.get(key, 0)) / gamma[1])
            if gamma[0]:
                cands.append(Fraction(cy.get(key, 0)) / gamma[0])
            if len(set(cands)) != 1:
                raise RuntimeError(f"classical x/y defects disagree at {(ma, mb)}")
            c = cands[0]
            if not c:
                continue
            w = diag.rays.get(gamma)
            f_old = w.f if w is not None else CSeries.one(ctx)
            new = f_old * (CSeries.one(ctx) + CSeries(ctx, {(e, m, ma, mb): c}))
            diag.rays[gamma] = ClassicalWall(gamma, new)
    return diag


def classical_commutator(l1: int, l2: int, order: int) -> ClassicalDiagram:
    """theta_{(1,0),(1+tx)^l1} and theta_{(0,1),(1+ty)^l2} over Q[t]/t^{order+1}."""
    ctx = SeriesContext(["t"], [order])
    t = ctx.var("t")
    lines = [ClassicalWall(X, line_function(ctx, X, t, l1)), ClassicalWall(Y, line_function(ctx, Y, t, l2))]
    return saturate_classical(lines, ctx)


def classical_from_quantum(op, ctx: SeriesContext) -> CSeries:
    """q = 1 limit of a quantum wall operator as a classical wall function.

    theta^{(-1)^n Omega}[(-v)^n sigma e_{k gamma}] has classical limit
    theta_{gamma, (1 + (-1)^n sigma e_{k gamma})^{k (-1)^n Omega}}.
    """
    f = CSeries.one(ctx)
    for fac in op.factors:
        sign = -1 if fac.n % 2 else 1
        al = (fac.k * op.gamma[0], fac.k * op.gamma[1])
        base = CSeries.one(ctx) + CSeries(ctx, {(fac.sigma[0], fac.sigma[1], al[0], al[1]): sign})
        f = f * base.power(fac.k * sign * fac.omega)
    return f


def log_coefficients(f: CSeries, gamma) -> dict:
    """c_k in log f = sum_k c_k sigma e_{k gamma}, keyed by (multidegree, k)."""
    out = {}
    for (e, m, a, b), c in f.log().items():
        k = a // gamma[0] if gamma[0] else b // gamma[1]
        out[(Multidegree(e, m), k)] = c
    return out
