"""Bipartite quivers, Harder-Narasimhan recursion and the MPS identity.

Everything is a rational function of q = v^2.  For a dimension vector d the
stack of all representations has motivic count

    [R_d]/[G_d] = q^{sum_a d_s(a) d_t(a)} / prod_v |GL_{d_v}(F_q)|,

and the HN stratification (Reineke) splits it by HN type
d = d^1 + ... + d^s with strictly decreasing slopes:

    [R_d]/[G_d] = sum q^{-sum_{k<l} <d^l, d^k>} prod_k [R^sst_{d^k}]/[G_{d^k}].

The semistable part is obtained by subtracting the types with s >= 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import factorial, gcd

from .algebra import QLaurent, QRational, q_number

Q = QLaurent.monomial(2)
ONE = QLaurent.const(1)


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class QuiverSpec:
    """Sources 0..n_src-1, then sinks; arrows[i][j] arrows from source i to sink j."""

    n_sources: int
    n_sinks: int
    arrows: tuple
    labels: tuple = ()

    def __post_init__(self):
        arr = tuple(tuple(int(a) for a in row) for row in self.arrows)
        if len(arr) != self.n_sources or any(len(r) != self.n_sinks for r in arr):
            raise QuiverError("arrow matrix has the wrong shape")
        if any(a < 0 for r in arr for a in r):
            raise QuiverError("arrow multiplicities must be nonnegative")
        object.__setattr__(self, "arrows", arr)

    @property
    def n_vertices(self) -> int:
        return self.n_sources + self.n_sinks

    def euler(self, d, e) -> int:
        """<d, e> = sum_v d_v e_v - sum_{i -> j} d_i e_j."""
        s = sum(x * y for x, y in zip(d, e))
        for i in range(self.n_sources):
            for j in range(self.n_sinks):
                s -= self.arrows[i][j] * d[i] * e[self.n_sources + j]
        return s

    def antisymmetric(self, d, e) -> int:
        return self.euler(d, e) - self.euler(e, d)

    def arrow_dimension(self, d) -> int:
        return sum(self.arrows[i][j] * d[i] * d[self.n_sources + j]
                   for i in range(self.n_sources) for j in range(self.n_sinks))


@dataclass(frozen=True)
class Stability:
    """Slope Theta.d / kappa.d."""

    theta: tuple
    kappa: tuple

    def slope(self, d) -> Fraction:
        den = sum(k * x for k, x in zip(self.kappa, d))
        if den <= 0:
            raise QuiverError("slope undefined for this dimension vector")
        return Fraction(sum(t * x for t, x in zip(self.theta, d)), den)

    @classmethod
    def level(cls, quiver: QuiverSpec, weights=None) -> "Stability":
        """Slope = (weighted source dimension) / (weighted total dimension).

        Without weights this is Theta = 1 on sources, 0 on sinks."""
        kappa = tuple(weights) if weights is not None else (1,) * quiver.n_vertices
        theta = kappa[:quiver.n_sources] + (0,) * quiver.n_sinks
        return cls(theta, kappa)


def build_bipartite(l1: int, l2: int) -> QuiverSpec:
    if l1 < 1 or l2 < 1:
        raise QuiverError("need at least one source and one sink")
    return QuiverSpec(l1, l2, tuple((1,) * l2 for _ in range(l1)))


def dimension_vector(P1, P2) -> tuple:
    return tuple(P1) + tuple(P2)


def gl_order(n: int) -> QLaurent:
    out = ONE
    for i in range(n):
        out = out * (Q ** n - Q ** i)
    return out


def all_reps(quiver: QuiverSpec, d) -> QRational:
    den = ONE
    for x in d:
        den = den * gl_order(x)
    return QRational(Q ** quiver.arrow_dimension(d), den)


class HNSolver:
    """Memoized HN recursion for one quiver and stability."""

    def __init__(self, quiver: QuiverSpec, stability: Stability):
        if len(stability.theta) != quiver.n_vertices or len(stability.kappa) != quiver.n_vertices:
            raise QuiverError("stability has the wrong length")
        self.quiver = quiver
        self.stab = stability
        self._sst: dict = {}
        self._tail: dict = {}

    @staticmethod
    def _subvectors(d):
        for e in product(*(range(x + 1) for x in d)):
            if any(e) and e != tuple(d):
                yield e

    def sst(self, d) -> QRational:
        d = tuple(d)
        if d in self._sst:
            return self._sst[d]
        mu = self.stab.slope(d)
        val = all_reps(self.quiver, d)
        for d1 in self._subvectors(d):
            mu1 = self.stab.slope(d1)
            if mu1 <= mu:
                continue
            rest = tuple(a - b for a, b in zip(d, d1))
            tail = self.tail(rest, mu1)
            if tail:
                val = val - self.sst(d1) * tail * QRational(QLaurent.monomial(-2 * self.quiver.euler(rest, d1)))
        self._sst[d] = val
        return val

    def tail(self, e, mu_max) -> QRational:
        """Sum over HN types of e whose slopes are all < mu_max."""
        e = tuple(e)
        if not any(e):
            return QRational(ONE)
        key = (e, mu_max)
        if key in self._tail:
            return self._tail[key]
        val = QRational(QLaurent())
        for e1 in list(self._subvectors(e)) + [e]:
            mu1 = self.stab.slope(e1)
            if mu1 >= mu_max:
                continue
            rest = tuple(a - b for a, b in zip(e, e1))
            t = self.tail(rest, mu1)
            if t:
                val = val + self.sst(e1) * t * QRational(QLaurent.monomial(-2 * self.quiver.euler(rest, e1)))
        self._tail[key] = val
        return val

    def hn_total(self, d) -> QRational:
        """All HN strata summed back up; equals all_reps(d)."""
        return self.tail(d, Fraction(10 ** 9))


def hn_stack_series(quiver: QuiverSpec, d, stability: Stability | None = None) -> QRational:
    stability = stability or Stability.level(quiver)
    if not any(d):
        raise QuiverError("dimension vector must be nonzero")
    return HNSolver(quiver, stability).sst(d)


def has_equal_slope_subvector(d, stability: Stability) -> bool:
    mu = stability.slope(d)
    return any(stability.slope(e) == mu for e in HNSolver._subvectors(d))


def stable_poincare(quiver: QuiverSpec, d, stability: Stability | None = None, solver: HNSolver | None = None) -> QLaurent:
    """v^{-dim} (q - 1) [R^sst_d]/[G_d] for d with no proper subvector of equal slope.

    Such d have sst = st and a fine moduli space; the result is checked to be
    a bar-symmetric Laurent polynomial with nonnegative integer coefficients.
    """
    d = tuple(d)
    stability = stability or Stability.level(quiver)
    if not any(d):
        raise QuiverError("dimension vector must be nonzero")
    if reduce(gcd, d) != 1:
        raise QuiverError(f"dimension vector {d} is not coprime")
    if has_equal_slope_subvector(d, stability):
        raise QuiverError(f"dimension vector {d} admits strictly semistable representations")
    solver = solver or HNSolver(quiver, stability)
    st = solver.sst(d) * QRational(Q - ONE)
    if not st.is_laurent():
        raise QuiverError(f"moduli count for {d} is not a polynomial: {st}")
    dim = 1 - quiver.euler(d, d)
    p = st.to_laurent().shift(-dim) if st.to_laurent() else QLaurent()
    if p and not p.is_bar_symmetric():
        raise QuiverError(f"Poincare polynomial for {d} is not bar symmetric: {p}")
    for _, c in p.items():
        if c < 0 or c.denominator != 1:
            raise QuiverError(f"Poincare polynomial for {d} has a bad coefficient: {p}")
    return p


# ---------------------------------------------------------------------------
# refinements and abelianization


@dataclass(frozen=True)
class Refinement:
    """For each part of P1 and P2 a partition of it, as ascending tuples of weights."""

    parts1: tuple
    parts2: tuple

    def weight_vector(self) -> tuple:
        w1 = tuple(sorted(w for part in self.parts1 for w in part))
        w2 = tuple(sorted(w for part in self.parts2 for w in part))
        return w1, w2

    def multiplicities(self):
        """k^i_{w,j} as a list of (w, k) per part."""
        out = []
        for part in self.parts1 + self.parts2:
            out.append([(w, part.count(w)) for w in sorted(set(part))])
        return out

    def coefficient(self) -> QRational:
        """prod (-1)^{k(w-1)} / (k! w^k [w]_q^k)."""
        val = QRational(ONE)
        for part in self.multiplicities():
            for w, k in part:
                num = QLaurent.const(Fraction((-1) ** (k * (w - 1)), factorial(k) * w ** k))
                val = val * QRational(num, q_number(w) ** k)
        return val


def enumerate_refinements(P1, P2) -> list:
    from .tropical import integer_partitions
    opts1 = [integer_partitions(p) for p in P1]
    opts2 = [integer_partitions(p) for p in P2]
    out = []
    for a in product(*opts1):
        for b in product(*opts2):
            out.append(Refinement(tuple(a), tuple(b)))
    return out


def build_abelianized(w1, w2):
    """Thin abelian quiver for weight vectors w1 (sources) and w2 (sinks):
    w * w' arrows from a level w source to a level w' sink.  Returns
    (quiver, dimension vector, stability with kappa = levels)."""
    w1 = tuple(w1)
    w2 = tuple(w2)
    if not w1 or not w2:
        raise QuiverError("abelianized quiver needs a nonempty refinement on both sides")
    quiver = QuiverSpec(len(w1), len(w2), tuple(tuple(a * b for b in w2) for a in w1),
                        tuple(("i", w) for w in w1) + tuple(("j", w) for w in w2))
    d = (1,) * (len(w1) + len(w2))
    return quiver, d, Stability.level(quiver, w1 + w2)


def abelian_poincare(w1, w2, weighted: bool = True) -> QLaurent:
    quiver, d, stab = build_abelianized(w1, w2)
    if not weighted:
        stab = Stability.level(quiver)
    return stable_poincare(quiver, d, stab)


def is_coprime(P1, P2) -> bool:
    return gcd(sum(P1), sum(P2)) == 1


def poincare_of_partitions(P1, P2) -> QLaurent:
    return stable_poincare(build_bipartite(len(P1), len(P2)), dimension_vector(P1, P2))


def mps_rhs(P1, P2) -> QRational:
    total = QRational(QLaurent())
    for ref in enumerate_refinements(P1, P2):
        w1, w2 = ref.weight_vector()
        total = total + ref.coefficient() * QRational(abelian_poincare(w1, w2))
    return total


def mps_check(P1, P2) -> bool:
    lhs = poincare_of_partitions(P1, P2)
    return QRational(lhs) == mps_rhs(P1, P2)


@dataclass
class ComparisonReport:
    P1: tuple
    P2: tuple
    tropical: object
    quiver: QLaurent
    refinements: list = field(default_factory=list)  # (w1, w2, abelian, trop)

    @property
    def ok(self) -> bool:
        return QRational.coerce(self.tropical) == QRational(self.quiver) and all(a == t for _, _, a, t in self.refinements)


def comparison_report(P1, P2) -> ComparisonReport:
    from .invariants import refined_gw
    from .tropical import WeightVector, refined_tropical_count
    rep = ComparisonReport(tuple(P1), tuple(P2), refined_gw(P1, P2), poincare_of_partitions(P1, P2))
    seen = set()
    for ref in enumerate_refinements(P1, P2):
        w = ref.weight_vector()
        if w in seen:
            continue
        seen.add(w)
        rep.refinements.append((w[0], w[1], abelian_poincare(*w), refined_tropical_count(WeightVector(w))))
    return rep


def comparison_check(P1, P2) -> bool:
    return comparison_report(P1, P2).ok


def coprime_sweep(max_lines: int = 4, max_size: int = 6) -> list:
    """All (P1, P2) with positive parts, l1 + l2 <= max_lines, |P1| + |P2| <= max_size
    and gcd(|P1|, |P2|) = 1."""
    from .invariants import ordered_partitions
    out = []
    for l1 in range(1, max_lines):
        for l2 in range(1, max_lines - l1 + 1):
            for s1 in range(l1, max_size + 1):
                for s2 in range(l2, max_size - s1 + 1):
                    if gcd(s1, s2) != 1:
                        continue
                    for P1 in ordered_partitions(s1, l1, allow_zero=False):
                        for P2 in ordered_partitions(s2, l2, allow_zero=False):
                            out.append((P1, P2))
    return out
