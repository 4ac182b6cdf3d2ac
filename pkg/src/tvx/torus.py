"""The quantum torus and its wall automorphisms.

Elements are finite sums  c * sigma^d * e_(a,b)  over a SeriesContext with
the twisted product  e_al e_be = v^<al,be> e_(al+be),  <(a,b),(a',b')> = ab' - a'b.

A wall automorphism attached to a primitive positive direction gamma is a
finite product of factors  theta^{(-1)^n Omega}[(-v)^n sigma e_{k gamma}].
Every such factor acts on a single basis element by right multiplication
with a commutative series (see ``factor_series``), so automorphisms are
applied to arbitrary elements term by term without ever forming the
exponential of a noncommutative log.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple

from .algebra import (
    GradedElement,
    Multidegree,
    QLaurent,
    QRational,
    SeriesContext,
    binomial_series,
    q_number,
    rat_str,
)

# ---------------------------------------------------------------------------
# lattice helpers


def pairing(al, be) -> int:
    """<al, be> = al_a * be_b - be_a * al_b."""
    return al[0] * be[1] - be[0] * al[1]


def is_positive(al) -> bool:
    return al[0] >= 0 and al[1] >= 0 and (al[0], al[1]) != (0, 0)


def is_primitive(al) -> bool:
    return gcd(al[0], al[1]) == 1


def primitive(al) -> tuple[int, int]:
    g = gcd(al[0], al[1])
    if g == 0:
        raise ValueError("zero vector has no direction")
    return al[0] // g, al[1] // g


def split_multiple(al) -> tuple[int, tuple[int, int]]:
    """Write al = k * gamma with gamma primitive, k >= 1."""
    g = gcd(al[0], al[1])
    return g, (al[0] // g, al[1] // g)


def slope_key(al):
    """Sort key increasing with slope b/a for positive vectors."""
    return Fraction(al[1], al[0]) if al[0] else Fraction(10 ** 18)


# ---------------------------------------------------------------------------
# elements


class TorusElement(GradedElement):
    """Truncated element of the quantum torus over a base ring."""

    __slots__ = ()

    def _pairing(self, a1, b1, a2, b2):
        return a1 * b2 - a2 * b1

    @classmethod
    def e(cls, ctx: SeriesContext, al, md: Multidegree | None = None, c=1) -> "TorusElement":
        return cls.monomial(ctx, tuple(al), md, c)

    def bracket(self, other: "TorusElement") -> "TorusElement":
        return self * other - other * self

    def classical_limit(self):
        """Specialize v -> 1; every coefficient must be a Laurent polynomial."""
        from .classical import CSeries
        out = {}
        for k, c in self._t.items():
            if isinstance(c, QRational):
                c = c.to_laurent()
            x = c.eval_at_one() if isinstance(c, QLaurent) else Fraction(c)
            if x:
                out[k] = out.get(k, 0) + x
        return CSeries(self.ctx, out)

    def clear(self) -> "TorusElement":
        """Convert QRational coefficients to Laurent polynomials (or raise)."""
        out = {}
        for k, c in self._t.items():
            out[k] = c.to_laurent() if isinstance(c, QRational) else c
        return TorusElement._raw(self.ctx, out)

    def homogeneous_part(self, degree: int) -> "TorusElement":
        deg = self.ctx.degree
        return TorusElement._raw(self.ctx, {k: c for k, c in self._t.items() if deg((k[0], k[1])) == degree})


def twisted_product(x: TorusElement, y: TorusElement) -> TorusElement:
    return x * y


# ---------------------------------------------------------------------------
# wall operators


class Factor(NamedTuple):
    """theta^{(-1)^n omega}[(-v)^n sigma e_{k gamma}] for the owning direction."""

    k: int
    n: int
    omega: Fraction
    sigma: Multidegree


@dataclass
class WallOperator:
    """Product of commuting factors on one primitive positive direction."""

    gamma: tuple
    factors: list = field(default_factory=list)

    def __post_init__(self):
        self.gamma = tuple(self.gamma)
        if not is_positive(self.gamma) or not is_primitive(self.gamma):
            raise ValueError(f"direction {self.gamma} must be primitive and positive")
        self.factors = [Factor(int(f[0]), int(f[1]), Fraction(f[2]), f[3]) for f in self.factors]

    def inverse(self) -> "WallOperator":
        return WallOperator(self.gamma, [f._replace(omega=-f.omega) for f in reversed(self.factors)])

    def is_identity(self) -> bool:
        return not self.factors

    def spectrum(self) -> dict:
        """Collect omegas by (k, n, sigma)."""
        out: dict = {}
        for f in self.factors:
            key = (f.k, f.n, f.sigma)
            out[key] = out.get(key, 0) + f.omega
        return {k: v for k, v in out.items() if v}

    def to_json(self, ctx: SeriesContext | None = None) -> dict:
        spec = []
        for (k, n, sig), om in sorted(self.spectrum().items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            entry = {"k": k, "n": n, "omega": rat_str(om)}
            if ctx is not None:
                entry["sigma"] = {"exps": list(sig[0]), "mask": sig[1]}
            spec.append(entry)
        return {"gamma": list(self.gamma), "spectrum": spec}

    @classmethod
    def from_json(cls, obj, ctx: SeriesContext) -> "WallOperator":
        gamma = tuple(obj["gamma"])
        facs = []
        for e in obj["spectrum"]:
            if "sigma" in e:
                sig = Multidegree(tuple(e["sigma"]["exps"]), int(e["sigma"]["mask"]))
            else:
                sig = standard_sigma(ctx, gamma, int(e["k"]))
            facs.append(Factor(int(e["k"]), int(e["n"]), Fraction(e["omega"]), sig))
        return cls(gamma, facs)


def standard_sigma(ctx: SeriesContext, gamma, k: int) -> Multidegree:
    """sigma^{k gamma} = s^{k g1} t^{k g2} (two central variables) or t^{k(g1+g2)} (one)."""
    if len(ctx.central) == 1:
        return Multidegree((k * (gamma[0] + gamma[1]),), 0)
    if len(ctx.central) == 2:
        return Multidegree((k * gamma[0], k * gamma[1]), 0)
    raise ValueError("standard sigma needs one or two central variables")


# ---------------------------------------------------------------------------
# adjoint action


@lru_cache(maxsize=None)
def factor_series(kappa: int, n: int, expo: Fraction, jmax: int) -> tuple:
    """Coefficients F_0..F_jmax (QLaurent) of the commutative series F(z) with

        theta^expo[(-v)^n z](e_beta) = sum_j F_j * e_beta * z^j,

    kappa = <alpha, beta>, already including the reordering factor v^{-j kappa}
    that turns e_beta z^j into sigma^j e_{beta + j alpha}.
    """
    series = [QLaurent.const(1)] + [QLaurent()] * jmax
    sign = -1 if n % 2 else 1
    if kappa >= 0:
        rng, ex = range(0, kappa), expo
    else:
        rng, ex = range(kappa, 0), -expo
    binom = binomial_series(ex, jmax)
    for k in rng:
        c = QLaurent.monomial(2 * k + n + 1, sign)
        # (1 + c z)^ex
        fac = [QLaurent.const(binom[0])]
        cp = QLaurent.const(1)
        for i in range(1, jmax + 1):
            cp = cp * c
            fac.append(cp * binom[i])
        new = [QLaurent()] * (jmax + 1)
        for i, a in enumerate(series):
            if not a:
                continue
            for j in range(0, jmax + 1 - i):
                if fac[j]:
                    new[i + j] = new[i + j] + a * fac[j]
        series = new
    return tuple(s.shift(-j * kappa) for j, s in enumerate(series))


class _FactorAction:
    """Precomputed data to apply one factor (or its inverse) to elements."""

    __slots__ = ("ctx", "alpha", "n", "expo", "powers")

    def __init__(self, ctx: SeriesContext, alpha, n: int, expo: Fraction, sigma):
        if not ctx.in_max_ideal(sigma):
            raise ValueError("sigma must lie in the maximal ideal")
        self.ctx = ctx
        self.alpha = alpha
        self.n = n
        self.expo = expo
        jmax = ctx.max_power(sigma)
        self.powers = []
        for j in range(jmax + 1):
            p = ctx.power(sigma, j)
            if p is None:
                break
            self.powers.append(p)

    def apply(self, elem: TorusElement) -> TorusElement:
        ctx = self.ctx
        aa, ab = self.alpha
        jmax = len(self.powers) - 1
        mul = ctx.mul
        out: dict = {}
        for (e, m, a, b), c in elem._t.items():
            kappa = aa * b - a * ab
            F = factor_series(kappa, self.n, self.expo, jmax)
            for j, p in enumerate(self.powers):
                fj = F[j]
                if not fj:
                    continue
                if j == 0:
                    key = (e, m, a, b)
                    cc = c * fj
                else:
                    d = mul((e, m), p)
                    if d is None:
                        continue
                    key = (d[0], d[1], a + j * aa, b + j * ab)
                    cc = c * fj
                s = out.get(key)
                s = cc if s is None else s + cc
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return TorusElement._raw(ctx, out)


class ElementaryAction:
    """theta[c sigma e_alpha] for a square-zero sigma and scalar c in Q(v).

    Acts by e_beta -> e_beta + [<alpha, beta>]_q c sigma e_{alpha + beta}.
    """

    __slots__ = ("ctx", "alpha", "coeff", "sigma")

    def __init__(self, ctx: SeriesContext, alpha, coeff, sigma: Multidegree):
        self.ctx = ctx
        self.alpha = tuple(alpha)
        self.coeff = coeff
        self.sigma = sigma

    def inverse(self) -> "ElementaryAction":
        return ElementaryAction(self.ctx, self.alpha, -self.coeff, self.sigma)

    def apply(self, elem: TorusElement) -> TorusElement:
        aa, ab = self.alpha
        sm = self.sigma[1]
        se = self.sigma[0]
        trivial_e = not any(se)
        mul = self.ctx.mul
        out = dict(elem._t)
        for (e, m, a, b), c in elem._t.items():
            if m & sm:
                continue
            kappa = aa * b - a * ab
            if not kappa:
                continue
            if trivial_e:
                d = (e, m | sm)
            else:
                d = mul((e, m), self.sigma)
                if d is None:
                    continue
            key = (d[0], d[1], a + aa, b + ab)
            cc = c * self.coeff * q_number(kappa)
            s = out.get(key)
            s = cc if s is None else s + cc
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return TorusElement._raw(self.ctx, out)


def factor_action(ctx: SeriesContext, gamma, f: Factor, inverse: bool = False) -> _FactorAction:
    expo = (-1) ** (f.n % 2) * f.omega
    if inverse:
        expo = -expo
    alpha = (f.k * gamma[0], f.k * gamma[1])
    return _FactorAction(ctx, alpha, f.n, Fraction(expo), f.sigma)


def apply_operator(elem: TorusElement, op: WallOperator, inverse: bool = False) -> TorusElement:
    """Image of elem under op (or op^-1).  Factors commute, so order is free."""
    for f in op.factors:
        elem = factor_action(elem.ctx, op.gamma, f, inverse).apply(elem)
    return elem


def adjoint_action(op: WallOperator, beta, ctx: SeriesContext) -> TorusElement:
    return apply_operator(TorusElement.e(ctx, beta), op)


def qdilog_log(ctx: SeriesContext, sigma: Multidegree, alpha, n: int, omega) -> TorusElement:
    """omega * log E((-v)^n sigma e_alpha), truncated by ctx.

    Coefficient of sigma^r e_{r alpha}:
        -omega (-v)^{nr} / (r ((-v)^r - (-v)^-r)).
    """
    if not ctx.in_max_ideal(sigma):
        raise ValueError("sigma must lie in the maximal ideal")
    omega = Fraction(omega)
    out = {}
    if not omega:
        return TorusElement(ctx)
    for r in range(1, ctx.max_power(sigma) + 1):
        p = ctx.power(sigma, r)
        if p is None:
            break
        sgn = (-1) ** ((n * r + r + 1) % 2)
        num = QLaurent.monomial(n * r, sgn * omega / r)
        den = QLaurent({r: 1, -r: -1})
        out[(p[0], p[1], r * alpha[0], r * alpha[1])] = QRational(num, den)
    return TorusElement._raw(ctx, out)


def wall_operator_log(op: WallOperator, ctx: SeriesContext) -> TorusElement:
    """Total logarithm of the (commuting) factors of op."""
    acc = TorusElement(ctx)
    for f in op.factors:
        expo = (-1) ** (f.n % 2) * f.omega
        acc = acc + qdilog_log(ctx, f.sigma, (f.k * op.gamma[0], f.k * op.gamma[1]), f.n, expo)
    return acc


# ---------------------------------------------------------------------------
# automorphisms given on generators


X = (1, 0)
Y = (0, 1)


class GeneratorImages:
    """An algebra automorphism recorded by the images of x = e_(1,0), y = e_(0,1)."""

    def __init__(self, ctx: SeriesContext, x: TorusElement, y: TorusElement):
        self.ctx = ctx
        self.x = x
        self.y = y
        self._pow: dict = {}

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, TorusElement.e(ctx, X), TorusElement.e(ctx, Y))

    @classmethod
    def from_operator(cls, op: WallOperator, ctx: SeriesContext, inverse: bool = False):
        return cls(ctx, apply_operator(TorusElement.e(ctx, X), op, inverse),
                   apply_operator(TorusElement.e(ctx, Y), op, inverse))

    def is_identity(self) -> bool:
        return self.x == TorusElement.e(self.ctx, X) and self.y == TorusElement.e(self.ctx, Y)

    def __eq__(self, other):
        return isinstance(other, GeneratorImages) and self.x == other.x and self.y == other.y

    def _power(self, which: str, k: int) -> TorusElement:
        key = (which, k)
        if key not in self._pow:
            base = self.x if which == "x" else self.y
            if k < 0:
                base = base.inverse()
                k = -k
            self._pow[key] = base ** k
        return self._pow[key]

    def image_of_basis(self, a: int, b: int) -> TorusElement:
        """phi(e_(a,b)) = v^{-ab} phi(x)^a phi(y)^b."""
        img = self._power("x", a) * self._power("y", b)
        return img.scale(QLaurent.monomial(-a * b)) if a * b else img

    def apply(self, elem: TorusElement) -> TorusElement:
        ctx = self.ctx
        acc = TorusElement(ctx)
        for (e, m, a, b), c in elem.items():
            img = self.image_of_basis(a, b)
            shift = TorusElement.monomial(ctx, (0, 0), Multidegree(e, m), c)
            acc = acc + shift * img
        return acc

    def then(self, other: "GeneratorImages") -> "GeneratorImages":
        return compose(other, self)

    def to_json(self) -> dict:
        from .io import element_to_json
        return {"x": element_to_json(self.x), "y": element_to_json(self.y)}


def compose(f: GeneratorImages, g: GeneratorImages) -> GeneratorImages:
    """f o g: substitute f's generator images into g's images."""
    if f.ctx != g.ctx:
        raise ValueError("context mismatch")
    return GeneratorImages(f.ctx, f.apply(g.x), f.apply(g.y))


def to_generator_images(op: WallOperator, ctx: SeriesContext) -> GeneratorImages:
    return GeneratorImages.from_operator(op, ctx)


def apply_sequence(elem: TorusElement, ops: Iterable, ctx: SeriesContext | None = None) -> TorusElement:
    """Apply a composition op_1 o op_2 o ... o op_s to elem.

    ``ops`` lists (operator, inverse_flag) pairs left to right; the rightmost
    acts first.  Operators are WallOperator or anything with ``apply``.
    """
    for op, inv in reversed(list(ops)):
        if isinstance(op, WallOperator):
            elem = apply_operator(elem, op, inv)
        else:
            elem = (op.inverse() if inv else op).apply(elem)
    return elem
