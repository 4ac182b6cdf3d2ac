"""Exact coefficient arithmetic.

Everything here lives over the rationals.  The refined coefficient ring is
Q[v, 1/v] with v = q^(1/2); exponents of v are always integers, so q = v^2.
Rational functions in v appear transiently (denominators v^k - v^-k from the
quantum dilogarithm, and the Harder-Narasimhan stack series), and the
truncated commutative series with central and square-zero variables are the
base rings over which wall operators act.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, NamedTuple

Rat = Fraction


class NotClearedError(ArithmeticError):
    """A rational function expected to be a Laurent polynomial is not one."""


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


def rat_str(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials in v


class QLaurent:
    """Sparse Laurent polynomial in v = q^(1/2) with rational coefficients.

    Immutable.  ``terms`` maps an integer exponent e (the monomial v^e) to a
    nonzero rational coefficient.
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms=None):
        t = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                c = _rat(c)
                if c:
                    e = int(e)
                    s = t.get(e, 0) + c
                    if s:
                        t[e] = s
                    else:
                        t.pop(e, None)
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t: dict) -> "QLaurent":
        # t must already be clean (no zero coefficients)
        obj = cls.__new__(cls)
        obj._t = t
        obj._h = None
        return obj

    @classmethod
    def monomial(cls, e: int, c=1) -> "QLaurent":
        c = _rat(c)
        return cls._raw({e: c} if c else {})

    @classmethod
    def const(cls, c) -> "QLaurent":
        return cls.monomial(0, c)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def coeff(self, e: int) -> Fraction:
        return self._t.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def leading(self) -> tuple[int, Fraction]:
        e = max(self._t)
        return e, self._t[e]

    # -- ring operations --------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return QLaurent.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._t:
            return self
        if not self._t:
            return o
        t = dict(self._t)
        for e, c in o._t.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                del t[e]
        return QLaurent._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QLaurent._raw({})
            return QLaurent._raw({e: c * other for e, c in self._t.items()})
        if not isinstance(other, QLaurent):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return QLaurent._raw({})
        if len(b) == 1:
            (eb, cb), = b.items()
            return QLaurent._raw({e + eb: c * cb for e, c in a.items()})
        if len(a) == 1:
            (ea, ca), = a.items()
            return QLaurent._raw({e + ea: c * ca for e, c in b.items()})
        t: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                t[e] = t.get(e, 0) + c1 * c2
        return QLaurent._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ZeroDivisionError("only monomials are invertible in Q[v, 1/v]")
            (e, c), = self._t.items()
            return QLaurent.monomial(e * n, Fraction(c) ** n)
        result = QLaurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _rat(other))
        if isinstance(other, QLaurent):
            if other.is_monomial():
                (e, c), = other._t.items()
                return QLaurent._raw({k - e: x / c for k, x in self._t.items()})
            return QRational(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def shift(self, n: int) -> "QLaurent":
        """Multiply by v^n."""
        if not n:
            return self
        return QLaurent._raw({e + n: c for e, c in self._t.items()})

    def scale(self, c) -> "QLaurent":
        return self * _rat(c)

    # -- substitutions ----------------------------------------------------
    def bar(self) -> "QLaurent":
        """The bar involution v -> 1/v."""
        return QLaurent._raw({-e: c for e, c in self._t.items()})

    def eval_at_one(self) -> Fraction:
        return sum(self._t.values(), Fraction(0))

    def __call__(self, x):
        """Evaluate at a rational point."""
        x = _rat(x)
        return sum((c * x ** e for e, c in self._t.items()), Fraction(0))

    def subs_power(self, r: int, sign: int = 1) -> "QLaurent":
        """Substitute v -> sign * v^r."""
        if sign == 1:
            return QLaurent._raw({e * r: c for e, c in self._t.items()})
        return QLaurent._raw({e * r: (c if e % 2 == 0 else -c) for e, c in self._t.items()})

    # -- polynomial division ------------------------------------------------
    def divmod_poly(self, other: "QLaurent") -> tuple["QLaurent", "QLaurent"]:
        """Euclidean division treating both as polynomials in v.

        Both operands must have nonnegative exponents.
        """
        if not other._t:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        de, dc = other.leading()
        rem = dict(self._t)
        quo: dict = {}
        dt = other._t
        while rem:
            e = max(rem)
            if e < de:
                break
            c = rem[e] / dc
            k = e - de
            quo[k] = c
            for e2, c2 in dt.items():
                x = rem.get(e2 + k, 0) - c * c2
                if x:
                    rem[e2 + k] = x
                else:
                    rem.pop(e2 + k, None)
        return QLaurent._raw(quo), QLaurent._raw(rem)

    def exact_div(self, other: "QLaurent") -> "QLaurent":
        """Exact quotient in Q[v, 1/v]; raises NotClearedError otherwise."""
        if not other._t:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._t:
            return self
        s0, o0 = self.min_exp(), other.min_exp()
        q, r = self.shift(-s0).divmod_poly(other.shift(-o0))
        if r:
            raise NotClearedError(f"{other} does not divide {self}")
        return q.shift(s0 - o0)

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QLaurent):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._t
            return self._t == {0: other}
        if isinstance(other, QRational):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def is_bar_symmetric(self) -> bool:
        return self == self.bar()

    # -- text / json ------------------------------------------------------
    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"QLaurent({format_laurent(self)!r})"

    def to_json(self) -> dict:
        return {"terms": [{"v": e, "c": rat_str(c)} for e, c in sorted(self._t.items(), reverse=True)]}

    @classmethod
    def from_json(cls, obj) -> "QLaurent":
        return cls({int(t["v"]): Fraction(t["c"]) for t in obj["terms"]})

    @classmethod
    def parse(cls, text: str) -> "QLaurent":
        return parse_laurent(text)


V = QLaurent.monomial(1)
ONE = QLaurent.const(1)
ZERO = QLaurent()


def format_laurent(p: QLaurent, var: str = "v") -> str:
    """Canonical text: decreasing exponent, coefficients as p/q."""
    if not p._t:
        return "0"
    out = []
    for e, c in sorted(p._t.items(), reverse=True):
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = rat_str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{rat_str(a)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(v(?:\^\(?(-?\d+)\)?)?)?\s*")


def parse_laurent(text: str) -> QLaurent:
    """Inverse of :func:`format_laurent`."""
    s = text.strip()
    if s == "0":
        return QLaurent()
    terms: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial: {text!r}")
        sign, coef, mono, exp = m.groups()
        if coef is None and mono is None:
            raise ValueError(f"cannot parse Laurent polynomial: {text!r}")
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        e = 0 if mono is None else (1 if exp is None else int(exp))
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
    return QLaurent(terms)


def q_number(m: int) -> QLaurent:
    """[m]_q = (v^m - v^-m) / (v - 1/v) as a Laurent polynomial."""
    if m == 0:
        return QLaurent()
    sign = 1 if m > 0 else -1
    m = abs(m)
    return QLaurent._raw({e: Fraction(sign) for e in range(m - 1, -m, -2)})


def bar_involution(p):
    return p.bar()


def eval_at_one(p) -> Fraction:
    return p.eval_at_one()


def binomial_series(exponent, order: int) -> list[Fraction]:
    """Coefficients of (1 + z)^exponent up to z^order."""
    exponent = _rat(exponent)
    out = [Fraction(1)]
    c = Fraction(1)
    for n in range(1, order + 1):
        c = c * (exponent - (n - 1)) / n
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# Rational functions in v


def _poly_gcd(a: QLaurent, b: QLaurent) -> QLaurent:
    # a, b polynomials (nonnegative exponents); result monic
    while b._t:
        _, r = a.divmod_poly(b)
        a, b = b, r
    if not a._t:
        return a
    _, lc = a.leading()
    return a * (Fraction(1) / lc)


class QRational:
    """Quotient of two Laurent polynomials in v, kept in lowest terms.

    Canonical form: the denominator is a monic polynomial in v with nonzero
    constant term, coprime to the numerator; every power of v sits in the
    numerator.  Equality is therefore syntactic.
    """

    __slots__ = ("num", "den", "_h")

    def __init__(self, num, den=None, _reduced: bool = False):
        num = num if isinstance(num, QLaurent) else QLaurent.const(num)
        if den is None:
            den = ONE
        elif not isinstance(den, QLaurent):
            den = QLaurent.const(den)
        if not den._t:
            raise ZeroDivisionError("QRational with zero denominator")
        self._h = None
        if _reduced:
            self.num, self.den = num, den
            return
        if not num._t:
            self.num, self.den = num, ONE
            return
        if den.is_monomial():
            (e, c), = den._t.items()
            self.num = QLaurent._raw({k - e: x / c for k, x in num._t.items()})
            self.den = ONE
            return
        d0 = den.min_exp()
        n0 = num.min_exp()
        dp = den.shift(-d0)
        np_ = num.shift(-n0)
        g = _poly_gcd(dp, np_)
        if not g.is_constant():
            np_, r1 = np_.divmod_poly(g)
            dp, r2 = dp.divmod_poly(g)
            assert not r1 and not r2
        _, lc = dp.leading()
        if lc != 1:
            inv = Fraction(1) / lc
            dp = dp * inv
            np_ = np_ * inv
        self.num = np_.shift(n0 - d0)
        self.den = dp

    @classmethod
    def coerce(cls, x) -> "QRational":
        if isinstance(x, QRational):
            return x
        if isinstance(x, QLaurent):
            return cls(x, ONE, _reduced=True)
        return cls(QLaurent.const(x), ONE, _reduced=True)

    def is_laurent(self) -> bool:
        return self.den == ONE

    def to_laurent(self) -> QLaurent:
        if self.den._t != {0: 1}:
            raise NotClearedError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_zero(self) -> bool:
        return not self.num._t

    def __bool__(self):
        return bool(self.num._t)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QLaurent)):
            other = QRational.coerce(other)
        elif not isinstance(other, QRational):
            return NotImplemented
        if not other.num._t:
            return self
        if not self.num._t:
            return other
        if self.den == other.den:
            return QRational(self.num + other.num, self.den)
        return QRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QRational(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-QRational.coerce(other) if not isinstance(other, QRational) else -other)

    def __rsub__(self, other):
        return QRational.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QRational(QLaurent(), ONE, _reduced=True)
            return QRational(self.num * other, self.den, _reduced=True)
        if isinstance(other, QLaurent):
            if other.is_monomial():
                return QRational(self.num * other, self.den, _reduced=True)
            if self.den == ONE:
                return QRational(self.num * other, ONE, _reduced=True)
            return QRational(self.num * other, self.den)
        if not isinstance(other, QRational):
            return NotImplemented
        if self.den == ONE and other.den == ONE:
            return QRational(self.num * other.num, ONE, _reduced=True)
        return QRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QRational":
        return QRational(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        if isinstance(other, QLaurent):
            other = QRational.coerce(other)
        if not isinstance(other, QRational):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QRational.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        return QRational(self.num ** n, self.den ** n, _reduced=True)

    def bar(self) -> "QRational":
        return QRational(self.num.bar(), self.den.bar())

    def eval_at_one(self) -> Fraction:
        d = self.den.eval_at_one()
        if not d:
            raise ZeroDivisionError("rational function has a pole at v = 1")
        return self.num.eval_at_one() / d

    def subs_power(self, r: int, sign: int = 1) -> "QRational":
        return QRational(self.num.subs_power(r, sign), self.den.subs_power(r, sign))

    def laurent_series(self, order: int) -> QLaurent:
        """Expansion as a Laurent series in v, keeping exponents < order."""
        d0 = self.den.min_exp()  # always 0 in canonical form
        c0 = self.den.coeff(d0)
        if not self.num._t:
            return QLaurent()
        lo = self.num.min_exp() - d0
        # invert the denominator as a power series in v
        inv = {0: Fraction(1) / c0}
        dt = {e - d0: c for e, c in self.den._t.items()}
        n = order - lo
        for k in range(1, max(n, 1)):
            s = Fraction(0)
            for e, c in dt.items():
                if 0 < e <= k:
                    s += c * inv.get(k - e, 0)
            if s:
                inv[k] = -s / c0
        out: dict = {}
        for e1, c1 in self.num._t.items():
            for e2, c2 in inv.items():
                e = e1 - d0 + e2
                if e < order:
                    out[e] = out.get(e, 0) + c1 * c2
        return QLaurent(out)

    def __eq__(self, other):
        if isinstance(other, QRational):
            return self.num == other.num and self.den == other.den
        if isinstance(other, QLaurent):
            return self.den == ONE and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.den == ONE and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.num, self.den))
        return self._h

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj) -> "QRational":
        return cls(QLaurent.from_json(obj["num"]), QLaurent.from_json(obj["den"]))


def clear(x) -> QLaurent:
    """Return x as a Laurent polynomial, raising if it does not clear."""
    if isinstance(x, QLaurent):
        return x
    if isinstance(x, QRational):
        return x.to_laurent()
    return QLaurent.const(x)


def coeff_is_zero(c) -> bool:
    return not c


# ---------------------------------------------------------------------------
# truncated base rings


class Multidegree(NamedTuple):
    """Exponent vector over central variables plus a bitmask of nilpotents."""

    exps: tuple
    mask: int = 0


class SeriesContext:
    """The base ring Q[t_1..t_n]/(t_i^(k_i+1)) [u_1..u_m]/(u_j^2).

    ``orders[i]`` is the highest surviving power of central variable i.
    Nilpotent variables are square-zero; monomials in them are stored as
    bitmasks, so u^2 = 0 holds structurally.
    """

    def __init__(self, central: Iterable[str] = (), orders: Iterable[int] | int = (), nilpotent: Iterable = ()):
        self.central = tuple(central)
        if isinstance(orders, int):
            orders = (orders,) * len(self.central)
        self.orders = tuple(int(k) for k in orders)
        if len(self.orders) != len(self.central):
            raise ValueError("one truncation order per central variable")
        if any(k < 1 for k in self.orders):
            raise ValueError("truncation orders must be >= 1")
        self.nilpotent = tuple(nilpotent)
        if len(set(self.nilpotent)) != len(self.nilpotent):
            raise ValueError("nilpotent variables must be distinct")
        if len(set(self.central)) != len(self.central):
            raise ValueError("central variables must be distinct")
        self.zero_exps = (0,) * len(self.central)
        self._key = (self.central, self.orders, self.nilpotent)

    def __eq__(self, other):
        return isinstance(other, SeriesContext) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"SeriesContext(central={self.central}, orders={self.orders}, nilpotent={self.nilpotent})"

    @property
    def one(self) -> Multidegree:
        return Multidegree(self.zero_exps, 0)

    def var(self, name) -> Multidegree:
        """Multidegree of a single central or nilpotent variable."""
        if name in self.central:
            i = self.central.index(name)
            e = [0] * len(self.central)
            e[i] = 1
            return Multidegree(tuple(e), 0)
        if name in self.nilpotent:
            return Multidegree(self.zero_exps, 1 << self.nilpotent.index(name))
        raise KeyError(name)

    def monomial(self, exps=None, nil=()) -> Multidegree:
        exps = self.zero_exps if exps is None else tuple(exps)
        mask = 0
        for name in nil:
            mask |= 1 << self.nilpotent.index(name)
        return Multidegree(exps, mask)

    def mul(self, d1, d2):
        """Product of monomials, or None if it vanishes in the ring."""
        if d1[1] & d2[1]:
            return None
        e1, e2 = d1[0], d2[0]
        if e1 is e2 and not any(e1):
            exps = e1
        else:
            exps = tuple(a + b for a, b in zip(e1, e2))
            for x, k in zip(exps, self.orders):
                if x > k:
                    return None
        return Multidegree(exps, d1[1] | d2[1])

    def power(self, d, j: int):
        if j == 0:
            return self.one
        if d[1] and j > 1:
            return None
        exps = tuple(a * j for a in d[0])
        for x, k in zip(exps, self.orders):
            if x > k:
                return None
        return Multidegree(exps, d[1])

    def in_max_ideal(self, d) -> bool:
        return bool(d[1]) or any(d[0])

    def degree(self, d) -> int:
        """Total degree: central exponents plus number of nilpotents."""
        return sum(d[0]) + bin(d[1]).count("1")

    def max_power(self, d) -> int:
        """Largest j with d^j nonzero (d in the maximal ideal)."""
        if d[1]:
            return 1
        best = None
        for a, k in zip(d[0], self.orders):
            if a:
                j = k // a
                best = j if best is None else min(best, j)
        if best is None:
            raise ValueError("monomial is a unit, not in the maximal ideal")
        return best

    def nilpotency_bound(self) -> int:
        return sum(self.orders) + len(self.nilpotent)

    def format_monomial(self, d) -> str:
        parts = []
        for name, a in zip(self.central, d[0]):
            if a == 1:
                parts.append(str(name))
            elif a:
                parts.append(f"{name}^{a}")
        for i, name in enumerate(self.nilpotent):
            if d[1] >> i & 1:
                parts.append(str(name) if not isinstance(name, tuple) else "u" + "".join(map(str, name)))
        return "*".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {
            "central": list(self.central),
            "orders": list(self.orders),
            "nilpotent": [list(n) if isinstance(n, tuple) else n for n in self.nilpotent],
        }

    @classmethod
    def from_json(cls, obj) -> "SeriesContext":
        return cls(obj["central"], obj["orders"], [tuple(n) if isinstance(n, list) else n for n in obj["nilpotent"]])


# ---------------------------------------------------------------------------
# graded elements over a SeriesContext


def _cadd(t: dict, key, c) -> None:
    s = t.get(key)
    s = c if s is None else s + c
    if s:
        t[key] = s
    else:
        t.pop(key, None)


class GradedElement:
    """Sparse sum of terms coeff * sigma^d * e_(a,b) over a SeriesContext.

    Keys are flat tuples (exps, mask, a, b).  Coefficients are Fractions,
    QLaurent or QRational.  Subclasses fix the product.
    """

    __slots__ = ("ctx", "_t")

    def __init__(self, ctx: SeriesContext, terms=None):
        self.ctx = ctx
        t: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                if len(key) == 2 and isinstance(key[0], tuple) and len(key[0]) == 2 and isinstance(key[0][0], tuple):
                    (exps, mask), (a, b) = key
                    key = (tuple(exps), mask, a, b)
                if isinstance(c, int):
                    c = Fraction(c)
                if c:
                    _cadd(t, tuple(key), c)
        self._t = t

    @classmethod
    def _raw(cls, ctx, t):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._t = t
        return obj

    @classmethod
    def monomial(cls, ctx: SeriesContext, lattice=(0, 0), md=None, c=1):
        md = ctx.one if md is None else md
        if isinstance(c, int):
            c = Fraction(c)
        return cls._raw(ctx, {(md[0], md[1], lattice[0], lattice[1]): c} if c else {})

    @classmethod
    def one(cls, ctx):
        return cls.monomial(ctx)

    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def coeff(self, md, lattice=(0, 0)):
        return self._t.get((tuple(md[0]), md[1], lattice[0], lattice[1]), Fraction(0))

    def __len__(self):
        return len(self._t)

    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ValueError("context mismatch")

    def __add__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            _cadd(t, k, c)
        return type(self)._raw(self.ctx, t)

    def __neg__(self):
        return type(self)._raw(self.ctx, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return type(self)._raw(self.ctx, {})
        out = {}
        for k, x in self._t.items():
            y = x * c
            if y:
                out[k] = y
        return type(self)._raw(self.ctx, out)

    def map_coefficients(self, f):
        out = {}
        for k, x in self._t.items():
            y = f(x)
            if y:
                out[k] = y
        return type(self)._raw(self.ctx, out)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.ctx == other.ctx and (self - other).is_zero()

    __hash__ = None

    def constant_term(self):
        return self._t.get((self.ctx.zero_exps, 0, 0, 0), Fraction(0))

    def _pairing(self, a1, b1, a2, b2) -> int:
        return 0

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QLaurent, QRational)):
            return self.scale(other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        mul = self.ctx.mul
        pair = self._pairing
        t: dict = {}
        for (e1, m1, a1, b1), c1 in self._t.items():
            for (e2, m2, a2, b2), c2 in other._t.items():
                d = mul((e1, m1), (e2, m2))
                if d is None:
                    continue
                c = c1 * c2
                p = pair(a1, b1, a2, b2)
                if p:
                    c = c * QLaurent._raw({p: Fraction(1)})
                _cadd(t, (d[0], d[1], a1 + a2, b1 + b2), c)
        return type(self)._raw(self.ctx, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QLaurent, QRational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        result = type(self).one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        """Inverse of an element of the form unit_monomial * (1 + nilpotent)."""
        lead = [(k, c) for k, c in self._t.items() if not k[1] and not any(k[0])]
        if len(lead) != 1:
            raise ZeroDivisionError("element is not a unit monomial times 1 + (maximal ideal)")
        (e, m, a, b), c = lead[0]
        mono_inv = type(self).monomial(self.ctx, (-a, -b), None, 1)
        if isinstance(c, QLaurent):
            cinv = c ** -1 if c.is_monomial() else QRational(ONE, c)
        elif isinstance(c, QRational):
            cinv = c.inverse()
        else:
            cinv = Fraction(1) / c
        # self = c * e_lead * (1 + n)  with  n = (c e_lead)^-1 * self - 1
        lead_inv = mono_inv.scale(cinv)
        unit = lead_inv * self
        n = unit - type(self).one(self.ctx)
        acc = type(self).one(self.ctx)
        term = type(self).one(self.ctx)
        for _ in range(self.ctx.nilpotency_bound() + 1):
            term = -(term * n)
            if term.is_zero():
                break
            acc = acc + term
        return acc * lead_inv

    def lattice_support(self) -> set:
        return {(k[2], k[3]) for k in self._t}

    def __repr__(self):
        return f"{type(self).__name__}({self.format()})"

    def format(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for (e, m, a, b), c in sorted(self._t.items(), key=lambda kv: (kv[0][2] + kv[0][3], kv[0])):
            mono = self.ctx.format_monomial((e, m))
            parts.append(f"({c})*{mono}*e({a},{b})")
        return " + ".join(parts)


class Series(GradedElement):
    """Commutative truncated series: e_a e_b = e_(a+b)."""

    __slots__ = ()

    def _nonconstant_ok(self):
        for (e, m, a, b) in self._t:
            if not m and not any(e) and (a or b):
                raise ValueError("series has a non-nilpotent non-constant term")

    def log(self) -> "Series":
        c0 = self.constant_term()
        if c0 != 1:
            raise ValueError("log requires constant term 1")
        self._nonconstant_ok()
        n = self - Series.one(self.ctx)
        acc = Series._raw(self.ctx, {})
        power = Series.one(self.ctx)
        for j in range(1, self.ctx.nilpotency_bound() + 2):
            power = power * n
            if power.is_zero():
                break
            acc = acc + power.scale(Fraction((-1) ** (j + 1), j))
        return acc

    def exp(self) -> "Series":
        if self.constant_term():
            raise ValueError("exp requires zero constant term")
        self._nonconstant_ok()
        acc = Series.one(self.ctx)
        power = Series.one(self.ctx)
        for j in range(1, self.ctx.nilpotency_bound() + 2):
            power = (power * self).scale(Fraction(1, j))
            if power.is_zero():
                break
            acc = acc + power
        return acc

    def power(self, exponent) -> "Series":
        """self^exponent for rational exponent (constant term 1)."""
        exponent = _rat(exponent)
        if exponent.denominator == 1 and exponent >= 0:
            return self ** int(exponent)
        return self.log().scale(exponent).exp()


def series_log(f: Series) -> Series:
    return f.log()


def series_exp(f: Series) -> Series:
    return f.exp()


def set_partitions_count(n: int) -> int:
    """Bell number, used for sizing estimates."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def falling_factorial_ratio(k: int) -> int:
    return factorial(k)
