"""Omega spectra, ramification factors and refined Gromov-Witten numbers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from .algebra import (
    Multidegree,
    NotClearedError,
    QLaurent,
    QRational,
    SeriesContext,
    Series,
    q_number,
)
from .classical import classical_commutator, log_coefficients
from .factorization import CentralDiagram, commutator_factorization, multiparameter_factorization
from .torus import (
    Factor,
    TorusElement,
    WallOperator,
    X,
    Y,
    apply_operator,
    is_positive,
    is_primitive,
    pairing,
    split_multiple,
    wall_operator_log,
)
from .tropical import WeightVector, integer_partitions, refined_tropical_count

V_MINUS = QLaurent({1: 1, -1: -1})  # v - 1/v


class ExtractionError(ArithmeticError):
    """A log element is not the log of a product of shifted dilogarithms."""


# ---------------------------------------------------------------------------
# Omega spectra


@dataclass
class OmegaSpectrum:
    """Omega_n(k gamma) for one direction, stored as wall operator factors."""

    gamma: tuple
    factors: list = field(default_factory=list)

    def to_operator(self) -> WallOperator:
        return WallOperator(self.gamma, list(self.factors))

    @classmethod
    def from_operator(cls, op: WallOperator) -> "OmegaSpectrum":
        facs = [Factor(k, n, om, sig) for (k, n, sig), om in sorted(op.spectrum().items())]
        return cls(op.gamma, facs)

    def entries(self) -> dict:
        """(k, n, sigma) -> Omega, zero entries dropped."""
        return self.to_operator().spectrum()

    def omega(self, k: int, n: int) -> Fraction:
        return sum((om for (kk, nn, _), om in self.entries().items() if kk == k and nn == n), Fraction(0))

    def multiples(self) -> list:
        return sorted({k for (k, _, _) in self.entries()})

    def poincare(self, k: int) -> QLaurent:
        """P(k gamma) = sum_n (-1)^n Omega_n (-v)^n = sum_n Omega_n v^n."""
        return QLaurent({n: self.omega(k, n) for n in {nn for (kk, nn, _) in self.entries() if kk == k}})

    def __eq__(self, other):
        return isinstance(other, OmegaSpectrum) and self.gamma == other.gamma and self.entries() == other.entries()

    def rows(self) -> list:
        """(k, n, Omega) sorted, summed over sigma."""
        keys = sorted({(k, n) for (k, n, _) in self.entries()})
        return [(k, n, self.omega(k, n)) for k, n in keys if self.omega(k, n)]


def _as_rational(c) -> QRational:
    return QRational.coerce(c)


def extract_omegas(gamma, log_element: TorusElement, ctx: SeriesContext | None = None) -> OmegaSpectrum:
    """Invert wall_operator_log.

    Terms are peeled off in increasing degree of their base-ring monomial.
    A term l sigma e_{m gamma} of lowest degree can only come from the first
    order part of new factors with k = m and that sigma, whose log starts
    with sum_n Omega_n v^n sigma e_{m gamma} / (v - 1/v).  Hence
    P = l (v - 1/v) must be a Laurent polynomial; its coefficients are the
    Omega_n.  The full logs of these factors are subtracted and the loop
    continues.
    """
    gamma = tuple(gamma)
    if not (is_positive(gamma) and is_primitive(gamma)):
        raise ValueError(f"direction {gamma} must be primitive and positive")
    ctx = ctx or log_element.ctx
    rem = TorusElement(ctx)
    for (e, m, a, b), c in log_element.items():
        k, g = split_multiple((a, b)) if (a, b) != (0, 0) else (0, None)
        if g != gamma:
            raise ValueError(f"term at {(a, b)} is not a positive multiple of {gamma}")
        rem = rem + TorusElement(ctx, {(e, m, a, b): _as_rational(c)})
    factors: list = []
    deg = ctx.degree
    while rem:
        dmin = min(deg((e, m)) for (e, m, _, _) in rem.terms())
        batch = []
        for (e, m, a, b), c in sorted(rem.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2], kv[0][3])):
            if deg((e, m)) != dmin:
                continue
            k = a // gamma[0] if gamma[0] else b // gamma[1]
            try:
                P = (_as_rational(c) * V_MINUS).to_laurent()
            except NotClearedError as exc:
                raise ExtractionError(f"P({k}{gamma}) at {ctx.format_monomial((e, m))} is not Laurent: {c}") from exc
            sigma = Multidegree(e, m)
            for n, om in P.items():
                batch.append(Factor(k, n, Fraction(om), sigma))
        step = WallOperator(gamma, batch)
        rem = rem - wall_operator_log(step, ctx)
        if any(deg((e, m)) <= dmin for (e, m, _, _) in rem.terms()):
            raise ExtractionError("lowest degree terms did not cancel")
        factors.extend(batch)
    return OmegaSpectrum(gamma, factors)


def round_trip(op: WallOperator, ctx: SeriesContext) -> OmegaSpectrum:
    return extract_omegas(op.gamma, wall_operator_log(op, ctx), ctx)


# ---------------------------------------------------------------------------
# explicit f, g series


def c_hat(spectrum: OmegaSpectrum, m: int, sigma_of) -> dict:
    """Per divisor k of m the Laurent polynomial (-1)^{r+1}/r P_k((-1)^{r+1} v^r),
    r = m/k, keyed by (k, sigma^r).  ``sigma_of(k)`` lists the sigmas used at k."""
    out = {}
    for k in range(1, m + 1):
        if m % k:
            continue
        r = m // k
        sign = -1 if (r + 1) % 2 else 1
        for sig in sigma_of(k):
            P = QLaurent({n: om for (kk, n, s), om in spectrum.entries().items() if kk == k and s == sig})
            if P:
                out[(k, sig)] = P.subs_power(r, sign).scale(Fraction(sign, r))
    return out


def fg_series(spectrum: OmegaSpectrum, ctx: SeriesContext):
    """Generator images x f and y g built from the explicit log f, log g sums.

    With l_m the log coefficient of sigma^m e_{m gamma},
        log f = sum_m l_m (q^{-m g2} - 1) sigma^m e_{m gamma}
              = - sum_m sum_{k | m} c_{m,k} v^{-m g2} [k g2]_{v^r} sigma^m e_{m gamma},
        log g = sum_m sum_{k | m} c_{m,k} v^{m g1} [k g1]_{v^r} sigma^m e_{m gamma},
    r = m/k, where [n]_{v^r} is the q-number with v replaced by v^r.  These are
    commutative series in the e_{m gamma}.
    """
    g1, g2 = spectrum.gamma
    sigmas: dict = {}
    for (k, _, sig) in spectrum.entries():
        sigmas.setdefault(k, set()).add(sig)
    top = max(sigmas) if sigmas else 0
    bound = max([ctx.max_power(s) * k for k, ss in sigmas.items() for s in ss], default=0)
    logf: dict = {}
    logg: dict = {}
    for m in range(1, max(top, bound) + 1):
        ch = c_hat(spectrum, m, lambda k: sorted(sigmas.get(k, ())))
        for (k, sig), c in ch.items():
            r = m // k
            p = ctx.power(sig, r)
            if p is None:
                continue
            key = (p[0], p[1], m * g1, m * g2)
            fcoef = -(c * QLaurent.monomial(-m * g2) * q_number(k * g2).subs_power(r))
            gcoef = c * QLaurent.monomial(m * g1) * q_number(k * g1).subs_power(r)
            logf[key] = logf.get(key, QLaurent()) + fcoef
            logg[key] = logg.get(key, QLaurent()) + gcoef
    f = Series(ctx, {k: c for k, c in logf.items() if c}).exp()
    g = Series(ctx, {k: c for k, c in logg.items() if c}).exp()
    x = TorusElement.e(ctx, X) * TorusElement(ctx, dict(f.items()))
    y = TorusElement.e(ctx, Y) * TorusElement(ctx, dict(g.items()))
    return x, y


def fg_series_check(gamma, spectrum: OmegaSpectrum, ctx: SeriesContext) -> bool:
    """Generator images via the adjoint action agree with the explicit f, g sums."""
    op = spectrum.to_operator()
    if tuple(gamma) != op.gamma:
        raise ValueError("direction mismatch")
    x1 = apply_operator(TorusElement.e(ctx, X), op)
    y1 = apply_operator(TorusElement.e(ctx, Y), op)
    x2, y2 = fg_series(spectrum, ctx)
    return x1 == x2 and y1 == y2


# ---------------------------------------------------------------------------
# ramification and refined GW


def compatible_set_partitions(P, w) -> int:
    """Number of ordered set partitions (I_1..I_l) of the indices of w with
    sum_{s in I_j} w_s = P_j.  Parts of size zero take an empty block."""
    P = tuple(P)
    w = tuple(w)
    if sum(P) != sum(w):
        return 0
    count = 0
    for assign in product(range(len(P)), repeat=len(w)):
        sums = [0] * len(P)
        for s, j in enumerate(assign):
            sums[j] += w[s]
        if tuple(sums) == P:
            count += 1
    return count


@dataclass(frozen=True)
class RamificationFactor:
    partition: tuple
    weights: tuple
    count: int
    value: QRational

    def classical(self) -> Fraction:
        out = Fraction(self.count)
        for x in self.weights:
            out *= Fraction((-1) ** (x - 1), x * x)
        return out


def q_ramification(P, w) -> RamificationFactor:
    """prod_j (-1)^{w_j - 1} / (w_j [w_j]_q) times the compatible set partition count."""
    P = tuple(int(p) for p in P)
    w = tuple(sorted(int(x) for x in w))
    if any(p < 0 for p in P):
        raise ValueError("parts must be nonnegative")
    if sum(P) != sum(w):
        raise ValueError(f"size mismatch: |P| = {sum(P)}, |w| = {sum(w)}")
    count = compatible_set_partitions(P, w)
    val = QRational(QLaurent.const(count))
    for x in w:
        val = val * QRational(QLaurent.const(Fraction((-1) ** (x - 1), x)), q_number(x))
    return RamificationFactor(P, w, count, val)


def aut_order(w) -> int:
    out = 1
    for m in set(w):
        out *= factorial(list(w).count(m))
    return out


def _clear(x: QRational):
    return x.to_laurent() if x.is_laurent() else x


def refined_gw(P1, P2, alpha1=(1, 0), alpha2=(0, 1), n_configs: int = 2):
    """N^[(P1, P2)]: sum over weight vectors of ramification factors over
    automorphisms times the refined tropical count.  Returns a QLaurent when
    the sum clears, else the QRational value."""
    total = QRational(QLaurent())
    for w1 in integer_partitions(sum(P1)):
        r1 = q_ramification(P1, w1)
        if not r1.count:
            continue
        for w2 in integer_partitions(sum(P2)):
            r2 = q_ramification(P2, w2)
            if not r2.count:
                continue
            n = refined_tropical_count(WeightVector((w1, w2)), alpha1, alpha2, n_configs=n_configs)
            if not n:
                continue
            total = total + r1.value * r2.value * QRational(n) * QRational(QLaurent.const(Fraction(1, aut_order(w1) * aut_order(w2))))
    return _clear(total)


def classical_gw(P1, P2, n_configs: int = 2) -> Fraction:
    """N[(P1, P2)] from classical ramification factors and Mikhalkin counts."""
    total = Fraction(0)
    for w1 in integer_partitions(sum(P1)):
        r1 = q_ramification(P1, w1)
        if not r1.count:
            continue
        for w2 in integer_partitions(sum(P2)):
            r2 = q_ramification(P2, w2)
            if not r2.count:
                continue
            n = refined_tropical_count(WeightVector((w1, w2)), n_configs=n_configs).eval_at_one()
            total += r1.classical() * r2.classical() * n / (aut_order(w1) * aut_order(w2))
    return total


def ordered_partitions(n: int, length: int, allow_zero: bool = True) -> list:
    """Ordered tuples of the given length summing to n."""
    lo = 0 if allow_zero else 1
    if length == 0:
        return [()] if n == 0 else []
    if length == 1:
        return [(n,)] if n >= lo else []
    out = []
    for first in range(lo, n + 1):
        for rest in ordered_partitions(n - first, length - 1, allow_zero):
            out.append((first,) + rest)
    return out


def gps_classical_coeff(a: int, b: int, k: int, l1: int, l2: int) -> Fraction:
    """c^{(a,b)}_k = k sum_{|Pa| = ka, |Pb| = kb} N[(Pa, Pb)], partitions of length l1, l2."""
    if not (is_positive((a, b)) and is_primitive((a, b))) or k < 1:
        raise ValueError("need primitive positive (a, b) and k >= 1")
    total = Fraction(0)
    for Pa in ordered_partitions(k * a, l1):
        for Pb in ordered_partitions(k * b, l2):
            total += classical_gw(Pa, Pb)
    return k * total


def commutator_log_coeffs(l1: int, l2: int, order: int) -> dict:
    """{((a, b), k): c_k} from log f_{(a,b)} of the classical commutator engine."""
    diag = classical_commutator(l1, l2, order)
    out = {}
    for g in diag.directions():
        for (_, k), c in log_coefficients(diag.function(g), g).items():
            out[(g, k)] = out.get((g, k), 0) + c
    return out


def gps_chain(l1: int, l2: int, order: int) -> list:
    """Rows (gamma, k, engine value, formula value) for every (a, b), k with
    k(a + b) <= order."""
    engine = commutator_log_coeffs(l1, l2, order)
    rows = []
    for s in range(2, order + 1):
        for a in range(1, s):
            b = s - a
            k, g = split_multiple((a, b))
            if g != (a, b) and k > 1:
                continue
            for kk in range(1, order // (a + b) + 1):
                formula = gps_classical_coeff(a, b, kk, l1, l2)
                rows.append(((a, b), kk, Fraction(engine.get(((a, b), kk), 0)), formula))
    return rows


# ---------------------------------------------------------------------------
# specialization s_i = t_j = t


def central_spectra(diag: CentralDiagram) -> dict:
    """gamma -> OmegaSpectrum for every ray of a central diagram."""
    return {g: OmegaSpectrum.from_operator(diag.rays[g]) for g in diag.directions()}


def specialize_multiparameter(diag: CentralDiagram, order: int) -> dict:
    """Send every deformation variable to a single t and truncate at t^order.

    Works on the per-direction logs (which specialize linearly) and re-extracts
    the spectra over Q[t]/t^{order+1}.
    """
    if min(diag.ctx.orders) < order:
        raise ValueError("multiparameter truncation is coarser than the requested order")
    tctx = SeriesContext(["t"], [order])
    out = {}
    for g in diag.directions():
        lg = wall_operator_log(diag.rays[g], diag.ctx)
        terms: dict = {}
        for (e, m, a, b), c in lg.items():
            d = sum(e)
            if d > order:
                continue
            key = ((d,), m, a, b)
            terms[key] = QRational.coerce(terms.get(key, QRational(QLaurent()))) + QRational.coerce(c)
        spec = extract_omegas(g, TorusElement(tctx, {k: c for k, c in terms.items() if c}), tctx)
        if spec.entries():
            out[g] = spec
    return out


def specialization_check(l1: int, l2: int, order: int) -> bool:
    multi = multiparameter_factorization(l1, l2, order)
    spec = specialize_multiparameter(multi, order)
    direct = central_spectra(commutator_factorization(l1, l2, order))
    return spec == direct


def multiparameter_gw_check(l1: int, l2: int, order: int, max_size: int = 6) -> list:
    """Compare (v - 1/v) times the log coefficient at s^P1 t^P2 e_{k gamma}
    of the multiparameter saturation with refined_gw(P1, P2).

    Returns rows (P1, P2, from saturation, refined_gw)."""
    diag = multiparameter_factorization(l1, l2, order)
    rows = []
    found = {}
    for g in diag.directions():
        for (e, m, a, b), c in wall_operator_log(diag.rays[g], diag.ctx).items():
            P1, P2 = tuple(e[:l1]), tuple(e[l1:])
            found[(P1, P2)] = _clear(QRational.coerce(c) * QRational(V_MINUS))
    for s1 in range(1, order * l1 + 1):
        for s2 in range(1, order * l2 + 1):
            for P1 in ordered_partitions(s1, l1):
                for P2 in ordered_partitions(s2, l2):
                    if max(P1 + P2) > order or s1 + s2 > max_size:
                        continue
                    rows.append((P1, P2, found.get((P1, P2), QLaurent()), refined_gw(P1, P2)))
    return rows


def perturbative_spectra(diag, n_lines: int, order: int) -> dict:
    """Spectra over a single t of a saturated perturbed diagram: merge rays by
    direction, pull back from the u_{ij} to t_1..t_n, set every t_i = t."""
    from .scattering import rays_to_t
    mctx = SeriesContext([f"t{i + 1}" for i in range(n_lines)], [order] * n_lines)
    tctx = SeriesContext(["t"], [order])
    out = {}
    for g, lg in sorted(rays_to_t(diag, n_lines, order, mctx).items()):
        terms: dict = {}
        for (e, m, a, b), c in lg.items():
            d = sum(e)
            if d > order:
                continue
            key = ((d,), m, a, b)
            terms[key] = QRational.coerce(terms.get(key, QRational(QLaurent()))) + QRational.coerce(c)
        spec = extract_omegas(g, TorusElement(tctx, {k: c for k, c in terms.items() if c}), tctx)
        if spec.entries():
            out[g] = spec
    return out
