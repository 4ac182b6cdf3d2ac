from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from tvx.algebra import QLaurent, QRational, Series, SeriesContext
from tvx.torus import (
    Factor,
    GeneratorImages,
    TorusElement,
    WallOperator,
    adjoint_action,
    apply_operator,
    apply_sequence,
    compose,
    qdilog_log,
    standard_sigma,
    twisted_product,
    wall_operator_log,
)
from strategies import laurents

V = QLaurent.monomial(1)
ONE = Fraction(1)


def e(ctx, al, md=None, c=1):
    return TorusElement.e(ctx, al, md, c)


class TestProduct:
    ctx = SeriesContext(["t"], [2])

    def test_qproduct(self):
        assert twisted_product(e(self.ctx, (1, 0)), e(self.ctx, (0, 1))) == e(self.ctx, (1, 1), c=V)
        assert twisted_product(e(self.ctx, (0, 1)), e(self.ctx, (1, 0))) == e(self.ctx, (1, 1), c=V.bar())

    def test_xy_equals_q_yx(self):
        x, y = e(self.ctx, (1, 0)), e(self.ctx, (0, 1))
        assert x * y == (y * x).scale(QLaurent.monomial(2))

    @given(st.integers(-3, 3), st.integers(-3, 3))
    def test_parallel_commute(self, a, b):
        al = e(self.ctx, (a, b))
        assert al * al == e(self.ctx, (2 * a, 2 * b))

    @given(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
           st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
    def test_associative(self, a, b, c):
        x, y, z = (e(self.ctx, g) for g in (a, b, c))
        assert (x * y) * z == x * (y * z)


class TestQdilog:
    def test_first_term(self):
        ctx = SeriesContext(["t"], [3])
        t = ctx.var("t")
        lg = qdilog_log(ctx, t, (1, 0), 0, 1)
        assert lg.coeff(t, (1, 0)) == QRational(QLaurent.const(1), QLaurent({1: 1, -1: -1}))

    def test_zero_omega(self):
        ctx = SeriesContext(["t"], [3])
        assert qdilog_log(ctx, ctx.var("t"), (1, 0), 0, 0).is_zero()

    def test_product_expansion(self):
        # prod_{k>=0} (1 + q^{k+1/2} x)^{-1} = sum_j (-v)^j x^j / prod_{i<=j} (1 - v^{2i})
        ctx = SeriesContext(["t"], [3])
        t = ctx.var("t")
        lg = qdilog_log(ctx, t, (1, 0), 0, 1)
        ex = Series(ctx, lg.terms()).exp()
        den = QLaurent.const(1)
        for j in range(1, 4):
            den = den * QLaurent({0: 1, 2 * j: -1})
            assert QRational.coerce(ex.coeff(ctx.power(t, j), (j, 0))) == QRational(QLaurent.monomial(j, (-1) ** j), den)


class TestAdjoint:
    def test_kappa_one(self):
        ctx = SeriesContext(["t"], [3])
        t = ctx.var("t")
        op = WallOperator((1, 0), [Factor(1, 0, ONE, t)])
        got = adjoint_action(op, (0, 1), ctx)
        assert got == e(ctx, (0, 1)) * (e(ctx, (0, 0)) + e(ctx, (1, 0), t, V))

    def test_parallel(self):
        ctx = SeriesContext(["t"], [3])
        op = WallOperator((1, 0), [Factor(1, 0, ONE, ctx.var("t"))])
        assert adjoint_action(op, (2, 0), ctx) == e(ctx, (2, 0))

    def test_kappa_minus_one(self):
        ctx = SeriesContext(["t"], [4])
        t = ctx.var("t")
        op = WallOperator((1, 0), [Factor(1, 0, ONE, t)])
        got = adjoint_action(op, (0, -1), ctx)
        base = e(ctx, (0, 0)) + e(ctx, (1, 0), t, V.bar())
        assert got == e(ctx, (0, -1)) * base.inverse()


def _pentagon_ctx():
    return SeriesContext(["s", "t"], [4, 4])


class TestCompose:
    def test_identity_left(self):
        ctx = SeriesContext(["t"], [3])
        g = GeneratorImages.from_operator(WallOperator((1, 1), [Factor(1, 0, ONE, ctx.var("t"))]), ctx)
        assert compose(GeneratorImages.identity(ctx), g) == g

    @given(st.integers(1, 2), st.integers(-2, 2), st.sampled_from([Fraction(1), Fraction(-1, 2), Fraction(2)]))
    def test_inverse_spectrum(self, k, n, om):
        ctx = SeriesContext(["t"], [6])
        gamma = (1, 1)
        f = Factor(k, n, om, standard_sigma(ctx, gamma, k))
        op = WallOperator(gamma, [f])
        inv = WallOperator(gamma, [f._replace(omega=-om)])
        assert compose(GeneratorImages.from_operator(op, ctx), GeneratorImages.from_operator(inv, ctx)).is_identity()

    def test_pentagon(self):
        ctx = _pentagon_ctx()
        s, t = ctx.var("s"), ctx.var("t")
        st_ = ctx.mul(s, t)
        a = WallOperator((1, 0), [Factor(1, 0, ONE, s)])
        b = WallOperator((0, 1), [Factor(1, 0, ONE, t)])
        c = WallOperator((1, 1), [Factor(1, 0, ONE, st_)])
        for g in ((1, 0), (0, 1)):
            lhs = apply_sequence(e(ctx, g), [(a, False), (b, False)])
            rhs = apply_sequence(e(ctx, g), [(b, False), (c, False), (a, False)])
            assert lhs == rhs


class TestWallLog:
    def test_single(self):
        ctx = SeriesContext(["t"], [4])
        t = ctx.var("t")
        op = WallOperator((1, 0), [Factor(1, 0, ONE, t)])
        assert wall_operator_log(op, ctx) == qdilog_log(ctx, t, (1, 0), 0, 1)

    def test_cancellation(self):
        ctx = SeriesContext(["t"], [4])
        t = ctx.var("t")
        op = WallOperator((1, 0), [Factor(1, 0, ONE, t), Factor(1, 0, -ONE, t)])
        assert wall_operator_log(op, ctx).is_zero()

    def test_second_term_on_diagonal(self):
        ctx = SeriesContext(["t"], [4])
        sig = standard_sigma(ctx, (1, 1), 1)
        lg = wall_operator_log(WallOperator((1, 1), [Factor(1, 0, ONE, sig)]), ctx)
        want = QRational(QLaurent.const(Fraction(-1, 2)), QLaurent({2: 1, -2: -1}))
        assert QRational.coerce(lg.coeff(ctx.power(sig, 2), (2, 2))) == want


@given(st.integers(1, 2), st.integers(-2, 2), st.sampled_from([Fraction(1), Fraction(-1), Fraction(1, 2)]),
       st.tuples(st.integers(-2, 2), st.integers(-2, 2)), laurents(max_terms=2, span=2))
def test_operator_then_inverse(k, n, om, beta, c):
    ctx = SeriesContext(["t"], [4])
    gamma = (1, 0)
    op = WallOperator(gamma, [Factor(k, n, om, standard_sigma(ctx, gamma, k))])
    x = e(ctx, beta, c=c) if not c.is_zero() else e(ctx, beta)
    assert apply_operator(apply_operator(x, op), op, inverse=True) == x
