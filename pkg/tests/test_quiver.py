from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tvx.algebra import QLaurent, QRational
from tvx.quiver import (
    HNSolver,
    QuiverError,
    QuiverSpec,
    Stability,
    abelian_poincare,
    all_reps,
    build_abelianized,
    build_bipartite,
    comparison_check,
    comparison_report,
    coprime_sweep,
    enumerate_refinements,
    hn_stack_series,
    is_coprime,
    mps_check,
    mps_rhs,
    stable_poincare,
)

Q = QLaurent.monomial(2)
ONE = QLaurent.const(1)


def inv_q_minus_one():
    return QRational(ONE, Q - ONE)


class TestBuild:
    def test_bipartite(self):
        k = build_bipartite(2, 3)
        assert k.n_vertices == 5 and k.arrows == ((1, 1, 1), (1, 1, 1))

    def test_abelian_unit_weights(self):
        q, d, _ = build_abelianized((1, 1), (1,))
        assert q.arrows == build_bipartite(2, 1).arrows and d == (1, 1, 1)

    def test_abelian_weight_two(self):
        q, _, _ = build_abelianized((2,), (1,))
        assert q.arrows == ((2,),)

    def test_empty(self):
        with pytest.raises(QuiverError):
            build_abelianized((), (1,))

    def test_euler(self):
        k = build_bipartite(1, 1)
        assert k.euler((1, 1), (1, 1)) == 1
        assert k.antisymmetric((1, 0), (0, 1)) == -1


class TestHN:
    def test_k11(self):
        k = build_bipartite(1, 1)
        assert hn_stack_series(k, (1, 1), Stability((1, 0), (1, 1))) == inv_q_minus_one()

    def test_point(self):
        k = build_bipartite(2, 1)
        assert hn_stack_series(k, (0, 1, 0)) == inv_q_minus_one()

    def test_k21(self):
        assert hn_stack_series(build_bipartite(2, 1), (1, 1, 1)) == inv_q_minus_one()

    @given(st.integers(1, 2), st.integers(1, 2), st.data())
    def test_strata_sum_to_all(self, l1, l2, data):
        k = build_bipartite(l1, l2)
        d = tuple(data.draw(st.integers(0, 2)) for _ in range(l1 + l2))
        if not any(d):
            return
        solver = HNSolver(k, Stability.level(k))
        assert solver.hn_total(d) == all_reps(k, d)


class TestPoincare:
    def test_point_moduli(self):
        assert stable_poincare(build_bipartite(1, 1), (1, 1)) == ONE
        assert stable_poincare(build_bipartite(2, 1), (1, 1, 1)) == ONE

    def test_single_vertex(self):
        assert stable_poincare(QuiverSpec(1, 0, ((),)), (1,)) == ONE

    def test_grassmannian(self):
        # 3-Kronecker, d = (1,2): moduli Gr(2,3) = P^2
        k = QuiverSpec(1, 1, ((3,),))
        assert stable_poincare(k, (1, 2)) == QLaurent({2: 1, 0: 1, -2: 1})

    def test_projective_line(self):
        # 2-Kronecker, d = (1,1): moduli P^1
        assert stable_poincare(QuiverSpec(1, 1, ((2,),)), (1, 1)) == QLaurent({1: 1, -1: 1})

    def test_non_coprime(self):
        with pytest.raises(QuiverError):
            stable_poincare(build_bipartite(1, 1), (2, 2))

    def test_strictly_semistable(self):
        with pytest.raises(QuiverError):
            stable_poincare(build_bipartite(2, 2), (1, 1, 1, 1))


class TestRefinements:
    def test_counts(self):
        assert len(enumerate_refinements((1,), (1,))) == 1
        assert len(enumerate_refinements((2,), (1,))) == 2
        assert len(enumerate_refinements((3,), (1,))) == 3
        assert len(enumerate_refinements((2, 3), (2,))) == 2 * 3 * 2

    def test_weighted_abelian(self):
        assert abelian_poincare((2,), (1,)) == QLaurent({1: 1, -1: 1})


class TestMPS:
    @pytest.mark.parametrize("P1,P2", [((1,), (1,)), ((1, 1), (1,)), ((2,), (1,)), ((1, 2), (1,)), ((1,), (1, 2))])
    def test_examples(self, P1, P2):
        assert mps_check(P1, P2)

    def test_rhs_value(self):
        assert mps_rhs((2,), (1,)) == QRational(QLaurent())

    @pytest.mark.parametrize("P1,P2", [((1,), (1,)), ((1, 1), (1,)), ((2, 1), (1, 1)), ((1, 1, 1), (2,))])
    def test_comparison(self, P1, P2):
        assert comparison_check(P1, P2)

    def test_report_contents(self):
        rep = comparison_report((2, 1), (1, 1))
        assert rep.ok and rep.quiver == ONE
        assert {(a, b) for a, b, _, _ in rep.refinements} == {((1, 2), (1, 1)), ((1, 1, 1), (1, 1))}

    def test_coprime(self):
        assert is_coprime((2,), (1,)) and not is_coprime((1, 1), (1, 1))

    def test_sweep_size(self):
        sweep = coprime_sweep(4, 6)
        assert len(sweep) == 63
        assert all(is_coprime(a, b) and len(a) + len(b) <= 4 and sum(a) + sum(b) <= 6 for a, b in sweep)


@given(st.sampled_from(coprime_sweep(3, 5)))
def test_poincare_bar_symmetric_and_positive(case):
    p = stable_poincare(build_bipartite(len(case[0]), len(case[1])), case[0] + case[1])
    assert p.is_bar_symmetric()
    assert all(c > 0 and c.denominator == 1 for _, c in p.items())
