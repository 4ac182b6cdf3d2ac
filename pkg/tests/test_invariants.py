from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tvx.algebra import QLaurent, QRational, SeriesContext, q_number
from tvx.factorization import commutator_factorization
from tvx.invariants import (
    ExtractionError,
    OmegaSpectrum,
    aut_order,
    central_spectra,
    classical_gw,
    compatible_set_partitions,
    extract_omegas,
    fg_series_check,
    gps_chain,
    gps_classical_coeff,
    multiparameter_gw_check,
    ordered_partitions,
    q_ramification,
    refined_gw,
    round_trip,
    specialization_check,
)
from tvx.torus import Factor, TorusElement, WallOperator, standard_sigma, wall_operator_log

F = Fraction
CTX = SeriesContext(["t"], [6])
G = (1, 1)


def spectrum(*entries, gamma=G, ctx=CTX):
    return OmegaSpectrum(gamma, [Factor(k, n, F(om), standard_sigma(ctx, gamma, k)) for k, n, om in entries])


def log_of(sp, ctx=CTX):
    return wall_operator_log(sp.to_operator(), ctx)


class TestExtract:
    def test_single(self):
        got = extract_omegas(G, log_of(spectrum((1, 0, 1))), CTX)
        assert got.rows() == [(1, 0, F(1))]
        assert got.omega(2, 0) == 0

    def test_square(self):
        got = extract_omegas(G, log_of(spectrum((1, 0, 2))), CTX)
        assert got.rows() == [(1, 0, F(2))]

    def test_shift(self):
        # theta^{(-1)^1 Omega}[(-v) sigma e] with Omega_1 = -1 is E(-v sigma e) itself
        sp = spectrum((1, 1, -1))
        got = extract_omegas(G, log_of(sp), CTX)
        assert got.rows() == [(1, 1, F(-1))]
        assert got.poincare(1) == QLaurent({1: -1})

    def test_zero_log(self):
        assert extract_omegas(G, TorusElement(CTX), CTX).entries() == {}

    def test_non_laurent_raises(self):
        sig = standard_sigma(CTX, G, 1)
        bad = TorusElement(CTX, {(sig[0], sig[1], 1, 1): QRational(QLaurent.const(1), QLaurent({0: 1, 2: 1}))})
        with pytest.raises(ExtractionError):
            extract_omegas(G, bad, CTX)


spectra = st.lists(st.tuples(st.integers(1, 3), st.integers(-2, 2),
                             st.sampled_from([F(1), F(-1), F(1, 2), F(-1, 2), F(2)])), min_size=1, max_size=4)


@given(spectra, st.sampled_from([(1, 0), (0, 1), (1, 1), (1, 2), (2, 1)]))
def test_round_trip(entries, gamma):
    ctx = SeriesContext(["t"], [9])  # every factor visible: k (a + b) <= 9
    op = spectrum(*entries, gamma=gamma, ctx=ctx).to_operator()
    assert round_trip(op, ctx) == OmegaSpectrum.from_operator(op)


@given(spectra)
def test_poincare_bar_symmetric_iff_spectrum_symmetric(entries):
    sp = OmegaSpectrum.from_operator(spectrum(*entries).to_operator())
    for k in sp.multiples():
        p = sp.poincare(k)
        sym = all(sp.omega(k, n) == sp.omega(k, -n) for n in range(-2, 3))
        assert p.is_bar_symmetric() == sym


class TestFG:
    def test_single_factor(self):
        ctx = SeriesContext(["t"], [4])
        assert fg_series_check(G, spectrum((1, 0, 1), ctx=ctx), ctx)

    def test_empty(self):
        assert fg_series_check(G, OmegaSpectrum(G, []), CTX)

    @given(st.lists(st.tuples(st.integers(1, 2), st.integers(-1, 1), st.sampled_from([F(1), F(-1), F(1, 2)])),
                    min_size=1, max_size=3), st.sampled_from([(1, 0), (1, 1), (1, 2)]))
    def test_random(self, entries, gamma):
        ctx = SeriesContext(["t"], [3])
        assert fg_series_check(gamma, spectrum(*entries, gamma=gamma, ctx=ctx), ctx)


class TestRamification:
    def test_examples(self):
        assert q_ramification((1, 1), (1, 1)).value == QRational(QLaurent.const(2))
        assert q_ramification((2,), (2,)).value == QRational(QLaurent.const(F(-1, 2)), q_number(2))
        assert q_ramification((2,), (1, 1)).value == QRational(QLaurent.const(1))
        assert q_ramification((2, 0), (1, 1)).count == 1

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            q_ramification((3,), (1, 1))

    def test_classical_limit(self):
        r = q_ramification((3,), (1, 2))
        assert r.value.eval_at_one() == r.classical() == F(-1, 4)

    def test_aut(self):
        assert aut_order((1, 1, 2)) == 2 and aut_order((1, 1, 1)) == 6 and aut_order(()) == 1

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=3), st.lists(st.integers(1, 3), min_size=1, max_size=4))
    def test_set_partition_count_brute(self, P, w):
        from itertools import product
        n = sum(1 for a in product(range(len(P)), repeat=len(w))
                if all(sum(w[s] for s in range(len(w)) if a[s] == j) == P[j] for j in range(len(P))))
        assert compatible_set_partitions(P, w) == n

    def test_ordered_partitions(self):
        assert ordered_partitions(2, 2) == [(0, 2), (1, 1), (2, 0)]
        assert ordered_partitions(2, 2, allow_zero=False) == [(1, 1)]


class TestRefinedGW:
    def test_values(self):
        assert refined_gw((1,), (1,)) == QLaurent.const(1)
        assert refined_gw((1, 1), (1,)) == QLaurent.const(1)
        assert refined_gw((2,), (1,)) == QLaurent()
        assert refined_gw((2, 1), (1, 1)) == QLaurent.const(1)
        assert refined_gw((1, 1), (1, 1)) == q_number(2)

    @pytest.mark.parametrize("P1,P2", [((1,), (2,)), ((2, 1), (1,)), ((1, 1), (2, 1)), ((3,), (1, 1))])
    def test_classical_limit(self, P1, P2):
        val = refined_gw(P1, P2)
        assert QRational.coerce(val).eval_at_one() == classical_gw(P1, P2)

    @pytest.mark.parametrize("l1,l2", [(1, 1), (2, 1), (1, 2)])
    def test_against_multiparameter_saturation(self, l1, l2):
        rows = multiparameter_gw_check(l1, l2, 3)
        assert rows and all(QRational.coerce(a) == QRational.coerce(b) for _, _, a, b in rows)


@given(st.lists(st.integers(1, 2), min_size=1, max_size=2), st.lists(st.integers(1, 2), min_size=1, max_size=2))
def test_refined_gw_bar_symmetric(P1, P2):
    assert QRational.coerce(refined_gw(P1, P2)).bar() == QRational.coerce(refined_gw(P1, P2))


class TestGPS:
    def test_values(self):
        assert gps_classical_coeff(1, 1, 1, 1, 1) == 1
        assert gps_classical_coeff(1, 2, 1, 1, 1) == 0

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            gps_classical_coeff(2, 2, 1, 1, 1)

    @pytest.mark.parametrize("l1,l2", [(1, 1), (1, 2), (2, 1), (2, 2)])
    def test_chain(self, l1, l2):
        for g, k, engine, formula in gps_chain(l1, l2, 4):
            assert engine == formula, (g, k)


class TestSpecialization:
    def test_one_one(self):
        assert specialization_check(1, 1, 2)

    def test_two_one(self):
        assert specialization_check(2, 1, 3)

    def test_central_pentagon(self):
        sp = central_spectra(commutator_factorization(1, 1, 8))
        assert list(sp) == [(1, 1)] and sp[(1, 1)].rows() == [(1, 0, F(1))]
