import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tvx.algebra import QLaurent, SeriesContext, q_number
from tvx.factorization import saturate_central, standard_lines
from tvx.invariants import central_spectra, perturbative_spectra
from tvx.scattering import (
    DegenerateError,
    Diagram,
    Wall,
    asymptotic_collapse,
    central_to_diagram,
    elementary_lines,
    intersect,
    is_consistent,
    line_coefficients,
    merge_by_direction,
    path_ordered_product,
    perturb_standard,
    perturbative_saturation,
    saturate,
    scatter_pair,
)
from tvx.torus import Factor, WallOperator

F = Fraction
ORIGIN = (F(0), F(0))


def wall(kind, base, lat, coeff, mask, idx):
    w = Wall(kind, tuple(F(c) for c in base), lat, QLaurent.const(coeff) if not isinstance(coeff, QLaurent) else coeff,
             mask)
    w.index = idx
    return w


def two_lines(l1=1, l2=1, k=1, seed=7):
    ctx = SeriesContext(["t"], [k])
    lines = standard_lines(ctx, [l1, l2], variables=["t", "t"])
    return ctx, lines, perturbative_saturation(lines, k, seed)


class TestPerturb:
    def test_single_line_order_one(self):
        ctx = SeriesContext(["t"], [1])
        (line,) = standard_lines(ctx, [1], directions=[(1, 0)], variables=["t"])
        d = perturb_standard([line], 1)
        assert len(d.walls) == 1
        w = d.walls[0]
        assert w.lattice == (1, 0) and w.coeff == QLaurent.const(1) and w.mask == 1

    def test_order_two(self):
        ctx = SeriesContext(["t"], [2])
        (line,) = standard_lines(ctx, [1], directions=[(1, 0)], variables=["t"])
        a = line_coefficients(line, 2)
        d = perturb_standard([line], 2)
        singles = [w for w in d.walls if bin(w.mask).count("1") == 1]
        doubles = [w for w in d.walls if bin(w.mask).count("1") == 2]
        assert len(singles) == 2 and all(w.coeff == a[(1, 1)] and w.lattice == (1, 0) for w in singles)
        assert len(doubles) == 1 and doubles[0].lattice == (2, 0) and doubles[0].coeff == 2 * a[(2, 2)]

    def test_line_coefficients_are_log_times_v_minus_inverse(self):
        ctx = SeriesContext(["t"], [2])
        (line,) = standard_lines(ctx, [1], directions=[(1, 0)], variables=["t"])
        a = line_coefficients(line, 2)
        assert a[(1, 1)] == QLaurent.const(1)
        # -(1/2) / [2]_q-type term from the second order of log E
        assert a[(2, 2)] * q_number(2) == QLaurent.const(F(-1, 2))

    def test_empty(self):
        assert perturb_standard([], 3).walls == []


class TestScatterPair:
    def test_unit_pairing(self):
        a = wall("line", (0, 1), (1, 0), 3, 1, 0)
        b = wall("line", (1, 0), (0, 1), 5, 2, 1)
        r = scatter_pair(a, b)
        assert r.lattice == (1, 1) and r.coeff == QLaurent.const(15) and r.base == (1, 1) and r.mask == 3

    def test_pairing_two(self):
        a = wall("line", (0, 0), (1, 0), 1, 1, 0)
        b = wall("line", (0, 0), (1, 2), 1, 2, 1)
        r = scatter_pair(a, b)
        assert r.lattice == (2, 2) and r.direction == (1, 1) and r.coeff == q_number(2)

    def test_overlap(self):
        a = wall("line", (0, 0), (1, 0), 1, 1, 0)
        b = wall("line", (0, 0), (0, 1), 1, 1, 1)
        assert scatter_pair(a, b) is None

    def test_order_independent(self):
        a = wall("line", (0, 1), (1, 0), 2, 1, 0)
        b = wall("line", (1, 0), (0, 1), 3, 2, 1)
        r1, r2 = scatter_pair(a, b), scatter_pair(b, a)
        assert (r1.lattice, r1.coeff, r1.base) == (r2.lattice, r2.coeff, r2.base)


class TestSaturate:
    def test_two_lines_add_one_ray(self):
        d = elementary_lines([((1, 0), 1), ((0, 1), 1)], seed=3)
        saturate(d)
        assert len(d.rays()) == 1 and d.rays()[0].direction == (1, 1)

    def test_single_line_unchanged(self):
        d = elementary_lines([((1, 0), 1)], seed=3)
        saturate(d)
        assert len(d.walls) == 1

    def test_collinear_is_degenerate(self):
        d = Diagram(SeriesContext([], [], ["a", "b"]))
        d.add(wall("line", (0, 0), (1, 0), 1, 1, 0))
        d.add(wall("line", (5, 0), (2, 0), 1, 2, 1))
        with pytest.raises(DegenerateError):
            saturate(d)

    def test_pentagon_regime_order_eight(self):
        # central engine at order 8, perturbative engine in the same regime at order 3
        ctx = SeriesContext(["t"], [8])
        lines = standard_lines(ctx, [1, 1], variables=["t", "t"])
        spectra = central_spectra(saturate_central(lines, ctx))
        assert list(spectra) == [(1, 1)]
        assert spectra[(1, 1)].rows() == [(1, 0, F(1))]
        ctx3, lines3, diag = two_lines(1, 1, 3)
        assert is_consistent(diag)
        assert perturbative_spectra(diag, 2, 3) == central_spectra(saturate_central(lines3, ctx3))

    def test_merge_two_one_order_three(self):
        ctx, lines, diag = two_lines(2, 1, 3)
        got = perturbative_spectra(diag, 2, 3)
        assert sorted(got) == [(1, 1), (2, 1)]
        assert got == central_spectra(saturate_central(lines, ctx))

    def test_reproducible(self):
        a = two_lines(1, 1, 2, seed=11)[2].to_json()
        b = two_lines(1, 1, 2, seed=11)[2].to_json()
        assert a == b


class TestCollapse:
    def test_moves_to_origin(self):
        d = Diagram(SeriesContext([], [], ["a"]))
        d.add(wall("ray", (3, 2), (1, 1), 1, 1, 0))
        c = asymptotic_collapse(d)
        assert c.walls[0].base == ORIGIN and c.walls[0].direction == (1, 1)

    def test_parallel_rays_merge(self):
        d = Diagram(SeriesContext([], [], ["a", "b"]))
        d.add(wall("ray", (3, 2), (1, 1), 2, 1, 0))
        d.add(wall("ray", (0, 5), (1, 1), 3, 2, 1))
        merged = merge_by_direction(d)
        assert list(merged) == [(1, 1)] and len(merged[(1, 1)]) == 2

    def test_central_unchanged(self):
        d = Diagram(SeriesContext([], [], ["a"]))
        d.add(wall("ray", (0, 0), (1, 1), 1, 1, 0))
        assert asymptotic_collapse(d).to_json()["walls"] == d.to_json()["walls"]

    def test_no_rays(self):
        assert merge_by_direction(Diagram(SeriesContext([], [], ["a"]))) == {}


class TestLoops:
    def test_empty_identity(self):
        assert is_consistent(Diagram(SeriesContext([], [], ["a"])))

    def test_unsaturated_is_not_identity(self):
        d = elementary_lines([((1, 0), 1), ((0, 1), 1)], seed=3)
        assert not is_consistent(d)
        saturate(d)
        assert is_consistent(d)

    def test_central_loop(self):
        ctx = SeriesContext(["t1", "t2", "t3"], [2, 2, 2])
        lines = standard_lines(ctx, [1, 2, 1], directions=[(1, 0), (0, 1), (1, 1)], variables=["t1", "t2", "t3"])
        assert is_consistent(central_to_diagram(saturate_central(lines, ctx)))

    def test_intersect(self):
        a = wall("line", (0, 0), (1, 0), 1, 1, 0)
        b = wall("ray", (2, -1), (0, 1), 1, 2, 1)
        kind, p, s1, s2 = intersect(a, b)
        assert kind == "point" and p == (2, 0) and s2 == 1


@given(st.integers(0, 2 ** 32), st.lists(st.sampled_from([(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)]), min_size=2,
                                          max_size=4))
def test_saturated_elementary_diagrams_are_consistent(seed, dirs):
    d = elementary_lines([(al, 1) for al in dirs], seed=seed)
    try:
        saturate(d)
    except DegenerateError:
        return
    assert is_consistent(d)


@given(st.integers(0, 2 ** 32))
def test_seed_independence_of_collapse(seed):
    ctx = SeriesContext(["t"], [2])
    lines = standard_lines(ctx, [1, 1], variables=["t", "t"])
    diag = perturbative_saturation(lines, 2, seed)
    assert perturbative_spectra(diag, 2, 2) == central_spectra(saturate_central(lines, ctx))
