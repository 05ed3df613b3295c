import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from alterknot.arcs import (
    INFINITY,
    CuspedSurfaceModel,
    arc_key,
    cusp,
    cusp_class,
    default_qmax,
    disjointness,
    enumerate_arcs,
    max_disjoint,
    truncated_length,
    verify_arc_theorem,
)
from alterknot.errors import DomainError, IncompleteEnumeration

from oracles import brute_force_crosses, integrated_arc_length


def seams():
    return enumerate_arcs(1, 1.0, 0.0)


def by_endpoints(arcs):
    return {frozenset(a.endpoints): a for a in arcs}


class TestModel:
    def test_density(self):
        assert CuspedSurfaceModel(1.0).k == 3 / math.pi
        assert CuspedSurfaceModel(0.5).k == pytest.approx(1.5 / math.pi)

    @pytest.mark.parametrize("t", [0, -1, 1.5])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            CuspedSurfaceModel(t)

    def test_classes(self):
        assert cusp_class(INFINITY) == "inf"
        assert cusp_class((0, 1)) == "0"
        assert cusp_class((1, 1)) == "1"
        assert cusp_class((3, 4)) == "inf"


class TestLengths:
    def test_examples(self):
        assert truncated_length((0, 1), (2, 1)) == pytest.approx(2 * math.log(2))
        assert truncated_length((1, 2), (1, 1), 0.5) == pytest.approx(2 * math.log(2))
        assert truncated_length((1, 3), (1, 2)) == 0

    @given(st.integers(1, 50), st.integers(-100, 100), st.integers(1, 50), st.integers(-100, 100))
    def test_invariant_under_gamma2(self, q, p, s, r):
        a, b = cusp(p, q), cusp(r, s)
        if a == b:
            return
        g = (3, 2, 4, 3)  # in Gamma(2)
        ga = cusp(g[0] * a[0] + g[1] * a[1], g[2] * a[0] + g[3] * a[1])
        gb = cusp(g[0] * b[0] + g[1] * b[1], g[2] * b[0] + g[3] * b[1])
        assert arc_key(a, b) == arc_key(ga, gb)
        assert truncated_length(a, b) == pytest.approx(truncated_length(ga, gb))


class TestEnumerate:
    def test_seams(self):
        arcs = seams()
        assert len(arcs) == 3
        assert all(a.truncated_length == 0 and a.embedded for a in arcs)
        classes = {frozenset(a.classes) for a in arcs}
        assert classes == {frozenset(("inf", "0")), frozenset(("inf", "1")), frozenset(("0", "1"))}

    def test_shrunk_cusps_lengthen_seams(self):
        arcs = enumerate_arcs(1, 0.5, 2 * math.log(2) + 1e-9)
        assert len(arcs) == 3
        assert all(a.truncated_length == pytest.approx(2 * math.log(2)) for a in arcs)

    def test_no_duplicates(self):
        arcs = enumerate_arcs(30, 1.0, 6.0)
        keys = [arc_key(*a.endpoints) for a in arcs]
        assert len(keys) == len(set(keys))

    def test_complete_against_brute_force(self):
        # every pair of cusps with small denominators lands on an enumerated orbit
        cap = 2 * math.log(6)
        found = {a.key for a in enumerate_arcs(10, 1.0, cap)}
        fracs = [INFINITY] + [cusp(p, q) for q in range(1, 13) for p in range(-2 * q, 2 * q + 1)]
        for a, b in itertools.combinations(set(fracs), 2):
            if truncated_length(a, b) <= cap + 1e-12:
                assert arc_key(a, b) in found

    def test_incomplete(self):
        with pytest.raises(IncompleteEnumeration):
            enumerate_arcs(1, 1.0, 6.0)

    @pytest.mark.parametrize("args", [(0, 1.0, 1.0), (5, 0.0, 1.0), (5, 1.0, -1.0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            enumerate_arcs(*args)


class TestDisjointness:
    def test_seams_pairwise_disjoint(self):
        for a, b in itertools.combinations(seams(), 2):
            assert disjointness(a, b)

    def test_self(self):
        a = seams()[0]
        assert not disjointness(a, a)

    def test_loop_crosses_opposite_seam(self):
        arcs = by_endpoints(enumerate_arcs(4, 1.0, 2 * math.log(2)))
        loop = arcs[frozenset((INFINITY, (1, 2)))]
        opposite = [a for a in arcs.values() if set(a.classes) == {"0", "1"}][0]
        seam = arcs[frozenset((INFINITY, (0, 1)))]
        assert loop.embedded
        assert not disjointness(loop, opposite)
        assert disjointness(loop, seam)

    def test_six_simple_arcs(self):
        # the pair of pants has three seams and three simple loops
        arcs = enumerate_arcs(60, 1.0, 6.0)
        assert sum(a.embedded for a in arcs) == 6

    def test_symmetric(self):
        arcs = [a for a in enumerate_arcs(10, 1.0, 2 * math.log(3)) if a.embedded]
        for a, b in itertools.combinations(arcs, 2):
            assert disjointness(a, b) == disjointness(b, a)

    def test_max_disjoint_is_three(self):
        assert len(max_disjoint(enumerate_arcs(60, 1.0, 6.0))) == 3


class TestTheorem:
    def test_example_row(self):
        (row,) = verify_arc_theorem([1.0], [0.5])
        assert row.k == pytest.approx(0.9549, abs=1e-4)
        assert row.formula == pytest.approx(0.4088, abs=1e-4)
        assert row.achieved == 3 and row.passed
        assert row.csv_fields() == ["1.0", "0.5", "0.9549", "0.4088", "3", "pass"]

    def test_vacuous(self):
        (row,) = verify_arc_theorem([0.25], [0.25])
        assert row.formula <= 0 and row.passed

    def test_large_d(self):
        (row,) = verify_arc_theorem([1.0], [4.0])
        assert 0 < row.formula < 0.1
        assert row.achieved <= 3 and row.passed

    def test_default_qmax(self):
        assert default_qmax(3.0) == math.ceil(2 * math.exp(3)) + 1

    def test_too_small_qmax(self):
        with pytest.raises(IncompleteEnumeration):
            verify_arc_theorem([1.0], [3.0], qmax=1)

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            verify_arc_theorem([], [1.0])


def test_length_matches_integration():
    rng = random.Random(2024)
    for _ in range(25):
        a = cusp(rng.randint(-60, 60), rng.randint(1, 50))
        b = cusp(rng.randint(-60, 60), rng.randint(1, 50))
        if a == b:
            continue
        t = rng.uniform(0.3, 1.0)
        assert truncated_length(a, b, t) == pytest.approx(integrated_arc_length(a, b, t), abs=1e-9)


def test_crossings_match_group_search():
    arcs = enumerate_arcs(10, 1.0, 2 * math.log(4))
    for a, b in itertools.product(arcs, repeat=2):
        crosses = not disjointness(a, b) if a.key != b.key else not a.embedded
        assert crosses == brute_force_crosses(a.endpoints, b.endpoints, 9)
