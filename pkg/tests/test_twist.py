import itertools
import random

import pytest
from hypothesis import given, strategies as st

from alterknot.builders import double_twist
from alterknot.diagram import is_prime, parse_pd, validate
from alterknot.dt import parse_dt
from alterknot.errors import NotAlternating, NotPrime, NotReduced, PreconditionError
from alterknot.twist import (
    all_flypes,
    apply_flype,
    detect_twist_regions,
    is_twist_reduced,
    random_flypes,
    tw_N,
    twist_classes,
    twist_equivalent,
    twist_number,
    twist_reduce,
    twist_reduce_trace,
)

from conftest import diagram_from_seed
from oracles import corner_search_equivalent, normalized_bracket


def region_lengths(d):
    return sorted(r.length for r in detect_twist_regions(d))


class TestRegions:
    def test_trefoil(self, trefoil):
        assert region_lengths(trefoil) == [3]

    def test_figure_eight(self, figure_eight):
        assert region_lengths(figure_eight) == [2, 2]

    def test_three_regions(self, six_two):
        assert len(detect_twist_regions(six_two)) == 3

    def test_monogon_rejected(self):
        with pytest.raises(NotReduced):
            detect_twist_regions(parse_pd("X[1,1,2,2]"))

    def test_consecutive_crossings_share_a_bigon(self, six_two):
        bigons = {frozenset(f.crossings) for f in six_two.bigons()}
        for region in detect_twist_regions(six_two):
            for a, b in zip(region.crossing_ids, region.crossing_ids[1:]):
                assert frozenset((a, b)) in bigons

    def test_handedness_is_a_sign(self, five_two):
        assert {r.handedness for r in detect_twist_regions(five_two)} <= {-1, 1}


class TestEquivalence:
    def test_same_chain(self, trefoil):
        assert twist_equivalent(trefoil, 0, 1)

    def test_figure_eight_regions_are_inequivalent(self, figure_eight):
        a, b = detect_twist_regions(figure_eight)
        assert not twist_equivalent(figure_eight, a.crossing_ids[0], b.crossing_ids[0])
        assert not corner_search_equivalent(figure_eight, a.crossing_ids[0], b.crossing_ids[0])

    def test_same_crossing_rejected(self, trefoil):
        with pytest.raises(PreconditionError):
            twist_equivalent(trefoil, 1, 1)

    @given(st.integers(0, 10**9))
    def test_matches_curve_search(self, seed):
        d, rng = diagram_from_seed(seed, 3, 8)
        d, _ = random_flypes(d, 10, rng)
        for c1, c2 in itertools.combinations(range(len(d)), 2):
            assert twist_equivalent(d, c1, c2) == corner_search_equivalent(d, c1, c2)


class TestReduce:
    def test_fixed_point(self, six_two):
        reduced, moves = twist_reduce_trace(six_two)
        assert moves == ()
        assert reduced.pd == six_two.pd

    def test_figure_eight_identity(self, figure_eight):
        assert twist_reduce_trace(figure_eight)[1] == ()

    def test_merges_separated_crossings(self, unreduced):
        assert twist_equivalent(unreduced, 3, 6)
        assert corner_search_equivalent(unreduced, 3, 6)
        assert not is_twist_reduced(unreduced)
        reduced, moves = twist_reduce_trace(unreduced)
        assert len(moves) == 1
        assert is_twist_reduced(reduced)
        merged = [r for r in detect_twist_regions(reduced) if 3 in r.crossing_ids]
        assert sorted(merged[0].crossing_ids) == [3, 6]
        # the recorded moves reproduce the output
        replay = unreduced
        for move in moves:
            replay = apply_flype(replay, move)
        assert replay.pd == reduced.pd

    def test_output_invariants(self, unreduced):
        reduced = twist_reduce(unreduced)
        report = validate(reduced)
        assert report.alternating and report.prime and report.reduced
        assert len(reduced) == len(unreduced)
        assert normalized_bracket(reduced.pd, reduced.writhe) == normalized_bracket(
            unreduced.pd, unreduced.writhe
        )

    def test_rejects_composite(self):
        with pytest.raises(NotPrime):
            twist_reduce(parse_dt("4 6 2 10 12 8"))

    def test_rejects_non_alternating(self):
        with pytest.raises(NotAlternating):
            twist_reduce(parse_dt("4 10 -14 -12 2 8 -6"))


class TestTwistNumber:
    @pytest.mark.parametrize("code,tw", [("4 6 2", 1), ("4 6 8 2", 2), ("4 8 10 2 6", 2),
                                         ("4 8 10 12 2 6", 3), ("8 6 12 10 14 4 2", 4)])
    def test_small_knots(self, code, tw):
        assert twist_number(parse_dt(code)) == tw

    def test_tw_N(self, figure_eight, long_121_3):
        assert tw_N(figure_eight, 2) == 2
        assert tw_N(figure_eight, 121) == 0
        assert tw_N(long_121_3, 121) == 1
        assert region_lengths(long_121_3) == [3, 121]

    def test_double_twist_lengths(self):
        assert region_lengths(double_twist(4, 2)) == [2, 4]


@given(st.integers(0, 10**9))
def test_flype_invariance(seed):
    d, rng = diagram_from_seed(seed, 4, 10)
    before = twist_number(d)
    bracket = normalized_bracket(d.pd, d.writhe)
    e, _ = random_flypes(d, 25, rng)
    assert e.is_alternating and is_prime(e) and len(e) == len(d)
    assert twist_number(e) == before
    assert len(twist_classes(e)) == before
    assert normalized_bracket(e.pd, e.writhe) == bracket


@given(st.integers(0, 10**9))
def test_region_bookkeeping(seed):
    d, _ = diagram_from_seed(seed, 3, 12)
    regions = detect_twist_regions(d)
    assert sum(r.length for r in regions) == len(d)
    assert 1 <= len(regions) <= len(d)
    assert (len(regions) == len(d)) == (not d.bigons())
    ids = [min(r.crossing_ids) for r in regions]
    assert ids == sorted(ids)


def test_every_candidate_flype_is_valid(six_two):
    for move in all_flypes(six_two):
        e = apply_flype(six_two, move)
        assert e.is_alternating and twist_number(e) == 3


def test_reduce_is_deterministic():
    rng = random.Random(11)
    d, _ = diagram_from_seed(5, 9, 9)
    d, _ = random_flypes(d, 30, rng)
    assert twist_reduce(d).pd == twist_reduce(d).pd
