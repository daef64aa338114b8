import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import to_state
from geowalk.hplane import MoebiusGroup
from geowalk.lamplighter import LamplighterGroup
from geowalk.tree import FreeGroup, IDENTITY, parse_word
from geowalk.walks import (
    BilateralPath,
    FiniteMeasure,
    PrefixSequence,
    ResourceError,
    ball_growth,
    bilateral_walk,
    first_moment,
    format_measure,
    make_rng,
    parse_measure,
    reflect,
    sample,
    sample_many,
    trial_seed,
    walk,
    walk_endpoint,
)

F2 = FreeGroup(2)
L2 = LamplighterGroup(2, 2)
SRW = FiniteMeasure.uniform(F2.generators())


def skewed_measure():
    return FiniteMeasure(((parse_word("a"), Fraction(1, 2)), (parse_word("b"), Fraction(1, 4)), (parse_word("ab'"), Fraction(1, 4))))


class TestMeasure:
    def test_rejects_bad_weights(self):
        a = parse_word("a")
        with pytest.raises(ValueError):
            FiniteMeasure(())
        with pytest.raises(ValueError):
            FiniteMeasure(((a, Fraction(1, 2)),))
        with pytest.raises(ValueError):
            FiniteMeasure(((a, 1.5), (parse_word("b"), -0.5)))
        with pytest.raises(ValueError):
            FiniteMeasure(((a, Fraction(1, 2)), (a, Fraction(1, 2))))

    def test_float_weights_within_tolerance(self):
        m = FiniteMeasure(((parse_word("a"), 0.1), (parse_word("b"), 0.2), (parse_word("a'"), 0.7)))
        assert len(m) == 3

    def test_dirac_sample(self):
        a = parse_word("a")
        assert sample(FiniteMeasure.dirac(a), make_rng(1)) is a

    def test_two_point_frequency(self):
        a = parse_word("a")
        m = FiniteMeasure.uniform([a, a.inverse()])
        draws = sample_many(m, make_rng(2024), 10**6)
        freq = sum(1 for g in draws if g is a) / len(draws)
        assert 0.498 <= freq <= 0.502

    def test_srw_draws_are_generators(self):
        draws = sample_many(SRW, make_rng(5), 1000)
        assert all(g.length == 1 for g in draws)

    def test_reflect(self):
        a = parse_word("a")
        r = reflect(F2, FiniteMeasure.dirac(a))
        assert r.elements == [a.inverse()]
        sym = reflect(F2, SRW)
        assert dict(sym.atoms) == dict(SRW.atoms)

    def test_first_moment(self):
        assert first_moment(F2, SRW) == 1
        assert first_moment(F2, FiniteMeasure.dirac(parse_word("aa"))) == 2
        m = FiniteMeasure(((L2.move(1), Fraction(1, 2)), (L2.press(1), Fraction(1, 2))))
        assert first_moment(L2, m) == 1

    def test_measure_text_round_trip(self):
        m = skewed_measure()
        text = format_measure(F2, m)
        assert parse_measure(F2, text) == m
        lm = FiniteMeasure.uniform(L2.generators())
        assert parse_measure(L2, format_measure(L2, lm)) == lm

    def test_measure_text_comments_and_errors(self):
        m = parse_measure(F2, "# walk\na 1/2\n\nb' 0.5  # tail\n")
        assert [str(g) for g in m.elements] == ["a", "b'"]
        with pytest.raises(ValueError):
            parse_measure(F2, "a\n")
        with pytest.raises(ValueError):
            parse_measure(F2, "a 1/3\nb 1/3\n")


class TestSeeding:
    def test_trial_seeds_distinct_and_stable(self):
        seeds = [trial_seed(7, t) for t in range(1000)]
        assert len(set(seeds)) == 1000
        assert seeds == [trial_seed(7, t) for t in range(1000)]
        assert trial_seed(7, 0) != trial_seed(8, 0)

    @given(st.integers(0, 2**64 - 1))
    def test_walk_is_deterministic(self, seed):
        p = walk(F2, SRW, 50, make_rng(seed))
        q = walk(F2, SRW, 50, make_rng(seed))
        assert p.steps == q.steps
        assert list(p.prefixes) == list(q.prefixes)


class TestPaths:
    def test_dirac_walk(self):
        a = parse_word("a")
        p = walk(F2, FiniteMeasure.dirac(a), 3, make_rng(0))
        assert [str(w) for w in p.prefixes] == ["1", "a", "aa", "aaa"]
        assert [F2.dist(IDENTITY, w) for w in p.images][1:] == [1, 2, 3]

    @given(st.integers(0, 2**32), st.integers(0, 40), st.integers(0, 40))
    def test_prefix_associativity_tree(self, seed, k, m):
        k, m = sorted((k, m))
        p = walk(F2, skewed_measure(), 40, make_rng(seed))
        lhs = p.prefixes[k].inverse() * p.prefixes[m]
        rhs = IDENTITY
        for s in p.steps[k:m]:
            rhs = rhs * s
        assert lhs is rhs

    @given(st.integers(0, 2**32), st.integers(0, 150), st.integers(0, 150))
    def test_prefix_associativity_lamplighter(self, seed, k, m):
        k, m = sorted((k, m))
        p = walk(L2, FiniteMeasure.uniform(L2.generators()), 150, make_rng(seed))
        lhs = L2.mul(L2.inv(p.prefixes[k]), p.prefixes[m])
        rhs = L2.identity
        for s in p.steps[k:m]:
            rhs = L2.mul(rhs, s)
        assert lhs == rhs

    def test_strided_prefixes_match_direct_products(self):
        p = walk(L2, FiniteMeasure.uniform(L2.switch_walk_switch()), 300, make_rng(3))
        direct = PrefixSequence(L2, L2.identity, p.steps, stride=1)
        assert p.prefixes.stride > 1
        assert list(p.prefixes) == list(direct)
        assert [p.prefixes[i] for i in (0, 1, 63, 64, 65, 299, 300)] == [direct[i] for i in (0, 1, 63, 64, 65, 299, 300)]
        assert p.prefixes[-1] == direct[300]

    def test_endpoint_matches_walk(self):
        for space, measure in [(F2, SRW), (L2, FiniteMeasure.uniform(L2.generators()))]:
            w = walk_endpoint(space, measure, 500, make_rng(9))
            p = walk(space, measure, 500, make_rng(9))
            assert w == p.prefixes[500]

    def test_hplane_walk_images(self):
        H = MoebiusGroup()
        p = walk(H, FiniteMeasure.uniform(H.generators()), 30, make_rng(4))
        for k in (1, 10, 30):
            assert p.images[k] == H.act(p.prefixes[k], H.basepoint)


class TestBilateral:
    def test_forward_half_matches_walk(self):
        b = bilateral_walk(F2, SRW, 100, make_rng(11))
        p = walk(F2, SRW, 100, make_rng(11))
        assert b.forward_path().steps == p.steps
        assert b.lo == -100 and b.hi == 100

    @given(st.integers(0, 2**32), st.integers(-30, 30), st.integers(-30, 30))
    def test_two_sided_products(self, seed, n, m):
        n, m = sorted((n, m))
        b = bilateral_walk(F2, skewed_measure(), 30, make_rng(seed))
        lhs = b.prefix(n).inverse() * b.prefix(m)
        rhs = IDENTITY
        for i in range(n + 1, m + 1):
            rhs = rhs * b.step(i)
        assert lhs is rhs

    @given(st.integers(0, 2**32), st.integers(0, 10))
    def test_shift(self, seed, k):
        b = bilateral_walk(F2, SRW, 30, make_rng(seed))
        s = b.shift(k)
        assert all(s.step(i) is b.step(i + k) for i in range(s.lo, s.hi + 1))
        for j in range(0, 15):
            assert s.prefix(j) is b.prefix(k).inverse() * b.prefix(k + j)

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            BilateralPath(F2, (IDENTITY,), 1, IDENTITY)


class TestReflectionDuality:
    def test_reflected_walk_matches_inverse_prefixes(self):
        mu = skewed_measure()
        check = reflect(F2, mu)
        n, trials = 60, 600
        ours = [walk_endpoint(F2, check, n, make_rng(trial_seed(1, t))).length for t in range(trials)]
        inv = [walk_endpoint(F2, mu, n, make_rng(trial_seed(2, t))).inverse().length for t in range(trials)]
        diff = abs(np.mean(ours) - np.mean(inv))
        sigma = math.sqrt(np.var(ours, ddof=1) / trials + np.var(inv, ddof=1) / trials)
        assert diff <= 3 * sigma


class TestBallGrowth:
    def test_free_group_counts(self):
        assert ball_growth(F2, 1) == 5
        assert ball_growth(F2, 2) == 17
        for r in range(0, 7):
            assert ball_growth(F2, r) == len(oracles.free_ball(2, r))

    def test_lamplighter_counts_match_bfs(self, lamp_table_2):
        for r in range(0, 6):
            assert ball_growth(L2, r) == sum(1 for d in lamp_table_2.values() if d <= r)

    def test_exponential_growth_bound(self, lamp_table_2):
        # Exponential rate fitted on radii <= 6 bounds the count out to radius 8.
        counts = {r: sum(1 for d in lamp_table_2.values() if d <= r) for r in range(1, 9)}
        rate = max(math.log(counts[r]) / r for r in range(1, 7))
        assert all(math.log(counts[r]) <= rate * r for r in range(1, 9))
        for space in (F2, L2):
            gens = len(space.generators())
            assert all(math.log(ball_growth(space, r)) / r <= math.log(gens + 1) for r in range(1, 6))

    def test_hplane_orbit_growth_bounded(self):
        H = MoebiusGroup()
        rates = [math.log(ball_growth(H, r, slack=4.0)) / r for r in range(2, 7)]
        assert max(rates) < 2.0

    def test_budget(self):
        with pytest.raises(ResourceError):
            ball_growth(F2, 10, budget=100)

    def test_generic_elements_keyed(self):
        # Built from integer matrices, the Sanov group stays exact and keys by sign class.
        H = MoebiusGroup()
        assert H.exact
        assert ball_growth(H, 0.0) == 1

    def test_lamplighter_state_conversion(self):
        g = to_state(((1, 2), frozenset({((), 1), ((1,), 1)})), 2)
        assert L2.format(g) == "pos=ab; lamps=1:1,a:1"
