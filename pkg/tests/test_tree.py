import itertools

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from conftest import letter_lists, to_word, words
from geowalk.tree import (
    IDENTITY,
    FreeGroup,
    ReducedWord,
    TreeEnd,
    TreeLine,
    common_prefix_length,
    common_prefix_length_many,
    confluence,
    distance,
    distance_to_geodesic,
    end_estimate,
    format_word,
    geodesic,
    gromov_product,
    inverse,
    multiply,
    parse_word,
    pencil_line,
)

F2 = FreeGroup(2)
w = parse_word


class TestWords:
    def test_cancellation(self):
        assert multiply(w("ab"), w("b'a")) is w("aa")
        assert inverse(w("ab")) is w("b'a'")

    def test_inverse_cancels_on_random_words(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            u = to_word(oracles.random_word(rng, 3, 30))
            assert u * inverse(u) is IDENTITY
            assert inverse(u) * u is IDENTITY

    @given(letter_lists(3, 30))
    def test_reduction_matches_oracle(self, letters):
        assert to_word(letters).letters() == oracles.reduce_word(letters)

    @given(words(3), words(3), words(3))
    def test_associativity(self, u, v, x):
        assert (u * v) * x is u * (v * x)

    @given(words(4, 20))
    def test_literal_round_trip(self, u):
        assert parse_word(format_word(u)) is u

    def test_literals(self):
        assert format_word(IDENTITY) == "1"
        assert w("1") is IDENTITY and w("") is IDENTITY
        assert w("ab'a").letters() == (1, -2, 1)
        assert w("aa'") is IDENTITY
        for bad in ("a''", "'a", "a1", "ä"):
            with pytest.raises(ValueError):
                parse_word(bad)
        with pytest.raises(ValueError):
            F2.parse("c")

    def test_hash_consing(self):
        assert ReducedWord.from_letters([1, 2, -2, 2]) is w("ab")
        with pytest.raises(TypeError):
            ReducedWord()

    def test_shortlex_order(self):
        order = sorted([w("b"), w("a'"), w("a"), w("b'"), w("aa"), IDENTITY], key=ReducedWord.sort_key)
        assert [format_word(x) for x in order] == ["1", "a", "a'", "b", "b'", "aa"]

    def test_ancestors(self):
        u = w("abb'a'ba")
        assert [format_word(x) for x in w("ab").ancestors()] == ["1", "a", "ab"]
        assert u.ancestor(0) is IDENTITY and u.ancestor(u.length) is u
        with pytest.raises(ValueError):
            u.ancestor(u.length + 1)

    def test_pickle_round_trip(self):
        import pickle

        u = w("abab'")
        assert pickle.loads(pickle.dumps(u)) is u

    @given(letter_lists(2, 60), letter_lists(2, 10))
    def test_fold(self, start, steps):
        s = to_word(start)
        parts = [to_word(steps[i : i + 3]) for i in range(0, len(steps), 3)]
        expect = oracles.reduce_word(tuple(start) + tuple(steps))
        assert F2.fold(s, parts).letters() == expect
        assert F2.fold_length(s, parts) == len(expect)


class TestMetric:
    def test_examples(self):
        assert distance(w("aa"), w("ab")) == 2
        assert [format_word(x) for x in geodesic(w("aa"), w("ab"))] == ["aa", "a", "ab"]
        assert gromov_product(IDENTITY, w("aa"), w("ab")) == 1
        y = w("ab'ab")
        assert gromov_product(IDENTITY, y, y) == distance(IDENTITY, y)

    @given(words(), words())
    def test_distance_matches_oracle(self, u, v):
        assert distance(u, v) == oracles.word_dist(u.letters(), v.letters())
        assert [p.letters() for p in geodesic(u, v)] == oracles.tree_path(u.letters(), v.letters())

    @given(words(), words(), words())
    def test_isometric_action(self, g, u, v):
        assert distance(g * u, g * v) == distance(u, v)

    @given(words(), words(), words())
    def test_zero_hyperbolicity(self, x, y, z):
        side = set(geodesic(x, z)) | set(geodesic(z, y))
        assert all(p in side for p in geodesic(x, y))
        assert gromov_product(x, y, z) == distance_to_geodesic(x, geodesic(y, z))
        assert F2.segment_distance(y, z, x) == distance_to_geodesic(x, geodesic(y, z))

    @given(st.lists(words(), min_size=1, max_size=8))
    def test_common_prefix_of_many(self, ws):
        brute = min(common_prefix_length(a, b) for a, b in itertools.product(ws, repeat=2))
        assert common_prefix_length_many(ws) == brute


class TestEnds:
    def test_confluence_examples(self):
        xi, eta = TreeEnd.ray([1], 5), TreeEnd.ray([2], 5)
        assert confluence(xi, eta) is IDENTITY
        line = pencil_line(xi, eta)
        assert line.point(1) is w("a") and line.point(-1) is w("b") and line.point(0) is IDENTITY
        xi2 = TreeEnd(w("abbbb"), 5)
        eta2 = TreeEnd(w("aaaaa"), 5)
        assert confluence(xi2, eta2) is w("a")

    def test_confluence_requires_distinct_certified_ends(self):
        with pytest.raises(ValueError):
            confluence(TreeEnd(w("ab"), 1), TreeEnd(w("aa"), 1))

    def test_end_estimate_examples(self):
        imgs = [w("a"), w("aa"), w("aaa"), w("aaaa")]
        est = end_estimate(imgs)
        assert est.prefix is w("aaaa") and est.stable_length >= 1
        assert end_estimate([IDENTITY] * 4).stable_length == 0
        with pytest.raises(ValueError):
            end_estimate([IDENTITY])

    def test_ray_requires_escape(self):
        assert TreeEnd.ray([1, 2], 4).prefix is w("abab")
        with pytest.raises(ValueError):
            TreeEnd.ray([1, -1], 3)

    @given(words(2, 10), words(2, 15), st.integers(0, 15))
    def test_end_translation_keeps_certified_part(self, g, prefix, stable):
        assume(stable <= prefix.length)
        end = TreeEnd(prefix, stable)
        moved = end.translate(g)
        assert moved.prefix is g * prefix
        # Whatever is certified after moving really is a prefix of g * (stable part) extended.
        assert moved.stable_prefix is (g * end.stable_prefix).ancestor(moved.stable_length)


class TestLine:
    @given(words(2, 8), words(2, 8), words(2, 12))
    def test_distance_matches_vertex_scan(self, a, b, v):
        assume(a.length and b.length and a.letters()[0] != b.letters()[0])
        line = TreeLine(IDENTITY, a, b)
        assert line.distance(v) == min(distance(v, p) for p in line.vertices())
        lo, hi = line.extent
        for t in range(lo, hi + 1):
            assert line.distance_at(v, t) == distance(v, line.point(t))
        if hi - lo >= 1:
            t = lo + 0.5
            assert line.distance_at(v, t) <= distance(v, line.point(lo)) + 0.5

    def test_rejects_bad_tips(self):
        with pytest.raises(ValueError):
            TreeLine(IDENTITY, w("ab"), w("aa"))
        with pytest.raises(ValueError):
            TreeLine(w("a"), w("b"), w("aa"))
        with pytest.raises(ValueError):
            pencil_line(TreeEnd.ray([1], 3), TreeEnd.ray([2], 3)).point(4)

    @given(words(2, 6))
    def test_translate(self, g):
        line = TreeLine(IDENTITY, w("aaaaaaaaaa"), w("bbbbbbbbbb"))
        moved = line.translate(g)
        verts = {g * p for p in line.vertices()}
        assert set(moved.vertices()) == verts
        assert moved.center.length == min(p.length for p in verts)
