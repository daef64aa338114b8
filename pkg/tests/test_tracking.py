import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geowalk.hplane import ExactLine, MoebiusGroup
from geowalk.lamplighter import LampSegment, LamplighterGroup
from geowalk.tracking import (
    OrbitFunctionTrace,
    PencilUnavailable,
    decadic_checkpoints,
    density,
    drift_estimate,
    equivariance_check,
    ergodic_trace,
    finite_pencil,
    half_densities,
    increment_violations,
    telescoping_check,
    tracking_profile,
    tracking_trial,
    visibility_probe,
    zero_drift,
)
from geowalk.tree import IDENTITY, FreeGroup, TreeEnd, TreeLine, parse_word, pencil_line
from geowalk.walks import BilateralPath, FiniteMeasure, bilateral_walk, make_rng, walk

F2 = FreeGroup(2)
L2 = LamplighterGroup(2, 2)
SRW = FiniteMeasure.uniform(F2.generators())
A = parse_word("a")


class TestDrift:
    def test_dirac_is_exact(self):
        est = drift_estimate(F2, FiniteMeasure.dirac(A), 1000, 5, 0)
        assert est.mean == 1.0 and est.spread == 0.0
        g = parse_word("ab")
        assert drift_estimate(F2, FiniteMeasure.dirac(g), 37, 3, 0).mean == 2.0

    def test_lamplighter_positive_and_seed_stable(self):
        mu = FiniteMeasure.uniform(L2.generators())
        one = drift_estimate(L2, mu, 10**5, 8, 1)
        two = drift_estimate(L2, mu, 10**5, 8, 2)
        assert one.mean > 0.1 and two.mean > 0.1
        assert abs(one.mean - two.mean) <= 0.05 * max(one.mean, two.mean)

    def test_parallel_matches_serial(self):
        serial = drift_estimate(F2, SRW, 2000, 6, 11, jobs=1)
        parallel = drift_estimate(F2, SRW, 2000, 6, 11, jobs=3)
        assert serial == parallel

    def test_generic_path_matches_fast_path(self):
        # A basepoint forces the generic route; on a Cayley graph the answer is the same.
        fast = drift_estimate(F2, SRW, 500, 4, 3)
        slow = drift_estimate(F2, SRW, 500, 4, 3, basepoint=IDENTITY)
        assert fast.values == slow.values

    def test_zero_drift_verdict(self):
        assert zero_drift(0.01, 0.02)
        assert not zero_drift(0.5, 0.01)
        with pytest.raises(ValueError):
            drift_estimate(F2, SRW, 0, 1, 0)

    def test_hplane_drift_positive(self):
        H = MoebiusGroup()
        est = drift_estimate(H, FiniteMeasure.uniform(H.generators()), 400, 6, 5)
        assert est.mean > 0.5 and not zero_drift(est.mean, est.spread)

    def test_checkpoints(self):
        assert decadic_checkpoints(10**4) == [100, 1000, 10000]
        assert decadic_checkpoints(99) == []


class TestProfile:
    def test_dirac_walk_on_axis(self):
        p = walk(F2, FiniteMeasure.dirac(A), 1000, make_rng(0))
        axis = TreeLine(IDENTITY, parse_word("a" * 1200), parse_word("a'" * 5))
        rep = tracking_profile(p, axis, 1.0, [10, 100, 1000])
        assert rep.errors == [0.0, 0.0, 0.0]
        assert rep.orientation == 1
        assert rep.density[10.0] == 1.0

    @given(st.integers(0, 2**32))
    @settings(max_examples=20)
    def test_errors_dominate_nearest_distance(self, seed):
        b = bilateral_walk(F2, SRW, 600, make_rng(seed))
        try:
            pencil = finite_pencil(b)
        except PencilUnavailable:
            return
        rep = tracking_profile(b.forward_path(), pencil, 0.5, [10, 100, 300])
        for k, e, near in zip(rep.checkpoints, rep.errors, rep.nearest):
            assert e >= near / k - 1e-12
            assert near >= 0

    def test_sign_dichotomy(self):
        same = 0
        trials = 100
        for t in range(trials):
            rep = tracking_trial(F2, SRW, 1000, t, 0.5, checkpoints=[100, 1000], density_constants=())
            same += rep.orientation_by_checkpoint[-1] == rep.orientation_by_checkpoint[-2]
        assert same / trials >= 0.99

    def test_lamplighter_trial(self):
        mu = FiniteMeasure.uniform(L2.generators())
        rep = tracking_trial(L2, mu, 1000, 3, 0.59, checkpoints=[100, 1000], density_stride=20)
        assert len(rep.errors) == 2 and all(e >= 0 for e in rep.errors)
        assert rep.errors[-1] < 0.2
        assert 0 <= rep.density[10.0] <= 1

    def test_hplane_trial(self):
        H = MoebiusGroup()
        rep = tracking_trial(H, FiniteMeasure.uniform(H.generators()), 300, 1, 0.8, checkpoints=[30, 300])
        assert rep.errors[-1] < rep.errors[0] + 0.5


class TestPencils:
    def test_kinds(self):
        b = bilateral_walk(F2, SRW, 200, make_rng(2))
        assert isinstance(finite_pencil(b), TreeLine)
        lb = bilateral_walk(L2, FiniteMeasure.uniform(L2.generators()), 200, make_rng(2))
        seg = finite_pencil(lb)
        assert isinstance(seg, LampSegment)
        assert seg.start == lb.prefix(-200) and seg.end == lb.prefix(200)
        H = MoebiusGroup()
        hb = bilateral_walk(H, FiniteMeasure.uniform(H.generators()), 300, make_rng(2))
        try:
            assert isinstance(finite_pencil(hb), ExactLine)
        except PencilUnavailable:
            pass

    def test_unavailable(self):
        # A walk that stands still has no ends to join.
        e = FiniteMeasure.dirac(IDENTITY)
        b = bilateral_walk(F2, e, 20, make_rng(0))
        with pytest.raises(PencilUnavailable):
            finite_pencil(b)
        with pytest.raises(TypeError):
            finite_pencil(BilateralPath(object(), (1, 2, 3), -1, None))


class TestErgodic:
    def test_constant_path(self):
        b = bilateral_walk(F2, FiniteMeasure.dirac(IDENTITY), 30, make_rng(0))
        line = pencil_line(TreeEnd.ray([1], 3), TreeEnd.ray([2], 3))
        tr = ergodic_trace(b, line, 30)
        assert set(tr.values) == {0}
        assert telescoping_check(tr) == 0
        assert density(tr.values[1:], 1) == 1

    @given(st.integers(0, 2**32))
    @settings(max_examples=25)
    def test_tree_traces(self, seed):
        b = bilateral_walk(F2, SRW, 400, make_rng(seed))
        try:
            pencil = finite_pencil(b)
        except PencilUnavailable:
            return
        tr = ergodic_trace(b, pencil, 400)
        assert telescoping_check(tr) == 0
        assert increment_violations(tr) == 0
        assert all(isinstance(v, int) for v in tr.values)

    @given(st.integers(0, 2**32))
    @settings(max_examples=10)
    def test_lamplighter_traces(self, seed):
        b = bilateral_walk(L2, FiniteMeasure.uniform(L2.switch_walk_switch()), 150, make_rng(seed))
        tr = ergodic_trace(b, finite_pencil(b), 150)
        assert telescoping_check(tr) == 0
        assert increment_violations(tr) == 0

    def test_hplane_traces(self):
        H = MoebiusGroup()
        mu = FiniteMeasure.uniform(H.generators())
        line = H.pencil(Fraction(-1, 3), Fraction(5, 2))
        b = bilateral_walk(H, mu, 300, make_rng(4))
        tr = ergodic_trace(b, line, 300)
        assert telescoping_check(tr) < 1e-9
        assert increment_violations(tr, tol=1e-9) == 0

    def test_violations_detected(self):
        tr = OrbitFunctionTrace((0, 3, 3), (3, 0), (1, 1))
        assert increment_violations(tr) == 1
        assert telescoping_check(OrbitFunctionTrace((0, 1, 3), (1, 1), (1, 1))) == 1

    def test_density(self):
        assert density([1, 5, 20, 2], 4) == 0.5
        assert half_densities([1, 1, 50, 50], 10) == (1.0, 0.0)
        with pytest.raises(ValueError):
            density([], 1)
        with pytest.raises(ValueError):
            ergodic_trace(bilateral_walk(F2, SRW, 5, make_rng(0)), None, 6)


class TestVisibility:
    def test_tree_ends(self):
        res = visibility_probe(F2, lambda d: (parse_word("a" * d), parse_word("b" * d)), range(1, 21))
        assert set(res.radii) == {0} and res.stable

    def test_verdicts(self):
        rising = visibility_probe(F2, lambda d: (parse_word("a" * d), parse_word("a" * (2 * d))), range(1, 11))
        assert list(rising.radii) == list(range(1, 11)) and not rising.stable
        custom = visibility_probe(None, lambda d: (d, d), [1, 2, 3, 4], radius=lambda u, v: 3)
        assert custom.stable and custom.running_max == (3, 3, 3, 3)


class TestEquivariance:
    def test_dirac(self):
        b = bilateral_walk(F2, FiniteMeasure.dirac(A), 40, make_rng(0))
        assert equivariance_check(b, 3) == math.inf
        assert equivariance_check(b, 0) == math.inf

    @given(st.integers(0, 2**32), st.integers(0, 10))
    @settings(max_examples=30)
    def test_random(self, seed, k):
        b = bilateral_walk(F2, SRW, 300, make_rng(seed))
        assert equivariance_check(b, k) == math.inf

    def test_errors(self):
        b = bilateral_walk(L2, FiniteMeasure.uniform(L2.generators()), 10, make_rng(0))
        with pytest.raises(TypeError):
            equivariance_check(b, 1)
        with pytest.raises(ValueError):
            equivariance_check(bilateral_walk(F2, SRW, 10, make_rng(0)), 10)
