import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import LineString

from rrtplus.chain import (
    Box,
    ChainRobot,
    Circle,
    Environment,
    Segment,
    chain_collision_batch,
    chain_in_collision,
    edge_resolution_for,
    fk_batch,
    forward_kinematics,
    segment_intersects,
)
from rrtplus.cspace import make_rng
from rrtplus.planners import validate_motion
from rrtplus.scenario import make_scenario

EMPTY = Environment((), (-20, -20), (20, 20))


class TestForwardKinematics:
    def test_straight(self):
        pts = forward_kinematics(ChainRobot(3), np.zeros(3))
        np.testing.assert_allclose(pts, [[0, 0], [1, 0], [2, 0], [3, 0]], atol=1e-15)

    def test_quarter_turn(self):
        pts = forward_kinematics(ChainRobot(4), [math.pi / 2, 0, 0, 0])
        np.testing.assert_allclose(pts[1], [0, 1], atol=1e-15)
        np.testing.assert_allclose(pts[4], [0, 4], atol=1e-14)

    def test_base_and_link_length(self):
        pts = forward_kinematics(ChainRobot(2, 0.5, (1.0, -1.0)), [0.0, math.pi / 2])
        np.testing.assert_allclose(pts, [[1, -1], [1.5, -1], [1.5, -0.5]], atol=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            forward_kinematics(ChainRobot(3), np.zeros(2))

    def test_links_keep_length_and_reach(self):
        rng = make_rng(0)
        robot = ChainRobot(9, 0.7, (0.3, 0.2))
        qs = rng.uniform(-math.pi, math.pi, size=(1000, 9))
        pts = fk_batch(robot, qs)
        seg = np.linalg.norm(np.diff(pts, axis=1), axis=-1)
        np.testing.assert_allclose(seg, 0.7, atol=1e-12)
        reach = np.linalg.norm(pts[:, -1] - robot.base, axis=-1)
        assert np.all(reach <= robot.reach + 1e-12)

    def test_invalid_robot(self):
        with pytest.raises(ValueError):
            ChainRobot(0)
        with pytest.raises(ValueError):
            ChainRobot(3, -1.0)


class TestObstacles:
    def test_validation(self):
        with pytest.raises(ValueError):
            Circle((0, 0), 0.0)
        with pytest.raises(ValueError):
            Box((1, 0), (0, 1))
        with pytest.raises(ValueError):
            Environment((Circle((math.inf, 0), 1.0),), (-1, -1), (1, 1))


class TestSegmentIntersects:
    def test_circle_examples(self):
        seg = ((0.0, 0.0), (2.0, 0.0))
        assert not segment_intersects(seg, Circle((1, 1), 0.5))
        assert segment_intersects(seg, Circle((1, 1), 1.5))

    def test_box_containing_endpoint(self):
        assert segment_intersects(((0, 0), (5, 5)), Box((4, 4), (6, 6)))

    def test_segment_examples(self):
        assert segment_intersects(((0, 0), (2, 2)), Segment((0, 2), (2, 0)))
        assert not segment_intersects(((0, 0), (1, 0)), Segment((0, 1), (1, 1)))
        assert segment_intersects(((0, 0), (1, 0)), Segment((1, 0), (1, 1)))  # touching end

    def test_dense_sampling_oracle(self):
        """Circle and box tests agree with 10^3 points sampled on the segment."""
        rng = make_rng(42)
        t = np.linspace(0, 1, 1000)[:, None]
        checked = 0
        for _ in range(10_000):
            a, b = rng.uniform(-3, 3, 2), rng.uniform(-3, 3, 2)
            pts = a + t * (b - a)
            h = np.linalg.norm(b - a) / 999
            if rng.integers(0, 2) == 0:
                c, r = rng.uniform(-3, 3, 2), float(rng.uniform(0.1, 2))
                d = np.linalg.norm(pts - c, axis=1).min() - r
                obs = Circle(tuple(c), r)
            else:
                lo = rng.uniform(-3, 2, 2)
                hi = lo + rng.uniform(0.1, 2, 2)
                inside = np.all((pts >= lo) & (pts <= hi), axis=1)
                out = np.maximum(np.maximum(lo - pts, pts - hi), 0)
                d = -1.0 if inside.any() else np.linalg.norm(out, axis=1).min()
                obs = Box(tuple(lo), tuple(hi))
            if 0 <= d <= h:
                continue  # within sampling resolution: undecidable by the oracle
            checked += 1
            assert segment_intersects((a, b), obs) == (d < 0), (a, b, obs)
        assert checked > 9000

    def test_segments_match_shapely(self):
        rng = make_rng(1)
        for _ in range(5000):
            a, b, p, q = rng.uniform(-1, 1, (4, 2))
            want = LineString([a, b]).intersects(LineString([p, q]))
            assert segment_intersects((a, b), Segment(tuple(p), tuple(q))) == want

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0, 2 * math.pi), st.floats(0.01, 3.0))
    def test_disjoint_collinear_segments(self, angle, gap):
        u = np.array([math.cos(angle), math.sin(angle)])
        p = (0.3, -1.7)
        seg = (tuple(p + 0.0 * u), tuple(p + 1.0 * u))
        wall = Segment(tuple(p + (1 + gap) * u), tuple(p + (2 + gap) * u))
        assert not segment_intersects(seg, wall)
        touching = Segment(tuple(p + 1.0 * u), tuple(p + 2.0 * u))
        assert segment_intersects(seg, touching)

    def test_inflation(self):
        seg = ((0.0, 0.0), (1.0, 0.0))
        wall = Segment((0, 0.3), (1, 0.3))
        assert not segment_intersects(seg, wall)
        assert segment_intersects(seg, wall, inflation=0.31)
        assert segment_intersects(seg, Box((0, 0.2), (1, 1)), inflation=0.21)


class TestChainCollision:
    def test_empty_never_collides(self):
        robot = ChainRobot(6)
        qs = make_rng(0).uniform(-math.pi, math.pi, size=(500, 6))
        assert not chain_collision_batch(robot, EMPTY, qs).any()

    def test_wall_across_straight_chain(self):
        n = 6
        env = Environment((Segment((n / 2, -1), (n / 2, 1)),), (-10, -10), (10, 10))
        assert chain_in_collision(ChainRobot(n), env, np.zeros(n))

    def test_folded_back(self):
        robot = ChainRobot(3)
        q = np.array([0.0, math.pi, 0.0])
        assert chain_in_collision(robot, EMPTY, q, self_collision=True)
        assert not chain_in_collision(robot, EMPTY, q, self_collision=False)

    def test_crossing_links(self):
        robot = ChainRobot(4)
        q = np.array([0.0, 2.5, 2.5, 2.5])  # curls back over the first link
        assert chain_in_collision(robot, EMPTY, q, self_collision=True)

    def test_collinear_tails_do_not_self_collide(self):
        # total turning below pi cannot self-intersect; the straight tails are
        # exactly collinear, which used to trip the orientation test on rounding
        from rrtplus import _kernels

        rng = make_rng(0)
        env = Environment((), (-40, -40), (40, 40))
        qs = np.zeros((20000, 12))
        qs[:, :4] = rng.uniform(-0.3, 0.3, (20000, 4))
        assert not chain_collision_batch(ChainRobot(12), env, qs, self_collision=True).any()
        flags = _kernels.collision_flags(
            qs, 0.0, 0.0, 1.0, *env.kernel_obstacles(), True, 0.0)
        assert not flags.any()

    def test_workspace(self):
        env = Environment((), (-2, -2), (2, 2))
        assert chain_in_collision(ChainRobot(3), env, np.zeros(3))
        assert not chain_in_collision(ChainRobot(3), env, [0.0, math.pi / 2, math.pi / 2])


def _random_env(rng):
    obs = []
    for _ in range(6):
        obs.append(Circle(tuple(rng.uniform(-6, 6, 2)), float(rng.uniform(0.2, 1.0))))
    for _ in range(6):
        a = rng.uniform(-6, 6, 2)
        obs.append(Segment(tuple(a), tuple(a + rng.uniform(-2, 2, 2))))
    for _ in range(3):
        lo = rng.uniform(-6, 5, 2)
        obs.append(Box(tuple(lo), tuple(lo + rng.uniform(0.2, 1.5, 2))))
    return Environment(tuple(obs), (-8, -8), (8, 8))


class TestCompiledKernel:
    @pytest.mark.parametrize("self_col", [False, True])
    @pytest.mark.parametrize("inflation", [0.0, 0.05])
    def test_flags_match_reference(self, self_col, inflation):
        from rrtplus import _kernels

        rng = make_rng(3)
        robot = ChainRobot(7)
        hits = 0
        for _ in range(5):
            env = _random_env(rng)
            qs = rng.uniform(-math.pi, math.pi, size=(2000, 7)) * rng.uniform(0, 1, (2000, 1))
            ref = chain_collision_batch(robot, env, qs, self_col, inflation)
            fast = _kernels.collision_flags(
                qs, 0.0, 0.0, 1.0, *env.kernel_obstacles(), self_col, inflation)
            assert np.array_equal(ref, fast)
            hits += ref.sum()
        assert 0 < hits < 5 * 2000

    @pytest.mark.parametrize("inflation", [0.0, 0.1])
    def test_segment_grid_matches_reference(self, inflation):
        # many wall segments spread over the grid, poses near the corridor
        from rrtplus import _kernels

        spec = make_scenario("horn", 30)
        env = spec.environment
        rng = make_rng(5)
        qs = spec.q_goal + rng.normal(0, 0.08, size=(4000, 30))
        ref = chain_collision_batch(spec.robot, env, qs, False, inflation)
        fast = _kernels.collision_flags(qs, 0.0, 0.0, 1.0, *env.kernel_obstacles(), False,
                                        inflation)
        assert np.array_equal(ref, fast)
        assert 0 < ref.sum() < len(qs)

    @pytest.mark.parametrize("kind", ["cluttered", "horn"])
    def test_motion_checks_agree(self, kind):
        spec = make_scenario(kind, 9, seed=1)
        fast, slow = spec.problem(), spec.problem(compiled=False)
        rng = make_rng(7)
        seen = {True: 0, False: 0}
        for _ in range(150):
            a = spec.q_init + rng.normal(0, 0.4, 9)
            b = a + rng.normal(0, 0.3, 9)
            if not (fast.is_valid(a) and spec.bounds.contains(a) and spec.bounds.contains(b)):
                continue
            got = validate_motion(fast, a, b)
            assert got == validate_motion(slow, a, b)
            seen[got] += 1
        assert seen[True] > 0 and seen[False] > 0


class TestEdgeResolution:
    def test_value(self):
        n = 17
        assert edge_resolution_for(ChainRobot(n)) == pytest.approx(0.2 / math.sqrt(n * (n + 1) * (2 * n + 1) / 6))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 20), st.integers(0, 2**31))
    def test_bounds_point_motion(self, n, seed):
        robot = ChainRobot(n, 1.3)
        res = edge_resolution_for(robot, 0.2)
        rng = make_rng(seed)
        q = rng.uniform(-math.pi, math.pi, n)
        d = rng.normal(size=n)
        d *= res / np.linalg.norm(d)
        # follow the straight joint-space motion finely; track the worst point
        path = fk_batch(robot, q + np.linspace(0, 1, 65)[:, None] * d)
        move = np.linalg.norm(path - path[0], axis=-1)
        assert move.max() <= 0.2 * 1.3 + 1e-12
