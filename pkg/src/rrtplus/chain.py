"""Planar revolute chains, obstacle environments and collision checking.

Links are zero-thickness line segments (optionally inflated by ``inflation``)
and obstacles are circles, line segments or axis-aligned boxes. The batch
checker :func:`chain_collision_batch` evaluates many configurations at once
and backs the validity oracle of every chain planning problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import geometry as geo
from .cspace import CSpaceBounds


@dataclass(frozen=True)
class ChainRobot:
    num_links: int
    link_length: float = 1.0
    base: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.num_links < 1:
            raise ValueError("a chain needs at least one link")
        if not self.link_length > 0:
            raise ValueError("link_length must be positive")
        object.__setattr__(self, "base", (float(self.base[0]), float(self.base[1])))

    @property
    def reach(self) -> float:
        return self.num_links * self.link_length


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError("circle radius must be positive and finite")


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", (float(self.a[0]), float(self.a[1])))
        object.__setattr__(self, "b", (float(self.b[0]), float(self.b[1])))


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        object.__setattr__(self, "lo", (float(self.lo[0]), float(self.lo[1])))
        object.__setattr__(self, "hi", (float(self.hi[0]), float(self.hi[1])))
        if not (self.lo[0] < self.hi[0] and self.lo[1] < self.hi[1]):
            raise ValueError("box needs lo < hi on both axes")


Obstacle = Union[Circle, Segment, Box]
KINDS = ("empty", "easy-random", "cluttered-random", "horn")


@dataclass(frozen=True, eq=False)
class Environment:
    obstacles: tuple
    workspace_lo: tuple
    workspace_hi: tuple
    kind: str = "empty"

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "workspace_lo", tuple(float(x) for x in self.workspace_lo))
        object.__setattr__(self, "workspace_hi", tuple(float(x) for x in self.workspace_hi))
        for o in self.obstacles:
            vals = [*getattr(o, "center", ()), *getattr(o, "a", ()), *getattr(o, "b", ()),
                    *getattr(o, "lo", ()), *getattr(o, "hi", ())]
            if not all(math.isfinite(v) for v in vals):
                raise ValueError(f"non-finite obstacle {o}")
        circles = [o for o in self.obstacles if isinstance(o, Circle)]
        segs = [o for o in self.obstacles if isinstance(o, Segment)]
        boxes = [o for o in self.obstacles if isinstance(o, Box)]
        arr = object.__setattr__
        arr(self, "_circ_c", np.array([c.center for c in circles]).reshape(-1, 2))
        arr(self, "_circ_r", np.array([c.radius for c in circles], dtype=float))
        arr(self, "_seg_a", np.array([s.a for s in segs]).reshape(-1, 2))
        arr(self, "_seg_b", np.array([s.b for s in segs]).reshape(-1, 2))
        arr(self, "_box_lo", np.array([b.lo for b in boxes]).reshape(-1, 2))
        arr(self, "_box_hi", np.array([b.hi for b in boxes]).reshape(-1, 2))
        arr(self, "_seg_min", np.minimum(self._seg_a, self._seg_b))
        arr(self, "_seg_max", np.maximum(self._seg_a, self._seg_b))
        # flat float64 layouts for the compiled kernels
        arr(self, "_k_seg", np.ascontiguousarray(np.hstack([self._seg_a, self._seg_b])))
        arr(self, "_k_seg_box", np.ascontiguousarray(np.hstack([self._seg_min, self._seg_max])))
        arr(self, "_k_box", np.ascontiguousarray(np.hstack([self._box_lo, self._box_hi])))
        arr(self, "_k_ws", np.array([*self.workspace_lo, *self.workspace_hi], dtype=float))
        self._build_segment_grid()

    GRID_CELLS = 64

    def _build_segment_grid(self):
        """Bucket segment indices by the uniform grid cells their bounding boxes touch."""
        g = self.GRID_CELLS
        lo = np.asarray(self.workspace_lo)
        cell = (np.asarray(self.workspace_hi) - lo) / g
        i0 = np.clip(np.floor((self._seg_min - lo) / cell).astype(np.int64), 0, g - 1)
        i1 = np.clip(np.floor((self._seg_max - lo) / cell).astype(np.int64), 0, g - 1)
        buckets = [[] for _ in range(g * g)]
        for s in range(len(i0)):
            for cx in range(i0[s, 0], i1[s, 0] + 1):
                for cy in range(i0[s, 1], i1[s, 1] + 1):
                    buckets[cx * g + cy].append(s)
        start = np.zeros(g * g + 1, dtype=np.int64)
        start[1:] = np.cumsum([len(b) for b in buckets])
        idx = np.array([s for b in buckets for s in b], dtype=np.int64)
        arr = object.__setattr__
        arr(self, "_k_grid_start", start)
        arr(self, "_k_grid_idx", idx)
        arr(self, "_k_grid", np.array([lo[0], lo[1], 1.0 / cell[0], 1.0 / cell[1], g], dtype=float))

    def kernel_obstacles(self) -> tuple:
        """Obstacle arrays in the order the compiled kernels take them."""
        return (self._circ_c, self._circ_r, self._k_seg, self._k_seg_box, self._k_grid_start,
                self._k_grid_idx, self._k_grid, self._k_box, self._k_ws)

    def __eq__(self, other):
        if not isinstance(other, Environment):
            return NotImplemented
        return (self.obstacles, self.workspace_lo, self.workspace_hi, self.kind) == (
            other.obstacles, other.workspace_lo, other.workspace_hi, other.kind)


def forward_kinematics(robot: ChainRobot, q) -> np.ndarray:
    """Joint positions, shape ``(n + 1, 2)``; row 0 is the base.

    Link ``i`` points along the cumulative angle ``q_1 + ... + q_i``.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (robot.num_links,):
        raise ValueError(f"expected {robot.num_links} joint values, got shape {q.shape}")
    return fk_batch(robot, q[None, :])[0]


def fk_batch(robot: ChainRobot, qs: np.ndarray) -> np.ndarray:
    """Forward kinematics for an ``(m, n)`` batch; returns ``(m, n + 1, 2)``."""
    theta = np.cumsum(qs, axis=1)
    steps = robot.link_length * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    pts = np.empty((qs.shape[0], qs.shape[1] + 1, 2))
    pts[:, 0] = robot.base
    np.cumsum(steps, axis=1, out=pts[:, 1:])
    pts[:, 1:] += robot.base
    return pts


def segment_intersects(seg, obs: Obstacle, inflation: float = 0.0) -> bool:
    """Exact test of one segment ``((x0, y0), (x1, y1))`` against one obstacle."""
    a = np.asarray(seg[0], dtype=float)
    b = np.asarray(seg[1], dtype=float)
    if isinstance(obs, Circle):
        return bool(geo.point_segment_distance(np.asarray(obs.center), a, b) <= obs.radius + inflation)
    if isinstance(obs, Segment):
        oa, ob = np.asarray(obs.a), np.asarray(obs.b)
        if inflation > 0:
            return bool(geo.segment_segment_distance(a, b, oa, ob) <= inflation)
        return bool(geo.segments_intersect(a, b, oa, ob))
    if isinstance(obs, Box):
        lo = np.asarray(obs.lo) - inflation
        hi = np.asarray(obs.hi) + inflation
        return bool(geo.segment_hits_box(a, b, lo, hi))
    raise TypeError(f"unknown obstacle {obs!r}")


_FOLD_TOL = 1e-9


def _pairs(n: int):
    i, j = np.triu_indices(n, k=2)
    return i, j


def chain_collision_batch(robot: ChainRobot, env: Environment, qs, self_collision: bool = False,
                          inflation: float = 0.0) -> np.ndarray:
    """Boolean ``(m,)`` array: which configurations collide or leave the workspace."""
    qs = np.atleast_2d(np.asarray(qs, dtype=float))
    m, n = qs.shape
    pts = fk_batch(robot, qs)
    lo = np.asarray(env.workspace_lo) + inflation
    hi = np.asarray(env.workspace_hi) - inflation
    hit = np.any((pts < lo) | (pts > hi), axis=(1, 2))
    a = pts[:, :-1]
    b = pts[:, 1:]

    if env._circ_r.size:
        d = geo.point_segment_distance(env._circ_c[None, None], a[:, :, None], b[:, :, None])
        hit |= np.any(d <= env._circ_r + inflation, axis=(1, 2))

    if env._seg_a.size:
        lmin = np.minimum(a, b) - inflation
        lmax = np.maximum(a, b) + inflation
        near = (
            (lmin[:, :, None, 0] <= env._seg_max[:, 0])
            & (lmax[:, :, None, 0] >= env._seg_min[:, 0])
            & (lmin[:, :, None, 1] <= env._seg_max[:, 1])
            & (lmax[:, :, None, 1] >= env._seg_min[:, 1])
        )
        ci, li, oi = np.nonzero(near)
        if ci.size:
            if inflation > 0:
                touch = geo.segment_segment_distance(
                    a[ci, li], b[ci, li], env._seg_a[oi], env._seg_b[oi]) <= inflation
            else:
                touch = geo.segments_intersect(a[ci, li], b[ci, li], env._seg_a[oi], env._seg_b[oi])
            hit[ci[touch]] = True

    if env._box_lo.size:
        inside = geo.segment_hits_box(a[:, :, None], b[:, :, None],
                                      env._box_lo - inflation, env._box_hi + inflation)
        hit |= np.any(inside, axis=(1, 2))

    if self_collision and n >= 2:
        # adjacent links only overlap when folded straight back
        hit |= np.any(np.abs(qs[:, 1:]) >= math.pi - _FOLD_TOL, axis=1)
        if n >= 3:
            i, j = _pairs(n)
            if inflation > 0:
                touch = geo.segment_segment_distance(a[:, i], b[:, i], a[:, j], b[:, j]) <= 2 * inflation
            else:
                touch = geo.segments_intersect(a[:, i], b[:, i], a[:, j], b[:, j])
            hit |= np.any(touch, axis=1)
    return hit


def chain_in_collision(robot: ChainRobot, env: Environment, q, self_collision: bool = False,
                       inflation: float = 0.0) -> bool:
    return bool(chain_collision_batch(robot, env, np.asarray(q, dtype=float)[None, :],
                                      self_collision, inflation)[0])


def edge_resolution_for(robot: ChainRobot, tolerance: float = 0.2) -> float:
    """C-space spacing that bounds any link point's motion between checks.

    Moving by ``delta`` in joint space displaces a point on the chain by at
    most ``L * sqrt(sum_k k^2) * delta`` (k counting links outboard of each
    joint), so this spacing keeps displacements below ``tolerance * L``.
    """
    n = robot.num_links
    lipschitz = math.sqrt(n * (n + 1) * (2 * n + 1) / 6.0)
    return tolerance / lipschitz


@dataclass(eq=False)
class ScenarioSpec:
    """A complete planning instance for one chain in one environment."""

    environment: Environment
    robot: ChainRobot
    q_init: np.ndarray
    q_goal: np.ndarray
    bounds: CSpaceBounds
    self_collision: bool = False
    inflation: float = 0.0
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.q_init = np.asarray(self.q_init, dtype=float)
        self.q_goal = np.asarray(self.q_goal, dtype=float)
        n = self.robot.num_links
        if self.q_init.shape != (n,) or self.q_goal.shape != (n,) or self.bounds.dim != n:
            raise ValueError("endpoint and bounds dimensions must equal the number of links")
        for name, q in (("q_init", self.q_init), ("q_goal", self.q_goal)):
            if not self.bounds.contains(q):
                raise ValueError(f"{name} violates the joint bounds")
            if self.in_collision(q):
                raise ValueError(f"{name} is in collision")

    @property
    def kind(self) -> str:
        return self.environment.kind

    @property
    def n(self) -> int:
        return self.robot.num_links

    def in_collision(self, q) -> bool:
        return chain_in_collision(self.robot, self.environment, q, self.self_collision, self.inflation)

    def collision_batch(self, qs) -> np.ndarray:
        return chain_collision_batch(self.robot, self.environment, qs, self.self_collision,
                                     self.inflation)

    def _kernel_args(self):
        env, r = self.environment, self.robot
        return (r.base[0], r.base[1], r.link_length, *env.kernel_obstacles(),
                self.self_collision, self.inflation)

    def problem(self, tolerance: float = 0.2, compiled: bool = True):
        """The planning query over this scenario's validity oracle.

        ``compiled`` selects the numba kernels; otherwise the numpy batch
        checker is used. Both accept and reject exactly the same poses.
        """
        from .planners import ProblemDef

        res = edge_resolution_for(self.robot, tolerance)
        if compiled:
            from . import _kernels

            args = self._kernel_args()

            def flags(qs):
                qs = np.ascontiguousarray(np.atleast_2d(qs), dtype=float)
                return _kernels.collision_flags(qs, *args)

            return ProblemDef(
                bounds=self.bounds,
                q_init=self.q_init,
                q_goal=self.q_goal,
                is_valid=lambda q: not flags(q)[0],
                is_valid_batch=lambda qs: ~flags(qs),
                edge_resolution=res,
                segment_free=lambda a, b, m: _kernels.segment_free(
                    np.ascontiguousarray(a, dtype=float), np.ascontiguousarray(b, dtype=float),
                    m, *args),
            )
        return ProblemDef(
            bounds=self.bounds,
            q_init=self.q_init,
            q_goal=self.q_goal,
            is_valid=lambda q: not self.in_collision(q),
            is_valid_batch=lambda qs: ~self.collision_batch(qs),
            edge_resolution=res,
        )

    def __eq__(self, other):
        if not isinstance(other, ScenarioSpec):
            return NotImplemented
        from .scenario import scenario_to_dict

        return scenario_to_dict(self) == scenario_to_dict(other)
