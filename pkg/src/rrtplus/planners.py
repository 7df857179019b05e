"""Tree planners and the staged subspace wrapper.

Each base planner is written as a *search* object that owns its tree(s) and
exposes ``iterate(sampler, stage, budget)``: one sampling iteration drawing
from ``sampler`` and returning the number of budget units it consumed. The
plain entry points (:func:`plan_rrt`, :func:`plan_rrt_connect`,
:func:`plan_bitrrt`) drive a search with one sampler until the global limits;
:func:`plan_staged` drives the same search through a sequence of growing
subspaces, keeping the trees between stages.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cspace import CSpaceBounds, Configuration, RngStream, distance, sample_uniform, steer
from .subspace import (
    SAMPLES,
    AffineStage,
    PrioritizedStage,
    SampleSchedule,
    affine_sample,
    expand_prioritized,
    make_affine_stage,
    make_prioritized_stage,
    prioritized_sample,
)

SOLVED = "solved"
TIMEOUT = "timeout"
EXHAUSTED = "budget-exhausted"

Sampler = Callable[[RngStream], Optional[Configuration]]


# ---------------------------------------------------------------------------
# Problem, parameters, results
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ProblemDef:
    """A query: box, endpoints and access to the free space.

    ``is_valid`` tests one configuration. ``is_valid_batch`` (optional) tests
    an ``(m, n)`` array at once. ``segment_free(a, b, m)`` (optional) must
    return whether the ``m + 1`` poses ``(1 - k/m) a + (k/m) b`` are all
    valid; it lets a problem short-circuit motion checks. ``edge_resolution``
    is the default spacing of motion checks.
    """

    bounds: CSpaceBounds
    q_init: np.ndarray
    q_goal: np.ndarray
    is_valid: Callable[[np.ndarray], bool]
    is_valid_batch: Optional[Callable[[np.ndarray], np.ndarray]] = None
    edge_resolution: Optional[float] = None
    segment_free: Optional[Callable[[np.ndarray, np.ndarray, int], bool]] = None

    def __post_init__(self):
        self.q_init = np.asarray(self.q_init, dtype=float)
        self.q_goal = np.asarray(self.q_goal, dtype=float)
        n = self.bounds.dim
        if self.q_init.shape != (n,) or self.q_goal.shape != (n,):
            raise ValueError("q_init/q_goal must match the bounds dimension")
        self.check_endpoints()

    @property
    def dim(self) -> int:
        return self.bounds.dim

    def all_valid(self, qs: np.ndarray) -> bool:
        if self.is_valid_batch is not None:
            return bool(np.all(self.is_valid_batch(qs)))
        return all(self.is_valid(q) for q in qs)

    def check_endpoints(self):
        for name, q in (("q_init", self.q_init), ("q_goal", self.q_goal)):
            if not self.bounds.contains(q):
                raise ValueError(f"{name} is out of bounds")
            if not self.is_valid(q):
                raise ValueError(f"{name} is in collision")

    def motion_oracle(self, a, b, resolution: float | None = None) -> bool:
        return validate_motion(self, a, b, resolution)


STEP_AXIS = "axis"
STEP_DIAGONAL = "diagonal"


def default_step(bounds: CSpaceBounds, rule: str = STEP_AXIS) -> float:
    if rule == STEP_AXIS:
        return 0.15 * float(np.mean(bounds.extent))
    if rule == STEP_DIAGONAL:
        return 0.2 * float(np.linalg.norm(bounds.extent))
    raise ValueError(f"unknown step rule {rule!r}")


@dataclass
class PlannerParams:
    step: float
    goal_bias: float = 0.0
    goal_threshold: Optional[float] = None
    edge_resolution: Optional[float] = None
    max_time: float = math.inf
    max_samples: Optional[int] = None

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ValueError("goal_bias must lie in [0, 1]")
        if self.goal_threshold is None:
            self.goal_threshold = self.step
        if self.edge_resolution is None:
            self.edge_resolution = self.step / 20.0
        if self.goal_threshold <= 0 or self.edge_resolution <= 0 or self.max_time <= 0:
            raise ValueError("thresholds, resolution and time limit must be positive")
        if self.max_samples is not None and self.max_samples < 1:
            raise ValueError("max_samples must be positive")

    @classmethod
    def for_problem(cls, problem: ProblemDef, planner: str = "rrt", step_rule: str = "axis",
                    **overrides) -> "PlannerParams":
        """Defaults for ``planner`` on ``problem``; goal bias 0.5 for RRT only.

        ``step_rule="axis"`` sets the step to 0.15 of the mean axis extent.
        ``"diagonal"`` uses 0.2 of the box diagonal instead (the usual
        default range of OMPL planners), which the chain benchmarks use.
        """
        base = planner.rstrip("+")
        step = default_step(problem.bounds, step_rule)
        kw = dict(
            step=step,
            goal_bias=0.5 if base == "rrt" else 0.0,
            edge_resolution=problem.edge_resolution,
        )
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


class Tree:
    """RRT graph stored as a growing array; node 0 is the root."""

    def __init__(self, root, capacity: int = 256):
        root = np.asarray(root, dtype=float)
        self.dim = root.size
        self._q = np.empty((capacity, self.dim))
        self._q[0] = root
        self._size = 1
        self.parents: list[int] = [-1]
        self.stages: list[int] = [0]

    def __len__(self) -> int:
        return self._size

    def __getitem__(self, i: int) -> np.ndarray:
        if not 0 <= i < self._size:
            raise IndexError(i)
        return self._q[i]

    @property
    def nodes(self) -> np.ndarray:
        """Read-only view of the node array, shape (len, dim)."""
        v = self._q[: self._size]
        v.flags.writeable = False
        return v

    def add(self, q, parent: int, stage: int = 0) -> int:
        if not 0 <= parent < self._size:
            raise IndexError(f"parent {parent} not in tree")
        if self._size == self._q.shape[0]:
            grown = np.empty((2 * self._q.shape[0], self.dim))
            grown[: self._size] = self._q[: self._size]
            self._q = grown
        i = self._size
        self._q[i] = q
        self._size += 1
        self.parents.append(parent)
        self.stages.append(stage)
        return i

    def nearest(self, q) -> int:
        diff = self._q[: self._size] - q
        d2 = np.einsum("ij,ij->i", diff, diff)
        return int(np.argmin(d2))

    def path_to(self, i: int) -> list[np.ndarray]:
        """Root-to-node list of configurations."""
        out = []
        while i != -1:
            out.append(self._q[i].copy())
            i = self.parents[i]
        out.reverse()
        return out


def nearest_vertex(tree: Tree, q) -> int:
    """Index of the node closest to ``q``; ties go to the lowest index."""
    if len(tree) == 0:
        raise ValueError("empty tree")
    return tree.nearest(np.asarray(q, dtype=float))


def validate_motion(problem: ProblemDef, a, b, resolution: float | None = None) -> bool:
    """Check the straight segment ``a -> b`` at spacing at most ``resolution``.

    Both endpoints are included. ``b`` is checked on its own first since new
    tree nodes are the usual failure point.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    res = resolution if resolution is not None else problem.edge_resolution
    if res is None or res <= 0:
        raise ValueError("motion validation needs a positive resolution")
    if not problem.is_valid(b):
        return False
    m = max(1, math.ceil(distance(a, b) / res))
    if problem.segment_free is not None:
        return bool(problem.segment_free(a, b, m))
    t = (np.arange(m + 1) / m)[:, None]
    pts = (1.0 - t) * a + t * b
    return problem.all_valid(pts)


def path_violations(problem: ProblemDef, path, resolution: float) -> int:
    """Number of path edges that fail motion validation at ``resolution``."""
    return sum(
        not validate_motion(problem, path[i], path[i + 1], resolution) for i in range(len(path) - 1)
    )


@dataclass(eq=False)
class PlanResult:
    status: str
    path: list = field(default_factory=list)
    samples_used: int = 0
    samples_per_stage: list = field(default_factory=list)
    tree_sizes: list = field(default_factory=list)
    wall_time: float = 0.0
    stage_solved_in: Optional[int] = None
    stage_dims: list = field(default_factory=list)
    trees: list = field(default_factory=list, repr=False)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "status": self.status,
            "path": [[float(x) for x in q] for q in self.path],
            "samples_used": int(self.samples_used),
            "samples_per_stage": [int(k) for k in self.samples_per_stage],
            "tree_sizes": [int(k) for k in self.tree_sizes],
            "stage_solved_in": self.stage_solved_in,
            "stage_dims": [int(k) for k in self.stage_dims],
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PlanResult":
        return cls(
            status=d["status"],
            path=[np.asarray(q, dtype=float) for q in d.get("path", [])],
            samples_used=d.get("samples_used", 0),
            samples_per_stage=list(d.get("samples_per_stage", [])),
            tree_sizes=list(d.get("tree_sizes", [])),
            wall_time=d.get("wall_time", 0.0),
            stage_solved_in=d.get("stage_solved_in"),
            stage_dims=list(d.get("stage_dims", [])),
        )


# ---------------------------------------------------------------------------
# Transition test (T-RRT)
# ---------------------------------------------------------------------------


class TransitionTest:
    """Metropolis filter on cost changes with an adaptive temperature.

    Downhill or flat moves always pass without touching the RNG. An uphill
    move of size ``delta`` passes with probability ``exp(-delta / (k T))``.
    A pass cools ``T`` by ``2 ** (delta / (0.1 * cost_range))``; every
    ``fail_limit`` consecutive failures double ``T``.
    """

    def __init__(self, temperature: float, k: float = 1.0, cost_range: float = 1.0,
                 fail_limit: int = 1):
        if temperature <= 0 or k <= 0 or cost_range <= 0 or fail_limit < 1:
            raise ValueError("temperature, k, cost_range and fail_limit must be positive")
        self.temperature = float(temperature)
        self.k = float(k)
        self.cost_range = float(cost_range)
        self.fail_limit = int(fail_limit)
        self._fails = 0
        self.uphill_accepted = 0
        self.uphill_rejected = 0

    def observe_cost(self, lo: float, hi: float):
        self.cost_range = max(self.cost_range, hi - lo)

    def __call__(self, delta: float, rng: RngStream) -> bool:
        if delta <= 0.0:
            return True
        p = math.exp(-delta / (self.k * self.temperature))
        if rng.random() < p:
            self.temperature /= 2.0 ** (delta / (0.1 * self.cost_range))
            self._fails = 0
            self.uphill_accepted += 1
            return True
        self._fails += 1
        if self._fails >= self.fail_limit:
            self.temperature *= 2.0
            self._fails = 0
        self.uphill_rejected += 1
        return False


# ---------------------------------------------------------------------------
# Searches
# ---------------------------------------------------------------------------


class _Search:
    """Shared bookkeeping for the tree searches."""

    def __init__(self, problem: ProblemDef, params: PlannerParams, rng: RngStream):
        self.problem = problem
        self.params = params
        self.rng = rng
        self.path: Optional[list] = None

    def _motion_ok(self, a, b) -> bool:
        return validate_motion(self.problem, a, b, self.params.edge_resolution)

    def try_trivial(self) -> bool:
        """Solve immediately when the root already sits within the goal threshold."""
        p = self.problem
        if distance(p.q_init, p.q_goal) <= self.params.goal_threshold and self._motion_ok(
            p.q_init, p.q_goal
        ):
            self.path = [p.q_init.copy(), p.q_goal.copy()]
            return True
        return False

    @property
    def solved(self) -> bool:
        return self.path is not None


class RRTSearch(_Search):
    """Goal-biased single-tree RRT."""

    def __init__(self, problem, params, rng):
        super().__init__(problem, params, rng)
        self.tree = Tree(problem.q_init)

    @property
    def trees(self):
        return [self.tree]

    def iterate(self, sampler: Sampler, stage: int = 1, budget: float = math.inf) -> int:
        p, prm, rng = self.problem, self.params, self.rng
        if prm.goal_bias > 0.0 and rng.random() < prm.goal_bias:
            q_rand = p.q_goal
        else:
            q_rand = sampler(rng)
            if q_rand is None:
                return 1
        i = self.tree.nearest(q_rand)
        q_near = self.tree[i]
        q_new = steer(q_near, q_rand, prm.step)
        if np.array_equal(q_new, q_near) or not self._motion_ok(q_near, q_new):
            return 1
        j = self.tree.add(q_new, i, stage)
        if distance(q_new, p.q_goal) <= prm.goal_threshold:
            if np.array_equal(q_new, p.q_goal):
                self.path = self.tree.path_to(j)
            elif self._motion_ok(q_new, p.q_goal):
                self.path = self.tree.path_to(j) + [p.q_goal.copy()]
        return 1


_ADVANCED, _REACHED, _TRAPPED = 0, 1, 2


class BidirectionalSearch(_Search):
    """RRT-Connect; with a :class:`TransitionTest` it becomes bidirectional T-RRT.

    Trees grow alternately. One iteration extends the active tree by a single
    step toward the sample and, if that produced a node, repeatedly extends
    the other tree toward it until trapped, joined or out of budget. Every
    extension attempt costs one budget unit.
    """

    def __init__(self, problem, params, rng, cost: Callable | None = None,
                 transition: TransitionTest | None = None):
        super().__init__(problem, params, rng)
        self.start_tree = Tree(problem.q_init)
        self.goal_tree = Tree(problem.q_goal)
        self._active = 0
        self.cost = cost
        self.transition = transition
        if cost is not None:
            self._costs = [[float(cost(problem.q_init))], [float(cost(problem.q_goal))]]
            self._c_lo = min(self._costs[0][0], self._costs[1][0])
            self._c_hi = max(self._costs[0][0], self._costs[1][0])
            if transition is not None:
                transition.observe_cost(self._c_lo, self._c_hi)

    @property
    def trees(self):
        return [self.start_tree, self.goal_tree]

    def _extend(self, which: int, q_target, stage: int):
        tree = self.trees[which]
        i = tree.nearest(q_target)
        q_near = tree[i]
        q_new = steer(q_near, q_target, self.params.step)
        if np.array_equal(q_new, q_near):
            return (_REACHED if np.array_equal(q_near, q_target) else _TRAPPED), i
        c_new = None
        if self.transition is not None:
            c_new = float(self.cost(q_new))
            if not self.transition(c_new - self._costs[which][i], self.rng):
                return _TRAPPED, -1
        if not self._motion_ok(q_near, q_new):
            return _TRAPPED, -1
        j = tree.add(q_new, i, stage)
        if self.cost is not None:
            c = c_new if c_new is not None else float(self.cost(q_new))
            self._costs[which].append(c)
            self._c_lo = min(self._c_lo, c)
            self._c_hi = max(self._c_hi, c)
            if self.transition is not None:
                self.transition.observe_cost(self._c_lo, self._c_hi)
        return (_REACHED if np.array_equal(q_new, q_target) else _ADVANCED), j

    def _join(self, which_a: int, ia: int, ib: int):
        """Build the path when node ``ia`` of tree ``which_a`` met node ``ib`` of the other."""
        if which_a == 0:
            s_idx, g_idx = ia, ib
        else:
            s_idx, g_idx = ib, ia
        head = self.start_tree.path_to(s_idx)
        tail = self.goal_tree.path_to(g_idx)[::-1]
        self.path = head + tail[1:]

    def iterate(self, sampler: Sampler, stage: int = 1, budget: float = math.inf) -> int:
        a = self._active
        b = 1 - a
        self._active = b
        q_rand = sampler(self.rng)
        if q_rand is None:
            return 1
        used = 1
        status, ia = self._extend(a, q_rand, stage)
        if status == _TRAPPED:
            return used
        q_target = self.trees[a][ia].copy()
        while used < budget:
            used += 1
            status, ib = self._extend(b, q_target, stage)
            if status == _REACHED:
                self._join(a, ia, ib)
                break
            if status == _TRAPPED:
                break
        return used


def _make_search(base: str, problem, params, rng, cost=None, transition=None):
    if base == "rrt":
        return RRTSearch(problem, params, rng)
    if base == "rrt-connect":
        return BidirectionalSearch(problem, params, rng)
    if base == "bitrrt":
        cost = cost if cost is not None else zero_cost
        if transition is None:
            transition = default_transition(problem, cost)
        return BidirectionalSearch(problem, params, rng, cost=cost, transition=transition)
    raise ValueError(f"unknown base planner {base!r}")


def zero_cost(q) -> float:
    return 0.0


def default_transition(problem: ProblemDef, cost) -> TransitionTest:
    """Initial temperature 1e-4 of the endpoint cost spread (1 when flat)."""
    spread = abs(float(cost(problem.q_init)) - float(cost(problem.q_goal)))
    cost_range = spread if spread > 0 else 1.0
    return TransitionTest(temperature=1e-4 * cost_range, cost_range=cost_range)


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------


class _Clock:
    def __init__(self, params: PlannerParams):
        self.t0 = time.perf_counter()
        self.max_time = params.max_time
        self.max_samples = params.max_samples if params.max_samples is not None else math.inf
        self.used = 0

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0

    def limit_hit(self) -> Optional[str]:
        if self.used >= self.max_samples:
            return EXHAUSTED
        if self.elapsed() >= self.max_time:
            return TIMEOUT
        return None

    def remaining_samples(self) -> float:
        return self.max_samples - self.used


def _finish(search, status, clock, per_stage, dims, stage_solved_in=None) -> PlanResult:
    trees = search.trees
    return PlanResult(
        status=status,
        path=search.path if status == SOLVED else [],
        samples_used=clock.used,
        samples_per_stage=per_stage,
        tree_sizes=[len(t) for t in trees],
        wall_time=clock.elapsed(),
        stage_solved_in=stage_solved_in,
        stage_dims=dims,
        trees=trees,
    )


def _run_single(search, problem, params, sampler) -> PlanResult:
    clock = _Clock(params)
    if search.try_trivial():
        return _finish(search, SOLVED, clock, [0], [problem.dim], 1)
    while True:
        hit = clock.limit_hit()
        if hit:
            return _finish(search, hit, clock, [clock.used], [problem.dim])
        clock.used += search.iterate(sampler, 1, clock.remaining_samples())
        if search.solved:
            return _finish(search, SOLVED, clock, [clock.used], [problem.dim], 1)


def _uniform_sampler(bounds: CSpaceBounds) -> Sampler:
    return lambda rng: sample_uniform(bounds, rng)


def plan_rrt(problem: ProblemDef, params: PlannerParams, rng: RngStream,
             sampler: Sampler | None = None) -> PlanResult:
    """Goal-biased RRT; uniform sampling unless ``sampler`` is given."""
    sampler = sampler or _uniform_sampler(problem.bounds)
    return _run_single(RRTSearch(problem, params, rng), problem, params, sampler)


def plan_rrt_connect(problem: ProblemDef, params: PlannerParams, rng: RngStream,
                     sampler: Sampler | None = None) -> PlanResult:
    sampler = sampler or _uniform_sampler(problem.bounds)
    return _run_single(BidirectionalSearch(problem, params, rng), problem, params, sampler)


def plan_bitrrt(problem: ProblemDef, params: PlannerParams, rng: RngStream,
                cost: Callable | None = None, transition: TransitionTest | None = None,
                sampler: Sampler | None = None) -> PlanResult:
    """Bidirectional T-RRT. ``cost`` defaults to the constant 0."""
    sampler = sampler or _uniform_sampler(problem.bounds)
    search = _make_search("bitrrt", problem, params, rng, cost, transition)
    return _run_single(search, problem, params, sampler)


class StageSequence:
    """Yields the samplers of successive stages, one dimension larger each time."""

    def __init__(self, problem: ProblemDef, source: str, rng: RngStream, release_order=None,
                 max_rejects: int = 100):
        self.problem = problem
        self.source = source
        self.rng = rng
        self.max_rejects = max_rejects
        self.index = 0
        self.prioritized: Optional[PrioritizedStage] = None
        self.affine: Optional[AffineStage] = None
        if source == "prioritized":
            self.prioritized = make_prioritized_stage(
                problem.q_init, problem.q_goal, problem.bounds, release_order, rng)
        elif source not in ("affine", "full"):
            raise ValueError(f"unknown stage source {source!r}")

    @property
    def dim(self) -> int:
        if self.source == "prioritized":
            return self.prioritized.dim
        if self.source == "affine":
            return self.affine.dim
        return self.problem.dim

    def advance(self):
        """Move to the next stage (the first call enters stage 1)."""
        self.index += 1
        if self.source == "prioritized" and self.index > 1:
            self.prioritized = expand_prioritized(self.prioritized)
        elif self.source == "affine":
            p = self.problem
            self.affine = make_affine_stage(p.q_init, p.q_goal, self.index, self.rng)

    def sampler(self) -> Sampler:
        p = self.problem
        if self.source == "prioritized":
            stage = self.prioritized
            return lambda rng: prioritized_sample(p.q_init, p.q_goal, stage, p.bounds, rng)
        if self.source == "affine":
            stage = self.affine
            return lambda rng: affine_sample(stage, p.bounds, rng, self.max_rejects)
        return _uniform_sampler(p.bounds)


def plan_staged(problem: ProblemDef, base: str, schedule: SampleSchedule, params: PlannerParams,
                rng: RngStream, stage_source: str = "prioritized", release_order=None,
                cost: Callable | None = None, transition: TransitionTest | None = None,
                max_rejects: int = 100) -> PlanResult:
    """Run ``base`` through the stages of ``schedule`` on one persistent search.

    Stage ``s`` draws from an ``s``-dimensional subspace through ``q_init`` and
    ``q_goal``. The random release order (prioritized source) is drawn first,
    before any other use of ``rng``.
    """
    if stage_source in ("prioritized", "affine") and schedule.num_stages != problem.dim:
        raise ValueError("subspace schedules need exactly one stage per DoF")
    stages = StageSequence(problem, stage_source, rng, release_order, max_rejects)
    search = _make_search(base, problem, params, rng, cost, transition)
    clock = _Clock(params)
    per_stage: list[int] = []
    dims: list[int] = []
    if search.try_trivial():
        return _finish(search, SOLVED, clock, [0], [1 if stage_source != "full" else problem.dim], 1)
    last = schedule.num_stages - 1
    for s in range(schedule.num_stages):
        stages.advance()
        sampler = stages.sampler()
        dims.append(stages.dim)
        open_stage = schedule.open_final and s == last
        timed = schedule.mode != SAMPLES
        quota = schedule.time_quotas[s] if timed else schedule.budgets[s]
        used = 0
        t_stage = clock.elapsed()
        per_stage.append(0)
        while True:
            if not open_stage:
                if timed:
                    if clock.elapsed() - t_stage >= quota:
                        break
                elif used >= quota:
                    break
            hit = clock.limit_hit()
            if hit:
                return _finish(search, hit, clock, per_stage, dims)
            room = clock.remaining_samples()
            if not open_stage and not timed:
                room = min(room, quota - used)
            k = search.iterate(sampler, s + 1, room)
            used += k
            clock.used += k
            per_stage[-1] = used
            if search.solved:
                return _finish(search, SOLVED, clock, per_stage, dims, s + 1)
    return _finish(search, EXHAUSTED, clock, per_stage, dims)


# ---------------------------------------------------------------------------
# Named planners
# ---------------------------------------------------------------------------

PLANNER_NAMES = ("rrt", "rrt+", "rrt-connect", "rrt-connect+", "bitrrt", "bitrrt+")


@dataclass
class StagedOptions:
    """Settings that only the ``+`` planners use.

    The default ``q_total`` gives a growth factor near 3.9 per stage on a
    17-link chain, so the low-dimensional stages get enough samples to
    matter before the open final stage takes over.
    """

    q_total: int = 10**10
    stage_time: Optional[float] = None
    stage_source: str = "prioritized"
    release_order: Optional[tuple] = None
    open_final: bool = True

    def schedule(self, n: int) -> SampleSchedule:
        from .subspace import find_sample_size

        sched = find_sample_size(self.q_total, n)
        if self.stage_time is not None:
            sched = sched.with_time_budget(self.stage_time)
        if self.open_final:
            sched = sched.open_ended()
        return sched


def run_planner(name: str, problem: ProblemDef, params: PlannerParams, rng: RngStream,
                staged: StagedOptions | None = None, cost: Callable | None = None) -> PlanResult:
    """Dispatch on one of :data:`PLANNER_NAMES`."""
    if name not in PLANNER_NAMES:
        raise ValueError(f"unknown planner {name!r}; choose from {', '.join(PLANNER_NAMES)}")
    base = name.rstrip("+")
    if name.endswith("+"):
        staged = staged or StagedOptions()
        return plan_staged(problem, base, staged.schedule(problem.dim), params, rng,
                           stage_source=staged.stage_source, release_order=staged.release_order,
                           cost=cost)
    if base == "rrt":
        return plan_rrt(problem, params, rng)
    if base == "rrt-connect":
        return plan_rrt_connect(problem, params, rng)
    return plan_bitrrt(problem, params, rng, cost=cost)
