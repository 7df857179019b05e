"""Subspace selection, subspace sampling and per-stage sample budgets.

Two families of search subspaces are provided, both of which always contain
``q_init`` and ``q_goal``:

* prioritized release: a set of constrained DoFs follows the init-goal line
  through a shared scalar ``r`` while every released DoF is drawn over its
  full range;
* affine flats: ``q = A r + q_init`` where the first column of ``A`` is
  ``q_goal - q_init`` and the remaining columns are random directions.

The budget schedule grows geometrically so that most samples go to the
higher-dimensional stages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .cspace import CSpaceBounds, Configuration, RngStream, clip_line_to_box, sample_uniform

SAMPLES = "samples"
TIME = "time"


# ---------------------------------------------------------------------------
# Budget schedule
# ---------------------------------------------------------------------------


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SampleSchedule:
    """Per-stage budgets ``k_1..k_n`` with geometric growth ``v``.

    In ``"samples"`` mode the budgets are counts of planner iterations. In
    ``"time"`` mode ``time_quotas`` holds seconds per stage, split in the same
    geometric proportions as the counts. With ``open_final`` set the last
    stage ignores its own budget and runs until the planner's global limits.
    """

    budgets: tuple[int, ...]
    growth: float
    total: int
    mode: str = SAMPLES
    time_quotas: tuple[float, ...] | None = None
    open_final: bool = False

    def __post_init__(self):
        if not self.budgets or any(k < 1 for k in self.budgets):
            raise ValueError("budgets must be a non-empty list of positive integers")
        if self.mode not in (SAMPLES, TIME):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.mode == TIME:
            if self.time_quotas is None or len(self.time_quotas) != len(self.budgets):
                raise ValueError("time mode needs one quota per stage")

    @property
    def num_stages(self) -> int:
        return len(self.budgets)

    def with_time_budget(self, total_seconds: float) -> "SampleSchedule":
        """Same proportions, expressed as wall-time quotas summing to ``total_seconds``."""
        if total_seconds <= 0:
            raise ValueError("total_seconds must be positive")
        s = sum(self.budgets)
        quotas = tuple(total_seconds * k / s for k in self.budgets)
        return replace(self, mode=TIME, time_quotas=quotas)

    def open_ended(self) -> "SampleSchedule":
        return replace(self, open_final=True)


def find_sample_size(q_total: int, n: int) -> SampleSchedule:
    """Geometric budgets ``k_s = round(v**s)`` with ``v = q_total ** (1/n)``."""
    if q_total < 1 or n < 1:
        raise ValueError("q_total and n must both be >= 1")
    v = math.exp(math.log(q_total) / n)
    budgets = tuple(max(1, _round_half_up(v**s)) for s in range(1, n + 1))
    return SampleSchedule(budgets=budgets, growth=v, total=int(q_total))


def single_stage_schedule(q_total: int) -> SampleSchedule:
    return SampleSchedule(budgets=(int(q_total),), growth=float(q_total), total=int(q_total))


def worst_case_overhead(schedule: SampleSchedule) -> float:
    """Total staged samples relative to a plain planner given ``total`` samples."""
    return sum(schedule.budgets) / schedule.total


def overhead_bound(schedule: SampleSchedule) -> float:
    """``v / (v - 1)``; infinite when ``v == 1``."""
    v = schedule.growth
    return math.inf if v <= 1.0 else v / (v - 1.0)


# ---------------------------------------------------------------------------
# Prioritized release
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrioritizedStage:
    """DoFs in ``constrained`` ride the init-goal line; the rest are free.

    Indices are 0-based. ``release_order`` is a permutation of ``range(n)``
    and ``constrained`` is always the not-yet-released tail of it.
    """

    constrained: frozenset
    release_order: tuple[int, ...]
    r_range: tuple[float, float]

    def __post_init__(self):
        n = len(self.release_order)
        if sorted(self.release_order) != list(range(n)):
            raise ValueError("release_order must be a permutation of range(n)")
        k = n - len(self.constrained)
        if set(self.release_order[k:]) != set(self.constrained):
            raise ValueError("constrained must be the unreleased suffix of release_order")
        object.__setattr__(self, "constrained", frozenset(self.constrained))

    @property
    def n(self) -> int:
        return len(self.release_order)

    @property
    def dim(self) -> int:
        if not self.constrained:
            return self.n
        return 1 + self.n - len(self.constrained)

    @cached_property
    def free_mask(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[list(self.constrained)] = False
        return mask


def make_prioritized_stage(q_init, q_goal, bounds: CSpaceBounds, release_order=None,
                           rng: RngStream | None = None) -> PrioritizedStage:
    """First stage: every DoF constrained to the line.

    Without an explicit ``release_order`` a uniformly random permutation is
    drawn from ``rng``.
    """
    n = bounds.dim
    if release_order is None:
        if rng is None:
            raise ValueError("need rng to draw a random release order")
        release_order = rng.permutation(n)
    order = tuple(int(i) for i in release_order)
    r_range = clip_line_to_box(q_init, q_goal, bounds)
    return PrioritizedStage(frozenset(order), order, r_range)


def release_next(stage: PrioritizedStage) -> PrioritizedStage:
    if not stage.constrained:
        raise ValueError("no constrained DoF left to release")
    nxt = next(i for i in stage.release_order if i in stage.constrained)
    return replace(stage, constrained=stage.constrained - {nxt})


def expand_prioritized(stage: PrioritizedStage) -> PrioritizedStage:
    """Grow the stage by exactly one dimension.

    With a single constrained DoF left the stage already has dimension ``n``
    but is not all of C (that DoF is limited to the line's projection), so
    the last expansion releases the final two DoFs together and the last
    stage is the whole box.
    """
    stage = release_next(stage)
    if len(stage.constrained) == 1:
        stage = release_next(stage)
    return stage


def prioritized_sample(q_init, q_goal, stage: PrioritizedStage, bounds: CSpaceBounds,
                       rng: RngStream) -> Configuration:
    """Draw a point on the stage.

    A shared ``r`` places all coordinates on the init-goal line, then each
    free DoF is overwritten with an independent uniform draw. When nothing is
    constrained the line draw is skipped (it would be fully overwritten), so
    the sampler consumes exactly the same random stream as
    :func:`sample_uniform`.
    """
    q_init = np.asarray(q_init, dtype=float)
    q_goal = np.asarray(q_goal, dtype=float)
    if q_init.shape != (stage.n,) or q_goal.shape != (stage.n,) or bounds.dim != stage.n:
        raise ValueError("dimension mismatch between stage, endpoints and bounds")
    if not stage.constrained:
        return sample_uniform(bounds, rng)
    r = rng.uniform(*stage.r_range)
    q = (q_goal - q_init) * r + q_init
    free = stage.free_mask
    if free.any():
        q[free] = rng.uniform(bounds.lo[free], bounds.hi[free])
    # r at the chord ends can overshoot a face by one ulp
    return np.clip(q, bounds.lo, bounds.hi)


# ---------------------------------------------------------------------------
# Affine flats
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AffineStage:
    """The flat ``{origin + basis @ r}``; ``basis`` is n x s."""

    basis: np.ndarray
    origin: np.ndarray
    dim: int
    _half_widths: dict = field(default_factory=dict, repr=False)

    def residual(self, q) -> float:
        """Distance from ``q`` to the flat."""
        v = np.asarray(q, dtype=float) - self.origin
        coef, *_ = np.linalg.lstsq(self.basis, v, rcond=None)
        return float(np.linalg.norm(self.basis @ coef - v))

    def coefficient_half_widths(self, bounds: CSpaceBounds) -> np.ndarray:
        """Per-column coefficient range covering the flat's intersection with the box.

        Columns are mutually orthogonal, so the coefficient of column ``a`` for
        a point ``x`` on the flat is ``<x - origin, a> / |a|^2``; its largest
        magnitude over the box is the box's support function along ``a``.
        """
        key = (bounds.lo.tobytes(), bounds.hi.tobytes())
        hw = self._half_widths.get(key)
        if hw is None:
            reach = np.maximum(np.abs(bounds.lo - self.origin), np.abs(bounds.hi - self.origin))
            support = reach @ np.abs(self.basis)
            hw = support / np.einsum("ij,ij->j", self.basis, self.basis)
            self._half_widths[key] = hw
        return hw


_MIN_SINGULAR = 1e-6


def make_affine_stage(q_init, q_goal, s: int, rng: RngStream) -> AffineStage:
    """Random ``s``-flat through ``q_init`` and ``q_goal``.

    Column 1 is ``q_goal - q_init``. Columns 2..s are random unit directions,
    orthogonalized against the earlier columns; the draw is repeated until the
    smallest singular value clears ``1e-6``.
    """
    q_init = np.asarray(q_init, dtype=float)
    q_goal = np.asarray(q_goal, dtype=float)
    n = q_init.size
    if not 1 <= s <= n:
        raise ValueError(f"flat dimension s={s} must lie in [1, {n}]")
    d = q_goal - q_init
    if not np.any(d):
        raise ValueError("q_init and q_goal coincide")
    # the columns are orthogonal, so the smallest singular value is min(|d|, 1)
    if np.linalg.norm(d) <= _MIN_SINGULAR:
        raise ValueError("q_init and q_goal are too close for a well-conditioned flat")
    while True:
        cols = [d]
        units = [d / np.linalg.norm(d)]
        ok = True
        for _ in range(s - 1):
            v = rng.standard_normal(n)
            for u in units:
                v = v - np.dot(v, u) * u
            norm = np.linalg.norm(v)
            if norm < _MIN_SINGULAR:
                ok = False
                break
            v = v / norm
            units.append(v)
            cols.append(v)
        if not ok:
            continue
        basis = np.column_stack(cols)
        if np.linalg.svd(basis, compute_uv=False)[-1] > _MIN_SINGULAR:
            return AffineStage(basis=basis, origin=q_init.copy(), dim=s)


def affine_sample(stage: AffineStage, bounds: CSpaceBounds, rng: RngStream,
                  max_rejects: int = 100) -> Configuration | None:
    """Rejection-sample the flat inside the box.

    Returns ``None`` once ``max_rejects`` consecutive draws land outside the
    box. A full-dimensional flat is the whole ambient space, so it is sampled
    directly with :func:`sample_uniform` (the rejection sampler's target
    distribution).
    """
    if stage.dim == stage.origin.size:
        return sample_uniform(bounds, rng)
    hw = stage.coefficient_half_widths(bounds)
    for _ in range(max_rejects):
        r = rng.uniform(-hw, hw)
        q = stage.basis @ r + stage.origin
        if np.all(q >= bounds.lo) and np.all(q <= bounds.hi):
            return q
    return None
