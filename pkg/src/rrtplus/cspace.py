"""Box-shaped configuration spaces.

A configuration is a plain ``numpy`` float vector. Every degree of freedom is a
bounded, non-wrapping interval, so the space is the Cartesian product of the
per-axis intervals and all geometry (distance, interpolation, clipping) is
ordinary Euclidean geometry in R^n.

Random numbers come from :func:`make_rng`, a ``numpy.random.Generator`` backed
by PCG64. Seeding goes through ``SeedSequence`` so equal seeds give
bit-identical streams on every platform numpy supports.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Configuration = np.ndarray
RngStream = np.random.Generator


def make_rng(seed: int) -> RngStream:
    """Return an independent PCG64 stream for ``seed``."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def as_config(q) -> Configuration:
    return np.asarray(q, dtype=float)


@dataclass(frozen=True, eq=False)
class CSpaceBounds:
    """Per-axis closed intervals ``[lo_i, hi_i]``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float).ravel()
        hi = np.array(self.hi, dtype=float).ravel()
        if lo.shape != hi.shape or lo.size == 0:
            raise ValueError("lo and hi must be non-empty and of equal length")
        if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
            raise ValueError("bounds must be finite")
        if not np.all(lo < hi):
            raise ValueError("every axis needs lo < hi")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def uniform(cls, n: int, lo: float, hi: float) -> "CSpaceBounds":
        return cls(np.full(n, lo), np.full(n, hi))

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def extent(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, q, tol: float = 0.0) -> bool:
        q = np.asarray(q)
        return bool(np.all(q >= self.lo - tol) and np.all(q <= self.hi + tol))

    def clip(self, q) -> Configuration:
        return np.clip(q, self.lo, self.hi)

    def __eq__(self, other):
        if not isinstance(other, CSpaceBounds):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))


def sample_uniform(bounds: CSpaceBounds, rng: RngStream) -> Configuration:
    """Uniform sample on the box; one draw per axis, in axis order."""
    return rng.uniform(bounds.lo, bounds.hi)


def _check_same_length(a, b):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_length(a, b)
    return float(np.sqrt(np.dot(a - b, a - b)))


def interpolate(a, b, t: float) -> Configuration:
    """Point at fraction ``t`` of the way from ``a`` to ``b``.

    Written as ``(1-t)a + tb`` so that ``t=0`` and ``t=1`` reproduce the
    endpoints exactly.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_length(a, b)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")
    return (1.0 - t) * a + t * b


def clip_line_to_box(q_init, q_goal, bounds: CSpaceBounds) -> tuple[float, float]:
    """Maximal ``[r_min, r_max]`` keeping ``q_init + r (q_goal - q_init)`` in the box.

    Parametric slab clipping: each axis with a non-zero direction component
    contributes the interval of ``r`` between its two bounding planes, and the
    result is the intersection over axes.
    """
    q_init = np.asarray(q_init, dtype=float)
    q_goal = np.asarray(q_goal, dtype=float)
    _check_same_length(q_init, q_goal)
    d = q_goal - q_init
    moving = d != 0.0
    if not np.any(moving):
        raise ValueError("q_init and q_goal coincide; the line is undefined")
    t_lo = (bounds.lo[moving] - q_init[moving]) / d[moving]
    t_hi = (bounds.hi[moving] - q_init[moving]) / d[moving]
    r_min = float(np.max(np.minimum(t_lo, t_hi)))
    r_max = float(np.min(np.maximum(t_lo, t_hi)))
    return r_min, r_max


def steer(q_near, q_rand, step: float) -> Configuration:
    """Move from ``q_near`` toward ``q_rand`` by at most ``step``."""
    q_near = np.asarray(q_near, dtype=float)
    q_rand = np.asarray(q_rand, dtype=float)
    _check_same_length(q_near, q_rand)
    diff = q_rand - q_near
    d = float(np.sqrt(np.dot(diff, diff)))
    if d <= step:
        return q_rand.copy()
    return q_near + (step / d) * diff
