"""Small synthetic planning problems shared by the tests."""
import math

import numpy as np
import pytest

from rrtplus.cspace import CSpaceBounds, make_rng
from rrtplus.planners import ProblemDef

# PASS/FAIL lines of the acceptance suite, echoed in the terminal summary
ACCEPT_KEY = pytest.StashKey[list]()


def ball_problem(n, centers=(), radii=(), lo=0.0, hi=1.0, q_init=None, q_goal=None,
                 edge_resolution=None):
    """Unit box with spherical obstacles; start and goal near opposite corners."""
    centers = np.asarray(centers, dtype=float).reshape(-1, n)
    radii = np.asarray(radii, dtype=float)
    span = hi - lo

    def valid(q):
        if not len(radii):
            return True
        return bool(np.all(np.linalg.norm(centers - q, axis=1) > radii))

    q_init = np.full(n, lo + 0.05 * span) if q_init is None else np.asarray(q_init, float)
    q_goal = np.full(n, lo + 0.95 * span) if q_goal is None else np.asarray(q_goal, float)
    return ProblemDef(CSpaceBounds.uniform(n, lo, hi), q_init, q_goal, valid,
                      edge_resolution=edge_resolution)


def random_ball_problem(seed, n):
    rng = make_rng(seed)
    k = int(rng.integers(1, 4))
    centers, radii = [], []
    while len(centers) < k:
        c = rng.uniform(0.2, 0.8, size=n)
        r = float(rng.uniform(0.05, 0.15))
        if np.linalg.norm(c - 0.05) > r + 0.01 and np.linalg.norm(c - 0.95) > r + 0.01:
            centers.append(c)
            radii.append(r)
    return ball_problem(n, centers, radii)


def caged_goal_problem(n, inner=0.05, outer=0.3):
    """Goal sealed inside a spherical shell: unsolvable."""
    q_goal = np.full(n, 0.7)

    def valid(q):
        d = float(np.linalg.norm(np.asarray(q) - q_goal))
        return d < inner or d > outer

    return ProblemDef(CSpaceBounds.uniform(n, 0.0, 1.0), np.full(n, 0.1), q_goal, valid,
                      edge_resolution=0.01)


def wall_problem():
    """2-D box split by a vertical wall with a gap at the top."""
    def valid(q):
        x, y = q
        return not (0.45 <= x <= 0.55 and y < 0.8)

    return ProblemDef(CSpaceBounds.uniform(2, 0.0, 1.0), np.array([0.1, 0.1]),
                      np.array([0.9, 0.1]), valid, edge_resolution=0.005)


def dense_segment_ok(problem, a, b, factor=10):
    res = problem.edge_resolution or 0.01
    m = max(1, math.ceil(np.linalg.norm(np.asarray(b) - a) / (res / factor)))
    return all(problem.is_valid((1 - t) * np.asarray(a) + t * np.asarray(b))
               for t in np.linspace(0, 1, m + 1))
