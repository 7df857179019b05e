"""Staged subspace sampling for RRT-family motion planners.

The ``+`` planners grow their trees in a sequence of nested subspaces of the
configuration space, starting from the line through start and goal and
releasing one degree of freedom per stage until the full space is searched.
"""
__version__ = "0.1.0"

from .cspace import CSpaceBounds, clip_line_to_box, distance, make_rng, sample_uniform, steer
from .planners import (
    PLANNER_NAMES,
    PlannerParams,
    PlanResult,
    ProblemDef,
    StagedOptions,
    plan_bitrrt,
    plan_rrt,
    plan_rrt_connect,
    plan_staged,
    run_planner,
    validate_motion,
)
from .scenario import load_scenario, make_scenario
from .subspace import SampleSchedule, find_sample_size

__all__ = [
    "CSpaceBounds", "clip_line_to_box", "distance", "make_rng", "sample_uniform", "steer",
    "PLANNER_NAMES", "PlannerParams", "PlanResult", "ProblemDef", "StagedOptions",
    "plan_bitrrt", "plan_rrt", "plan_rrt_connect", "plan_staged", "run_planner",
    "validate_motion", "SampleSchedule", "find_sample_size", "load_scenario", "make_scenario",
]
