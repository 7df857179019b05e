"""Benchmark scenario generators and their JSON form.

Four environment kinds are generated for an ``n``-link chain with unit links
whose base sits at the origin:

``empty``
    no obstacles.
``easy-random`` / ``cluttered-random``
    random non-overlapping circles in the quadrant the chain sweeps between
    its start pose (straight along +x) and goal pose (straight along +y).
    Placements touching either pose are rejected.
``horn``
    a curved corridor bounded by two concentric arc polylines centred on the
    base. The goal pose runs radially out through the corridor mouth and then
    follows the corridor around.

Generation is a pure function of ``(kind, n, seed, options)``.
"""
from __future__ import annotations

import json
import math
from typing import Any

import jsonschema
import numpy as np

from .chain import (
    KINDS,
    Box,
    ChainRobot,
    Circle,
    Environment,
    ScenarioSpec,
    Segment,
    fk_batch,
)
from . import geometry as geo
from .cspace import CSpaceBounds, make_rng

FORMAT = "rrtplus-scenario"
VERSION = 1

KIND_ALIASES = {
    "empty": "empty",
    "easy": "easy-random",
    "easy-random": "easy-random",
    "cluttered": "cluttered-random",
    "cluttered-random": "cluttered-random",
    "horn": "horn",
}

RANDOM_DEFAULTS = {
    "easy-random": dict(count=5, r_min=0.5, r_max=1.0),
    "cluttered-random": dict(count=15, r_min=0.8, r_max=1.6),
}
# counts above are for this many links; other chains scale by free area
REFERENCE_LINKS = 17


def default_count(kind: str, n: int) -> int:
    """Default circle count for an ``n``-link chain.

    Centres are drawn from an annular sector reaching ``n - 0.5`` link
    lengths, so the count scales with that sector's area.
    """
    base = RANDOM_DEFAULTS[kind]["count"]
    if n == REFERENCE_LINKS:
        return base
    area = lambda m: (m - 0.5) ** 2 - _inner_radius(m) ** 2
    return max(1, int(round(base * area(n) / area(REFERENCE_LINKS))))


def _inner_radius(n: int) -> float:
    # keep obstacles off the base, but leave room on very short chains
    return min(2.5, n / 2)


class ScenarioError(RuntimeError):
    """Raised when a generator cannot produce a valid instance."""


def canonical_kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown environment kind {kind!r}; choose from {', '.join(KINDS)}") from None


def _workspace(robot: ChainRobot):
    m = robot.reach + robot.link_length
    return (-m, -m), (m, m)


def _pose_clearance(robot: ChainRobot, q, center, radius) -> float:
    pts = fk_batch(robot, np.asarray(q, dtype=float)[None, :])[0]
    d = geo.point_segment_distance(np.asarray(center), pts[:-1], pts[1:])
    return float(d.min() - radius)


def _random_circles(robot, poses, rng, count, r_min, r_max, margin=0.3, max_tries=20000):
    n = robot.num_links
    L = robot.link_length
    circles: list[Circle] = []
    tries = 0
    while len(circles) < count:
        tries += 1
        if tries > max_tries:
            raise ScenarioError(f"could only place {len(circles)} of {count} obstacles")
        ang = rng.uniform(-math.pi / 6, 2 * math.pi / 3)
        rad = rng.uniform(_inner_radius(n) * L, (n - 0.5) * L)
        r = rng.uniform(r_min, r_max) * L
        c = (rad * math.cos(ang), rad * math.sin(ang))
        if any(math.dist(c, o.center) < r + o.radius + margin for o in circles):
            continue
        if any(_pose_clearance(robot, q, c, r) < margin for q in poses):
            continue
        circles.append(Circle(c, r))
    return circles


def _arc_polyline(radius, a0, a1, max_chord):
    count = max(1, math.ceil(radius * (a1 - a0) / max_chord))
    angles = np.linspace(a0, a1, count + 1)
    pts = [(radius * math.cos(t), radius * math.sin(t)) for t in angles]
    return [Segment(pts[i], pts[i + 1]) for i in range(count)]


def _curve_pose(n_radial: int, n: int, L: float) -> np.ndarray:
    """Joint angles: ``n_radial`` links along +x, the rest as chords of a circle about the base."""
    rc = n_radial * L
    pts = [(k * L, 0.0) for k in range(n_radial + 1)]
    step = 2.0 * math.asin(L / (2.0 * rc))
    for k in range(1, n - n_radial + 1):
        pts.append((rc * math.cos(k * step), rc * math.sin(k * step)))
    pts = np.array(pts)
    heading = np.arctan2(np.diff(pts[:, 1]), np.diff(pts[:, 0]))
    q = np.diff(np.concatenate([[0.0], heading]))
    return (q + math.pi) % (2 * math.pi) - math.pi


def _horn(robot: ChainRobot, gap: float, mouth: float, radial_fraction: float):
    n, L = robot.num_links, robot.link_length
    n_radial = max(2, int(round(radial_fraction * n)))
    rc = n_radial * L
    r_in, r_out = rc - gap / 2.0, rc + gap / 2.0
    if r_in <= L:
        raise ScenarioError("horn inner wall would swallow the base link")
    walls = []
    for r in (r_in, r_out):
        walls += _arc_polyline(r, mouth, 2 * math.pi - mouth, 0.5 * L)
    q_goal = _curve_pose(n_radial, n, L)
    sweep = (n - n_radial) * 2.0 * math.asin(L / (2.0 * rc))
    if sweep >= 2 * math.pi - mouth:
        raise ScenarioError("chain too long for the corridor")
    return walls, q_goal


def make_scenario(kind: str, n: int, seed: int = 0, *, link_length: float = 1.0,
                  count: int | None = None, r_min: float | None = None, r_max: float | None = None,
                  gap: float | None = None, mouth: float = math.pi / 4,
                  radial_fraction: float = 0.3, self_collision: bool | None = None,
                  inflation: float = 0.0, max_retries: int = 20) -> ScenarioSpec:
    """Build a scenario; see the module docstring for the kinds.

    ``self_collision`` defaults to on for the horn and off otherwise.
    """
    kind = canonical_kind(kind)
    if n < 2:
        raise ValueError("scenarios need n >= 2")
    robot = ChainRobot(n, link_length, (0.0, 0.0))
    lo, hi = _workspace(robot)
    bounds = CSpaceBounds.uniform(n, -math.pi, math.pi)
    if self_collision is None:
        self_collision = kind == "horn"
    q_init = np.zeros(n)
    params: dict[str, Any] = {}
    obstacles: list = []

    if kind == "horn":
        gap = 1.5 * link_length if gap is None else gap
        if gap <= 2 * inflation:
            raise ScenarioError("corridor gap must exceed the link thickness")
        obstacles, q_goal = _horn(robot, gap, mouth, radial_fraction)
        params.update(gap=gap, mouth=mouth, radial_fraction=radial_fraction)
    else:
        q_goal = np.zeros(n)
        q_goal[0] = math.pi / 2
        if kind != "empty":
            d = dict(RANDOM_DEFAULTS[kind], count=default_count(kind, n))
            for key, val in (("count", count), ("r_min", r_min), ("r_max", r_max)):
                if val is not None:
                    d[key] = val
            params.update(d)
            rng = make_rng(seed)
            for attempt in range(max_retries):
                try:
                    obstacles = _random_circles(robot, (q_init, q_goal), rng, d["count"],
                                                d["r_min"], d["r_max"])
                    break
                except ScenarioError:
                    if attempt == max_retries - 1:
                        raise
    env = Environment(tuple(obstacles), lo, hi, kind)
    try:
        return ScenarioSpec(env, robot, q_init, q_goal, bounds, bool(self_collision),
                            float(inflation), int(seed), params)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_VECTOR = {"type": "array", "items": {"type": "number"}, "minItems": 1}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "version", "kind", "seed", "robot", "workspace", "obstacles",
                 "bounds", "q_init", "q_goal", "self_collision", "inflation"],
    "properties": {
        "format": {"const": FORMAT},
        "version": {"const": VERSION},
        "kind": {"enum": list(KINDS)},
        "seed": {"type": "integer"},
        "robot": {
            "type": "object",
            "required": ["num_links", "link_length", "base"],
            "properties": {
                "num_links": {"type": "integer", "minimum": 1},
                "link_length": {"type": "number", "exclusiveMinimum": 0},
                "base": _POINT,
            },
        },
        "workspace": {
            "type": "object",
            "required": ["lo", "hi"],
            "properties": {"lo": _POINT, "hi": _POINT},
        },
        "obstacles": {
            "type": "array",
            "items": {
                "oneOf": [
                    {"type": "object", "required": ["type", "center", "radius"],
                     "properties": {"type": {"const": "circle"}, "center": _POINT,
                                    "radius": {"type": "number", "exclusiveMinimum": 0}}},
                    {"type": "object", "required": ["type", "a", "b"],
                     "properties": {"type": {"const": "segment"}, "a": _POINT, "b": _POINT}},
                    {"type": "object", "required": ["type", "lo", "hi"],
                     "properties": {"type": {"const": "box"}, "lo": _POINT, "hi": _POINT}},
                ]
            },
        },
        "bounds": {
            "type": "object",
            "required": ["lo", "hi"],
            "properties": {"lo": _VECTOR, "hi": _VECTOR},
        },
        "q_init": _VECTOR,
        "q_goal": _VECTOR,
        "self_collision": {"type": "boolean"},
        "inflation": {"type": "number", "minimum": 0},
        "params": {"type": "object"},
    },
}


def _obstacle_to_dict(o) -> dict:
    if isinstance(o, Circle):
        return {"type": "circle", "center": list(o.center), "radius": o.radius}
    if isinstance(o, Segment):
        return {"type": "segment", "a": list(o.a), "b": list(o.b)}
    return {"type": "box", "lo": list(o.lo), "hi": list(o.hi)}


def _obstacle_from_dict(d: dict):
    t = d["type"]
    if t == "circle":
        return Circle(tuple(d["center"]), float(d["radius"]))
    if t == "segment":
        return Segment(tuple(d["a"]), tuple(d["b"]))
    return Box(tuple(d["lo"]), tuple(d["hi"]))


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    env = spec.environment
    return {
        "format": FORMAT,
        "version": VERSION,
        "kind": env.kind,
        "seed": spec.seed,
        "robot": {
            "num_links": spec.robot.num_links,
            "link_length": spec.robot.link_length,
            "base": list(spec.robot.base),
        },
        "workspace": {"lo": list(env.workspace_lo), "hi": list(env.workspace_hi)},
        "obstacles": [_obstacle_to_dict(o) for o in env.obstacles],
        "bounds": {"lo": spec.bounds.lo.tolist(), "hi": spec.bounds.hi.tolist()},
        "q_init": spec.q_init.tolist(),
        "q_goal": spec.q_goal.tolist(),
        "self_collision": spec.self_collision,
        "inflation": spec.inflation,
        "params": dict(spec.params),
    }


def scenario_from_dict(d: dict) -> ScenarioSpec:
    jsonschema.validate(d, SCENARIO_SCHEMA)
    r = d["robot"]
    robot = ChainRobot(r["num_links"], float(r["link_length"]), tuple(r["base"]))
    env = Environment(
        tuple(_obstacle_from_dict(o) for o in d["obstacles"]),
        tuple(d["workspace"]["lo"]),
        tuple(d["workspace"]["hi"]),
        d["kind"],
    )
    bounds = CSpaceBounds(d["bounds"]["lo"], d["bounds"]["hi"])
    return ScenarioSpec(env, robot, d["q_init"], d["q_goal"], bounds, d["self_collision"],
                        float(d["inflation"]), d["seed"], dict(d.get("params", {})))


def dumps_scenario(spec: ScenarioSpec) -> str:
    return json.dumps(scenario_to_dict(spec), indent=2, sort_keys=True) + "\n"


def loads_scenario(text: str) -> ScenarioSpec:
    return scenario_from_dict(json.loads(text))


def save_scenario(spec: ScenarioSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(spec))


def load_scenario(path) -> ScenarioSpec:
    with open(path, encoding="utf-8") as fh:
        return loads_scenario(fh.read())
