"""SVG rendering of a chain scenario and a solution path.

The start pose is drawn red and the goal pose green; intermediate poses are
spaced evenly by C-space arc length along the path and drawn in grey with
opacity rising toward the goal. Coordinates are world units inside a group
that flips the y axis, written with fixed precision so output is
byte-for-byte reproducible.
"""
from __future__ import annotations

import numpy as np

from .chain import Box, Circle, Segment, forward_kinematics
from .cspace import interpolate

_FMT = "{:.6f}"


def _f(x: float) -> str:
    s = _FMT.format(x)
    return "0.000000" if s == "-0.000000" else s


def poses_along_path(path, frames: int) -> list[np.ndarray]:
    """``frames`` configurations evenly spaced by arc length, endpoints included."""
    if not len(path):
        raise ValueError("cannot render an empty path")
    if frames < 2:
        raise ValueError("frames must be at least 2 (start and goal)")
    path = [np.asarray(q, dtype=float) for q in path]
    if len(path) == 1:
        path = path * 2
    seg = np.array([np.linalg.norm(path[i + 1] - path[i]) for i in range(len(path) - 1)])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    out = []
    for k in range(frames):
        if k == 0:
            out.append(path[0])
            continue
        if k == frames - 1:
            out.append(path[-1])
            continue
        s = total * k / (frames - 1)
        i = int(np.searchsorted(cum, s, side="right") - 1)
        i = min(max(i, 0), len(seg) - 1)
        t = 0.0 if seg[i] == 0 else min(1.0, (s - cum[i]) / seg[i])
        out.append(interpolate(path[i], path[i + 1], t))
    return out


def _polyline(pts, color, opacity, width, cls):
    coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
    return (f'<polyline class="{cls}" points="{coords}" fill="none" stroke="{color}" '
            f'stroke-opacity="{_f(opacity)}" stroke-width="{_f(width)}" '
            f'stroke-linecap="round" stroke-linejoin="round"/>')


def render_solution_svg(scenario, path, frames: int = 10, size: int = 600) -> str:
    """SVG document showing obstacles and ``frames`` chain poses along ``path``."""
    poses = poses_along_path(path, frames)
    env = scenario.environment
    (x0, y0), (x1, y1) = env.workspace_lo, env.workspace_hi
    w, h = x1 - x0, y1 - y0
    lw = 0.08 * scenario.robot.link_length
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{int(round(size * h / w))}" '
        f'viewBox="{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}">',
        f'<title>{env.kind} environment, {scenario.robot.num_links}-link chain</title>',
        '<g transform="scale(1,-1)">',
        f'<rect class="workspace" x="{_f(x0)}" y="{_f(y0)}" width="{_f(w)}" height="{_f(h)}" '
        f'fill="white" stroke="black" stroke-width="{_f(lw)}"/>',
    ]
    for o in env.obstacles:
        if isinstance(o, Circle):
            lines.append(f'<circle class="obstacle" cx="{_f(o.center[0])}" cy="{_f(o.center[1])}" '
                         f'r="{_f(o.radius)}" fill="#555555"/>')
        elif isinstance(o, Segment):
            lines.append(f'<line class="obstacle" x1="{_f(o.a[0])}" y1="{_f(o.a[1])}" '
                         f'x2="{_f(o.b[0])}" y2="{_f(o.b[1])}" stroke="#555555" '
                         f'stroke-width="{_f(2 * lw)}"/>')
        elif isinstance(o, Box):
            lines.append(f'<rect class="obstacle" x="{_f(o.lo[0])}" y="{_f(o.lo[1])}" '
                         f'width="{_f(o.hi[0] - o.lo[0])}" height="{_f(o.hi[1] - o.lo[1])}" '
                         f'fill="#555555"/>')
    robot = scenario.robot
    inner = poses[1:-1]
    for k, q in enumerate(inner):
        opacity = 0.15 + 0.6 * (k + 1) / (len(inner) + 1)
        lines.append(_polyline(forward_kinematics(robot, q), "#808080", opacity, lw, "pose"))
    lines.append(_polyline(forward_kinematics(robot, poses[0]), "red", 1.0, 1.5 * lw, "pose start"))
    lines.append(_polyline(forward_kinematics(robot, poses[-1]), "green", 1.0, 1.5 * lw,
                           "pose goal"))
    bx, by = robot.base
    lines.append(f'<circle class="base" cx="{_f(bx)}" cy="{_f(by)}" r="{_f(2 * lw)}" fill="black"/>')
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"
