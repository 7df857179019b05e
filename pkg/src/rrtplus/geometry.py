"""Broadcasting 2-D segment primitives.

All functions take points as arrays whose last axis has length 2 and
broadcast over the leading axes, so a whole batch of chain poses can be
tested against every obstacle in one call.
"""
from __future__ import annotations

import numpy as np


# relative size below which an orientation counts as collinear
COLLINEAR_EPS = 1e-12


def cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def orientation(u, v):
    """``cross(u, v)`` with rounding noise on (near-)collinear pairs snapped to 0.

    Links held at a zero joint angle are exactly collinear in theory, but the
    raw cross product comes out as +-1e-16 with arbitrary signs, which would
    read as a proper crossing of two disjoint links.
    """
    c = cross(u, v)
    scale = np.sqrt(np.einsum("...i,...i->...", u, u) * np.einsum("...i,...i->...", v, v))
    return np.where(np.abs(c) <= COLLINEAR_EPS * scale, 0.0, c)


def point_segment_distance(p, a, b):
    """Distance from point(s) ``p`` to segment(s) ``a-b``."""
    ab = b - a
    ap = p - a
    den = np.einsum("...i,...i->...", ab, ab)
    num = np.einsum("...i,...i->...", ap, ab)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[..., None] * ab
    return np.linalg.norm(p - closest, axis=-1)


def _on_segment(p, a, b):
    """``p`` known collinear with ``a-b``: is it within the bounding box?"""
    return (
        (np.minimum(a[..., 0], b[..., 0]) <= p[..., 0])
        & (p[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
        & (np.minimum(a[..., 1], b[..., 1]) <= p[..., 1])
        & (p[..., 1] <= np.maximum(a[..., 1], b[..., 1]))
    )


def segments_intersect(p1, p2, q1, q2):
    """Closed-segment intersection by orientation tests, collinear overlap included."""
    d1 = orientation(q2 - q1, p1 - q1)
    d2 = orientation(q2 - q1, p2 - q1)
    d3 = orientation(p2 - p1, q1 - p1)
    d4 = orientation(p2 - p1, q2 - p1)
    proper = (((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))) & (
        ((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0))
    )
    touch = (
        ((d1 == 0) & _on_segment(p1, q1, q2))
        | ((d2 == 0) & _on_segment(p2, q1, q2))
        | ((d3 == 0) & _on_segment(q1, p1, p2))
        | ((d4 == 0) & _on_segment(q2, p1, p2))
    )
    return proper | touch


def segment_segment_distance(p1, p2, q1, q2):
    """Zero when the segments meet, else the smallest endpoint-to-segment distance."""
    d = np.minimum(
        np.minimum(point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2)),
        np.minimum(point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)),
    )
    return np.where(segments_intersect(p1, p2, q1, q2), 0.0, d)


def segment_hits_box(a, b, lo, hi):
    """Liang-Barsky slab clipping of segment ``a-b`` against the closed box ``[lo, hi]``."""
    d = b - a
    t0 = np.zeros(np.broadcast_shapes(a.shape, lo.shape)[:-1])
    t1 = np.ones_like(t0)
    ok = np.ones(t0.shape, dtype=bool)
    for k in range(2):
        dk = np.broadcast_to(d[..., k], t0.shape)
        ak = np.broadcast_to(a[..., k], t0.shape)
        lk = np.broadcast_to(lo[..., k], t0.shape)
        hk = np.broadcast_to(hi[..., k], t0.shape)
        flat = dk == 0
        ok &= ~(flat & ((ak < lk) | (ak > hk)))
        with np.errstate(divide="ignore", invalid="ignore"):
            ta = np.where(flat, -np.inf, (lk - ak) / np.where(flat, 1.0, dk))
            tb = np.where(flat, np.inf, (hk - ak) / np.where(flat, 1.0, dk))
        t0 = np.maximum(t0, np.minimum(ta, tb))
        t1 = np.minimum(t1, np.maximum(ta, tb))
    return ok & (t0 <= t1)
