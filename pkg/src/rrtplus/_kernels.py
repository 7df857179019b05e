"""Compiled collision kernels for planar chains.

Same semantics as :func:`rrtplus.chain.chain_collision_batch` but looping per
configuration so a motion check can stop at the first colliding pose. The
numpy version stays the reference implementation; tests compare the two.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit


# relative size below which an orientation counts as collinear
COLLINEAR_EPS = 1e-12


@njit(cache=True)
def _orient(ax, ay, bx, by, cx, cy):
    ux, uy, vx, vy = bx - ax, by - ay, cx - ax, cy - ay
    d = ux * vy - uy * vx
    if d * d <= COLLINEAR_EPS * COLLINEAR_EPS * ((ux * ux + uy * uy) * (vx * vx + vy * vy)):
        return 0.0
    return d


@njit(cache=True)
def _on_seg(px, py, ax, ay, bx, by):
    return (min(ax, bx) <= px <= max(ax, bx)) and (min(ay, by) <= py <= max(ay, by))


@njit(cache=True)
def _seg_seg(p1x, p1y, p2x, p2y, q1x, q1y, q2x, q2y):
    d1 = _orient(q1x, q1y, q2x, q2y, p1x, p1y)
    d2 = _orient(q1x, q1y, q2x, q2y, p2x, p2y)
    d3 = _orient(p1x, p1y, p2x, p2y, q1x, q1y)
    d4 = _orient(p1x, p1y, p2x, p2y, q2x, q2y)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and _on_seg(p1x, p1y, q1x, q1y, q2x, q2y):
        return True
    if d2 == 0 and _on_seg(p2x, p2y, q1x, q1y, q2x, q2y):
        return True
    if d3 == 0 and _on_seg(q1x, q1y, p1x, p1y, p2x, p2y):
        return True
    if d4 == 0 and _on_seg(q2x, q2y, p1x, p1y, p2x, p2y):
        return True
    return False


@njit(cache=True)
def _pt_seg_d2(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    den = dx * dx + dy * dy
    t = 0.0
    if den > 0:
        t = ((px - ax) * dx + (py - ay) * dy) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    ex = ax + t * dx - px
    ey = ay + t * dy - py
    return ex * ex + ey * ey


@njit(cache=True)
def _seg_seg_dist(p1x, p1y, p2x, p2y, q1x, q1y, q2x, q2y):
    if _seg_seg(p1x, p1y, p2x, p2y, q1x, q1y, q2x, q2y):
        return 0.0
    d = min(_pt_seg_d2(p1x, p1y, q1x, q1y, q2x, q2y), _pt_seg_d2(p2x, p2y, q1x, q1y, q2x, q2y))
    d = min(d, _pt_seg_d2(q1x, q1y, p1x, p1y, p2x, p2y))
    d = min(d, _pt_seg_d2(q2x, q2y, p1x, p1y, p2x, p2y))
    return math.sqrt(d)


@njit(cache=True)
def _seg_box(ax, ay, bx, by, lox, loy, hix, hiy):
    t0 = 0.0
    t1 = 1.0
    for k in range(2):
        if k == 0:
            a, d, lo, hi = ax, bx - ax, lox, hix
        else:
            a, d, lo, hi = ay, by - ay, loy, hiy
        if d == 0.0:
            if a < lo or a > hi:
                return False
        else:
            ta = (lo - a) / d
            tb = (hi - a) / d
            if ta > tb:
                ta, tb = tb, ta
            if ta > t0:
                t0 = ta
            if tb < t1:
                t1 = tb
            if t0 > t1:
                return False
    return True


@njit(cache=True)
def _cell_range(lo, hi, origin, inv, g):
    a = int(math.floor((lo - origin) * inv))
    b = int(math.floor((hi - origin) * inv))
    return max(a, 0), min(b, g - 1)


@njit(cache=True)
def _link_hits_segments(ax, ay, bx, by, lminx, lmaxx, lminy, lmaxy, seg, seg_box, gstart, gidx,
                        grid, infl):
    # only segments bucketed in the cells under the link's padded box can touch it
    g = int(grid[4])
    cx0, cx1 = _cell_range(lminx, lmaxx, grid[0], grid[2], g)
    cy0, cy1 = _cell_range(lminy, lmaxy, grid[1], grid[3], g)
    for cx in range(cx0, cx1 + 1):
        for cy in range(cy0, cy1 + 1):
            c = cx * g + cy
            for k in range(gstart[c], gstart[c + 1]):
                s = gidx[k]
                if (lminx > seg_box[s, 2] or lmaxx < seg_box[s, 0]
                        or lminy > seg_box[s, 3] or lmaxy < seg_box[s, 1]):
                    continue
                if infl > 0:
                    if _seg_seg_dist(ax, ay, bx, by, seg[s, 0], seg[s, 1], seg[s, 2], seg[s, 3]) <= infl:
                        return True
                elif _seg_seg(ax, ay, bx, by, seg[s, 0], seg[s, 1], seg[s, 2], seg[s, 3]):
                    return True
    return False


@njit(cache=True)
def _pose_collides(q, px, py, base_x, base_y, L, circ, circ_r, seg, seg_box, gstart, gidx, grid,
                   boxes, ws, self_col, infl):
    n = q.shape[0]
    theta = 0.0
    px[0] = base_x
    py[0] = base_y
    for i in range(n):
        theta += q[i]
        px[i + 1] = px[i] + L * math.cos(theta)
        py[i + 1] = py[i] + L * math.sin(theta)
    for i in range(n + 1):
        if px[i] < ws[0] + infl or px[i] > ws[2] - infl or py[i] < ws[1] + infl or py[i] > ws[3] - infl:
            return True
    for i in range(n):
        ax, ay, bx, by = px[i], py[i], px[i + 1], py[i + 1]
        for c in range(circ.shape[0]):
            rr = circ_r[c] + infl
            if _pt_seg_d2(circ[c, 0], circ[c, 1], ax, ay, bx, by) <= rr * rr:
                return True
        lminx = min(ax, bx) - infl
        lmaxx = max(ax, bx) + infl
        lminy = min(ay, by) - infl
        lmaxy = max(ay, by) + infl
        if seg.shape[0] > 0 and _link_hits_segments(ax, ay, bx, by, lminx, lmaxx, lminy, lmaxy,
                                                    seg, seg_box, gstart, gidx, grid, infl):
            return True
        for b in range(boxes.shape[0]):
            if _seg_box(ax, ay, bx, by, boxes[b, 0] - infl, boxes[b, 1] - infl,
                        boxes[b, 2] + infl, boxes[b, 3] + infl):
                return True
    if self_col and n >= 2:
        for i in range(1, n):
            if abs(q[i]) >= math.pi - 1e-9:
                return True
        pad = 2 * infl
        for i in range(n):
            iminx = min(px[i], px[i + 1]) - pad
            imaxx = max(px[i], px[i + 1]) + pad
            iminy = min(py[i], py[i + 1]) - pad
            imaxy = max(py[i], py[i + 1]) + pad
            for j in range(i + 2, n):
                if (min(px[j], px[j + 1]) > imaxx or max(px[j], px[j + 1]) < iminx
                        or min(py[j], py[j + 1]) > imaxy or max(py[j], py[j + 1]) < iminy):
                    continue
                if infl > 0:
                    if _seg_seg_dist(px[i], py[i], px[i + 1], py[i + 1],
                                     px[j], py[j], px[j + 1], py[j + 1]) <= 2 * infl:
                        return True
                elif _seg_seg(px[i], py[i], px[i + 1], py[i + 1], px[j], py[j], px[j + 1], py[j + 1]):
                    return True
    return False


@njit(cache=True)
def collision_flags(qs, base_x, base_y, L, circ, circ_r, seg, seg_box, gstart, gidx, grid, boxes,
                    ws, self_col, infl):
    m, n = qs.shape
    out = np.zeros(m, dtype=np.bool_)
    px = np.empty(n + 1)
    py = np.empty(n + 1)
    for k in range(m):
        out[k] = _pose_collides(qs[k], px, py, base_x, base_y, L, circ, circ_r, seg, seg_box,
                                gstart, gidx, grid, boxes, ws, self_col, infl)
    return out


@njit(cache=True)
def segment_free(a, b, m, base_x, base_y, L, circ, circ_r, seg, seg_box, gstart, gidx, grid, boxes,
                 ws, self_col, infl):
    """True when all ``m + 1`` evenly spaced poses from ``a`` to ``b`` are free.

    Poses are visited coarse-to-fine (stride halving) so a blocked motion is
    usually rejected after a handful of checks.
    """
    n = a.shape[0]
    px = np.empty(n + 1)
    py = np.empty(n + 1)
    q = np.empty(n)
    seen = np.zeros(m + 1, dtype=np.bool_)
    stride = 1
    while stride * 2 <= m:
        stride *= 2
    while True:
        for k in range(0, m + 1, stride):
            if seen[k]:
                continue
            seen[k] = True
            t = k / m
            for i in range(n):
                q[i] = (1.0 - t) * a[i] + t * b[i]
            if _pose_collides(q, px, py, base_x, base_y, L, circ, circ_r, seg, seg_box, gstart,
                              gidx, grid, boxes, ws, self_col, infl):
                return False
        if not seen[m]:
            seen[m] = True
            for i in range(n):
                q[i] = b[i]
            if _pose_collides(q, px, py, base_x, base_y, L, circ, circ_r, seg, seg_box, gstart,
                              gidx, grid, boxes, ws, self_col, infl):
                return False
        if stride == 1:
            return True
        stride //= 2
