"""Planar geometry for crossing detection and the hitch test.

All tests operate on the top-down XY projection of the rope polyline.
"""

from __future__ import annotations

import numpy as np


def cross2(o, a, b):
    """Signed area of triangle (o, a, b) * 2; >0 when o->a->b turns left."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def segments_intersect(p1, p2, p3, p4):
    """Proper (transversal) intersection point of segments p1p2 and p3p4, or None.

    Touching endpoints and collinear overlaps do not count; crossings in this
    simulator are generic after relaxation, so the strict test is stable.
    """
    d1 = cross2(p3, p4, p1)
    d2 = cross2(p3, p4, p2)
    d3 = cross2(p1, p2, p3)
    d4 = cross2(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        t = d1 / (d1 - d2)
        return (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
    return None


def polyline_self_intersections(vertices_xy):
    """All (i, j, point) with i < j - 1: non-adjacent segment pairs whose
    projections properly intersect. Brute force O(V^2); V is small."""
    pts = np.asarray(vertices_xy)
    n = len(pts) - 1
    out = []
    for i in range(n):
        for j in range(i + 2, n):
            q = segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])
            if q is not None:
                out.append((i, j, q))
    return out


def segment_crosses_segment(a0, a1, b0, b1):
    return segments_intersect(a0, a1, b0, b1) is not None


def point_segment_distance(p, a, b):
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = np.clip(float((p - a) @ ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def rotate2(v, angle):
    c, s = np.cos(angle), np.sin(angle)
    x, y = v[0], v[1]
    return np.array([c * x - s * y, s * x + c * y])


def wrap_half_pi(angle):
    """Wrap an undirected line angle into [-pi/2, pi/2)."""
    return (angle + np.pi / 2) % np.pi - np.pi / 2


def yaw_of(v):
    return float(np.arctan2(v[1], v[0]))
