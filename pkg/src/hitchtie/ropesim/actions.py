"""Pick / rotate / place execution on a scene."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics.tensor import ContractViolation
from . import pbd
from .geometry import (
    polyline_self_intersections,
    rotate2,
    segments_intersect,
    wrap_half_pi,
    yaw_of,
)
from .state import CrossingRecord, Scene


@dataclass
class ActionResult:
    scene: Scene
    grasp_miss: bool = False
    pass_through_event: bool = False
    new_crossings: int = 0


def _nearest_vertex(rope_xy, point_xy):
    d = np.hypot(rope_xy[:, 0] - point_xy[0], rope_xy[:, 1] - point_xy[1])
    i = int(np.argmin(d))
    return i, float(d[i])


def _local_tangent(xy, k):
    if k == 0:
        v = xy[1] - xy[0]
    elif k == len(xy) - 1:
        v = xy[-1] - xy[-2]
    else:
        v = xy[k + 1] - xy[k - 1]
    n = np.hypot(v[0], v[1])
    return v / n if n > 1e-12 else np.array([1.0, 0.0])


def _carry_crosses_gate(pole, p0, p1):
    g0, g1 = pole.gate_segment()
    return segments_intersect(p0, p1, g0, g1) is not None


def _pick_hole_vertex(xy, pole, cfg):
    """Vertex seated in the hole slot, or -1 if the rope is clear of it."""
    c = np.asarray(pole.center)
    a = pole.axis_vec()
    rel = xy - c
    along = rel @ a
    perp = np.abs(rel[:, 0] * -a[1] + rel[:, 1] * a[0])
    in_hole = (perp <= pole.hole_radius + cfg.rope_radius) & (
        np.abs(along) <= pole.shaft_radius + cfg.segment_length
    )
    if not in_hole.any():
        return -1
    idx = np.where(in_hole)[0]
    return int(idx[np.argmin(np.abs(along[idx]))])


def _moved_strand_distance(seg, grasped):
    # Arc distance from a segment to the grasped vertex.
    return min(abs(seg - grasped), abs(seg + 1 - grasped))


def update_crossings(scene: Scene, grasped: int):
    """Recompute crossing records from the polyline; preserve over/under flags
    of persisting crossings, mark new ones over=true for the moved strand."""
    xy = scene.rope.xy
    found = polyline_self_intersections(xy)
    old = scene.rope.crossings
    new_records = []
    used = set()
    n_new = 0
    for i, j, q in found:
        best = None
        best_d = 0.05
        for idx, rec in enumerate(old):
            if idx in used:
                continue
            if abs(rec.segment_a - i) <= 3 and abs(rec.segment_b - j) <= 3:
                d = float(np.hypot(rec.point[0] - q[0], rec.point[1] - q[1]))
                if d < best_d:
                    best_d = d
                    best = idx
        if best is not None:
            used.add(best)
            new_records.append(CrossingRecord(i, j, old[best].over, (q[0], q[1])))
        else:
            n_new += 1
            moved_is_a = _moved_strand_distance(i, grasped) <= _moved_strand_distance(j, grasped)
            new_records.append(CrossingRecord(i, j, moved_is_a, (q[0], q[1])))
    scene.rope.crossings = new_records
    return n_new


def apply_action(scene: Scene, pick_point, grasp_dir, rotation, place_pixel) -> ActionResult:
    """Grasp near pick_point, rotate in plane, place at place_pixel, relax.

    Returns the successor scene; a grasp farther than the tolerance from any
    vertex is a GraspMiss outcome (scene unchanged), not an exception.
    """
    cfg = scene.config
    if not (0 <= place_pixel[0] < cfg.raster_width and 0 <= place_pixel[1] < cfg.raster_height):
        raise ContractViolation(f"place_pixel {place_pixel} outside the {cfg.raster_width}x{cfg.raster_height} raster")

    nxt = scene.copy()
    nxt.step_count += 1
    xy = nxt.rope.xy
    k, dist = _nearest_vertex(xy, pick_point)
    if dist > cfg.grasp_tol:
        return ActionResult(nxt, grasp_miss=True)

    target = np.array(nxt.camera.pixel_to_point(place_pixel))
    p0 = xy[k].copy()

    # Pass-through bookkeeping: the carry path is the straight segment of the
    # grasped vertex; crossing the hole disc toggles the threaded state.
    event = False
    if _carry_crosses_gate(nxt.pole, p0, target):
        event = True
        if nxt.pass_through:
            nxt.pass_through = False
            nxt.hole_vertex = -1
        else:
            nxt.pass_through = True

    # Gripper yaw: the held strand ends up at yaw(grasp_dir) + rotation.
    gdir = np.asarray(grasp_dir, dtype=float)[:2]
    delta = wrap_half_pi((yaw_of(gdir) + rotation) - yaw_of(_local_tangent(xy, k)))
    for nb in (k - 1, k + 1):
        if 0 <= nb < len(xy):
            xy[nb] = target + rotate2(xy[nb] - p0, delta)
    xy[k] = target

    if nxt.pass_through and nxt.hole_vertex < 0:
        nxt.hole_vertex = _pick_hole_vertex(xy, nxt.pole, cfg)

    hole_vertex, _ = pbd.relax(xy, cfg, nxt.pole, pinned=k, pin_pos=target, hole_vertex=nxt.hole_vertex)
    nxt.hole_vertex = hole_vertex

    # Unthread when the rope has been pulled clear of the hole slot.
    if nxt.pass_through:
        j = _pick_hole_vertex(xy, nxt.pole, cfg)
        if j < 0:
            nxt.pass_through = False
        nxt.hole_vertex = j

    n_new = update_crossings(nxt, grasped=k)
    return ActionResult(nxt, grasp_miss=False, pass_through_event=event, new_crossings=n_new)
