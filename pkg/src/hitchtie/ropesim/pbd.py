"""Position-based relaxation of the rope polyline.

The rope rests on the table plane, so constraints act on XY only:
inextensible segments, the pole shaft as a hard obstacle (minus the hole
slot), an optional pin on the grasped vertex, an optional "seated in the
hole" vertex, and workspace bounds.
"""

from __future__ import annotations

import numpy as np

RESIDUAL_TOL = 5e-5


def _project_distances(xy, rest, pinned):
    n = len(xy)
    for k in range(n - 1):
        _project_pair(xy, rest, k, pinned)
    for k in range(n - 2, -1, -1):
        _project_pair(xy, rest, k, pinned)


def _project_pair(xy, rest, k, pinned):
    d = xy[k + 1] - xy[k]
    dist = np.hypot(d[0], d[1])
    if dist < 1e-12:
        d = np.array([rest, 0.0])
        dist = rest
    err = dist - rest
    if err == 0.0:
        return
    corr = (err / dist) * d
    a_pinned = k == pinned
    b_pinned = (k + 1) == pinned
    if a_pinned and b_pinned:
        return
    if a_pinned:
        xy[k + 1] -= corr
    elif b_pinned:
        xy[k] += corr
    else:
        xy[k] += 0.5 * corr
        xy[k + 1] -= 0.5 * corr


def _push_out_of_pole(xy, pole, skip=()):
    c = np.asarray(pole.center)
    d = xy - c
    r = np.hypot(d[:, 0], d[:, 1])
    perp = np.abs(-pole.hole_axis[1] * d[:, 0] + pole.hole_axis[0] * d[:, 1])
    inside = (r < pole.shaft_radius + 1e-4) & (perp > pole.hole_radius)
    for i in skip:
        if 0 <= i < len(xy):
            inside[i] = False
    idx = np.where(inside)[0]
    for i in idx:
        ri = r[i]
        if ri < 1e-9:
            xy[i] = c + np.array([pole.shaft_radius + 1e-4, 0.0])
        else:
            xy[i] = c + d[i] * ((pole.shaft_radius + 1e-4) / ri)


def _seat_in_hole(xy, pole, k):
    """Clamp vertex k onto the hole axis line, within the shaft."""
    c = np.asarray(pole.center)
    a = pole.axis_vec()
    rel = xy[k] - c
    along = float(rel @ a)
    along = np.clip(along, -pole.shaft_radius, pole.shaft_radius)
    xy[k] = c + along * a


def _reseat(xy, pole, k):
    """Let the rope slide through the hole: track the nearest vertex locally."""
    c = np.asarray(pole.center)
    lo = max(0, k - 2)
    hi = min(len(xy), k + 3)
    window = xy[lo:hi]
    d = np.hypot(window[:, 0] - c[0], window[:, 1] - c[1])
    return lo + int(np.argmin(d))


def _clamp_bounds(xy, config):
    m = config.rope_radius
    np.clip(xy[:, 0], config.workspace_min[0] + m, config.workspace_max[0] - m, out=xy[:, 0])
    np.clip(xy[:, 1], config.workspace_min[1] + m, config.workspace_max[1] - m, out=xy[:, 1])


def max_length_residual(xy, rest):
    d = np.diff(xy, axis=0)
    lengths = np.hypot(d[:, 0], d[:, 1])
    return float(np.max(np.abs(lengths - rest)))


def relax(xy, config, pole, pinned=-1, pin_pos=None, hole_vertex=-1, iterations=None):
    """Iterative constraint projection; mutates xy in place.

    Returns (hole_vertex, pin_respected): the possibly slid hole vertex and
    whether the pin could be honored without stretching the rope. When the
    commanded placement is unreachable the pin is released and the grasp
    slips, keeping inextensibility exact.
    """
    iters = iterations if iterations is not None else config.pbd_iterations
    rest = config.segment_length

    def run(n_iters, with_pin):
        nonlocal hole_vertex
        for _ in range(n_iters):
            if with_pin and pinned >= 0:
                xy[pinned] = pin_pos
            if hole_vertex >= 0 and hole_vertex != pinned:
                hole_vertex = _reseat(xy, pole, hole_vertex)
                if hole_vertex != pinned:
                    _seat_in_hole(xy, pole, hole_vertex)
            skip = (hole_vertex,) if hole_vertex >= 0 else ()
            _push_out_of_pole(xy, pole, skip=skip)
            _clamp_bounds(xy, config)
            _project_distances(xy, rest, pinned if with_pin else -1)

    run(iters, with_pin=True)
    pin_respected = True
    if max_length_residual(xy, rest) > RESIDUAL_TOL:
        # Unreachable placement: release the pin so the grasp slips.
        pin_respected = False
        run(max(iters, 20), with_pin=False)
    return hole_vertex, pin_respected
