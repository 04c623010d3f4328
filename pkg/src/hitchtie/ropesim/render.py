"""Top-down raster rendering of a scene.

Draw order encodes topology: the over strand at each crossing is repainted
last (its dark outline cuts across the under strand), and the pole is painted
over the rope, hiding the strand seated in the hole slot.
"""

from __future__ import annotations

import numpy as np

BACKGROUND = np.array([231, 226, 214], dtype=np.uint8)
ROPE_BODY = np.array([226, 112, 31], dtype=np.uint8)
ROPE_EDGE = np.array([118, 52, 10], dtype=np.uint8)
TIP_MARKER = np.array([36, 92, 231], dtype=np.uint8)
POLE_SHAFT = np.array([108, 108, 114], dtype=np.uint8)
HOLE_SLOT = np.array([52, 52, 58], dtype=np.uint8)

_DISC_CACHE = {}


def _disc_offsets(radius_px):
    if radius_px not in _DISC_CACHE:
        r = int(radius_px)
        du, dv = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1))
        mask = du * du + dv * dv <= radius_px * radius_px
        _DISC_CACHE[radius_px] = (du[mask].ravel(), dv[mask].ravel())
    return _DISC_CACHE[radius_px]


def _stamp(img, us, vs, radius_px, color):
    du, dv = _disc_offsets(radius_px)
    uu = (us[:, None] + du[None, :]).ravel()
    vv = (vs[:, None] + dv[None, :]).ravel()
    keep = (uu >= 0) & (uu < img.shape[1]) & (vv >= 0) & (vv < img.shape[0])
    img[vv[keep], uu[keep]] = color


def arc_samples(xy, spacing):
    """Evenly spaced samples along the polyline.

    Returns (points (N,2), segment index (N,), arclength (N,))."""
    d = np.diff(xy, axis=0)
    seglen = np.hypot(d[:, 0], d[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]
    n = max(2, int(np.floor(total / spacing)) + 1)
    s = np.linspace(0.0, total, n)
    seg = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seglen) - 1)
    t = (s - cum[seg]) / np.where(seglen[seg] > 0, seglen[seg], 1.0)
    pts = xy[seg] + d[seg] * t[:, None]
    return pts, seg, s


def _over_under(rec):
    return (rec.segment_a, rec.segment_b) if rec.over else (rec.segment_b, rec.segment_a)


def render_rgb(scene) -> np.ndarray:
    cfg = scene.config
    cam = scene.camera
    img = np.empty((cfg.raster_height, cfg.raster_width, 3), dtype=np.uint8)
    img[:] = BACKGROUND

    mpp = cfg.meters_per_pixel
    body_px = max(1, int(round(cfg.rope_radius / mpp)))
    edge_px = body_px + 1

    xy = scene.rope.xy
    pts, seg, _ = arc_samples(xy, 0.5 * mpp)
    us = np.floor((pts[:, 0] - cfg.workspace_min[0]) / mpp).astype(int)
    vs = np.floor((pts[:, 1] - cfg.workspace_min[1]) / mpp).astype(int)

    _stamp(img, us, vs, edge_px, ROPE_EDGE)
    _stamp(img, us, vs, body_px, ROPE_BODY)

    lift_r = cfg.lift_radius_factor * cfg.rope_radius
    for rec in scene.rope.crossings:
        over_seg, _under = _over_under(rec)
        q = np.asarray(rec.point)
        d = np.hypot(pts[:, 0] - q[0], pts[:, 1] - q[1])
        win = (np.abs(seg - over_seg) <= 3) & (d <= lift_r)
        if win.any():
            _stamp(img, us[win], vs[win], edge_px, ROPE_EDGE)
            _stamp(img, us[win], vs[win], body_px, ROPE_BODY)

    tu, tv = cam.point_to_pixel(xy[0])
    _stamp(img, np.array([tu]), np.array([tv]), int(round(1.6 * body_px)), TIP_MARKER)

    # Pole occludes everything beneath it; the hole slot shows the axis.
    pc = np.asarray(scene.pole.center)
    pu = (pc[0] - cfg.workspace_min[0]) / mpp
    pv = (pc[1] - cfg.workspace_min[1]) / mpp
    rad = scene.pole.shaft_radius / mpp
    uu, vv = np.meshgrid(
        np.arange(int(pu - rad) - 1, int(pu + rad) + 2),
        np.arange(int(pv - rad) - 1, int(pv + rad) + 2),
    )
    du = (uu + 0.5) - pu
    dv = (vv + 0.5) - pv
    inside = du * du + dv * dv <= rad * rad
    valid = inside & (uu >= 0) & (uu < cfg.raster_width) & (vv >= 0) & (vv < cfg.raster_height)
    img[vv[valid], uu[valid]] = POLE_SHAFT
    ax = scene.pole.axis_vec()
    perp = np.abs(-ax[1] * du + ax[0] * dv)
    slot = valid & (perp <= scene.pole.hole_radius / mpp)
    img[vv[slot], uu[slot]] = HOLE_SLOT
    return img
