"""Seeded scene initialization: random smooth rope, randomized pole pose."""

from __future__ import annotations

import numpy as np

from . import pbd
from .actions import update_crossings
from .geometry import polyline_self_intersections
from .state import Pole, RopeState, Scene, SimConfig


def _lay_rope(rng, cfg, pole):
    """Random smooth open curve that avoids the pole and the walls."""
    n = cfg.num_vertices
    for _ in range(60):
        start = np.array(
            [
                rng.uniform(0.07, 0.20),
                rng.uniform(0.10, cfg.workspace_max[1] - 0.10),
            ]
        )
        heading = rng.uniform(-0.9, 0.9)
        turn = 0.0
        pts = [start.copy()]
        ok = True
        p = start.copy()
        for _ in range(n - 1):
            turn = 0.82 * turn + rng.normal(0.0, 0.16)
            turn = float(np.clip(turn, -0.35, 0.35))
            heading += turn
            p = p + cfg.segment_length * np.array([np.cos(heading), np.sin(heading)])
            pts.append(p.copy())
            margin = cfg.rope_radius + 0.02
            if not (
                cfg.workspace_min[0] + margin < p[0] < cfg.workspace_max[0] - margin
                and cfg.workspace_min[1] + margin < p[1] < cfg.workspace_max[1] - margin
            ):
                ok = False
                break
            if np.hypot(p[0] - pole.center[0], p[1] - pole.center[1]) < pole.shaft_radius + 0.03:
                ok = False
                break
        if not ok:
            continue
        xy = np.array(pts)
        if polyline_self_intersections(xy):
            continue
        return xy
    raise RuntimeError("could not lay a valid rope curve; workspace too tight")


def _introduce_crossing(scene, rng):
    """Drag a near-tip vertex across a mid-rope segment to create exactly one
    self-crossing, using the same relaxation as real actions."""
    cfg = scene.config
    for _ in range(12):
        a = int(rng.integers(5, 15))
        j = int(rng.integers(26, 45))
        xy = scene.rope.xy
        m = 0.5 * (xy[j] + xy[j + 1])
        seg = xy[j + 1] - xy[j]
        nrm = np.array([-seg[1], seg[0]])
        nn = np.hypot(nrm[0], nrm[1])
        if nn < 1e-12:
            continue
        nrm /= nn
        side = np.sign(float((xy[a] - m) @ nrm)) or 1.0
        target = m - side * nrm * rng.uniform(0.025, 0.04)
        margin = cfg.rope_radius + 0.01
        target[0] = np.clip(target[0], cfg.workspace_min[0] + margin, cfg.workspace_max[0] - margin)
        target[1] = np.clip(target[1], cfg.workspace_min[1] + margin, cfg.workspace_max[1] - margin)
        trial = scene.copy()
        txy = trial.rope.xy
        txy[a] = target
        pbd.relax(txy, cfg, trial.pole, pinned=a, pin_pos=target, hole_vertex=-1)
        update_crossings(trial, grasped=a)
        if len(trial.rope.crossings) == 1:
            scene.rope = trial.rope
            return True
    return False


def init_scene(seed: int, config: SimConfig | None = None) -> Scene:
    cfg = (config or SimConfig()).validate()
    rng = np.random.default_rng(seed)
    angle = rng.uniform(*cfg.hole_axis_range)
    pole = Pole(
        center=(rng.uniform(*cfg.pole_x_range), rng.uniform(*cfg.pole_y_range)),
        shaft_radius=cfg.shaft_radius,
        hole_radius=cfg.hole_radius,
        hole_z=cfg.hole_z,
        hole_axis=(float(np.cos(angle)), float(np.sin(angle))),
    )
    xy = _lay_rope(rng, cfg, pole)
    vertices = np.column_stack([xy, np.full(len(xy), cfg.rope_radius)])
    scene = Scene(config=cfg, rope=RopeState(vertices, cfg.segment_length), pole=pole, seed=seed)
    if rng.random() < cfg.crossing_prob:
        _introduce_crossing(scene, rng)
    return scene
