"""Synthetic depth sensing: ridge samples along the visible rope surface."""

from __future__ import annotations

import numpy as np

from .render import arc_samples, _over_under


def _lift_profile(d, plateau, radius):
    ramp = np.zeros_like(d)
    ramp[d <= plateau] = 1.0
    mid = (d > plateau) & (d < radius)
    ramp[mid] = (radius - d[mid]) / (radius - plateau)
    return ramp


def sample_pointcloud(scene, noise_sigma=None, density=None, seed=0) -> np.ndarray:
    """Point samples of the visible rope surface.

    Strand tops are sampled at fixed arclength spacing; points on an under
    strand near a crossing are occluded, as is anything beneath the pole.
    Deterministic given (scene, seed).
    """
    cfg = scene.config
    sigma = cfg.cloud_noise_sigma if noise_sigma is None else noise_sigma
    dens = cfg.cloud_density if density is None else density
    if dens <= 0:
        raise ValueError("density must be positive")

    xy = scene.rope.xy
    pts, seg, _ = arc_samples(xy, 1.0 / dens)
    r = cfg.rope_radius
    z_center = np.full(len(pts), r)

    plateau = cfg.lift_plateau_factor * r
    lift_r = cfg.lift_radius_factor * r
    occl_r = cfg.occlusion_radius_factor * r
    stack_z = cfg.stack_z_factor * r
    keep = np.ones(len(pts), dtype=bool)

    for rec in scene.rope.crossings:
        over_seg, under_seg = _over_under(rec)
        q = np.asarray(rec.point)
        d = np.hypot(pts[:, 0] - q[0], pts[:, 1] - q[1])
        on_over = np.abs(seg - over_seg) <= 3
        on_under = np.abs(seg - under_seg) <= 3
        lift = _lift_profile(d, plateau, lift_r)
        z_new = r + (stack_z - r) * lift
        sel = on_over & (z_new > z_center)
        z_center[sel] = z_new[sel]
        keep &= ~(on_under & ~on_over & (d <= occl_r))

    pc = np.asarray(scene.pole.center)
    keep &= np.hypot(pts[:, 0] - pc[0], pts[:, 1] - pc[1]) > scene.pole.shaft_radius

    cloud = np.column_stack([pts[keep], z_center[keep] + r])
    if sigma > 0:
        rng = np.random.default_rng((int(scene.seed) * 1_000_003 + int(seed)) & 0x7FFFFFFF)
        cloud = cloud + rng.normal(0.0, sigma, cloud.shape)
    return cloud
