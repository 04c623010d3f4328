"""Scene data: rope polyline, crossing records, pole, camera."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np


@dataclass
class SimConfig:
    workspace_min: tuple = (0.0, 0.0)
    workspace_max: tuple = (0.64, 0.48)
    raster_width: int = 640
    raster_height: int = 480
    num_vertices: int = 60
    segment_length: float = 0.01
    rope_radius: float = 0.005
    shaft_radius: float = 0.022
    hole_radius: float = 0.010
    hole_z: float = 0.018
    pole_x_range: tuple = (0.30, 0.44)
    pole_y_range: tuple = (0.18, 0.30)
    hole_axis_range: tuple = (-0.5, 0.5)  # radians around +x
    crossing_prob: float = 0.3
    grasp_tol: float = 0.02
    pbd_iterations: int = 30
    # z model for stacked strands (display only; the rope rests on the table)
    stack_z_factor: float = 3.6  # over-strand centre height = factor * rope_radius
    lift_plateau_factor: float = 1.5
    lift_radius_factor: float = 4.0
    occlusion_radius_factor: float = 1.5
    cloud_density: float = 1500.0  # points per meter of rope
    cloud_noise_sigma: float = 0.0008

    @property
    def meters_per_pixel(self):
        return (self.workspace_max[0] - self.workspace_min[0]) / self.raster_width

    @property
    def rope_length(self):
        return (self.num_vertices - 1) * self.segment_length

    def validate(self):
        w = self.workspace_max[0] - self.workspace_min[0]
        h = self.workspace_max[1] - self.workspace_min[1]
        diag = float(np.hypot(w, h))
        if self.rope_length > 2 * diag:
            raise ValueError(
                f"rope length {self.rope_length:.3f} m exceeds twice the workspace diagonal {diag:.3f} m"
            )
        return self


@dataclass
class CrossingRecord:
    segment_a: int
    segment_b: int
    over: bool  # True when segment_a passes over segment_b
    point: tuple  # planar workspace coordinates of the projected intersection

    def to_json(self):
        return {
            "segment_a": int(self.segment_a),
            "segment_b": int(self.segment_b),
            "over": bool(self.over),
            "point": [float(self.point[0]), float(self.point[1])],
        }

    @classmethod
    def from_json(cls, d):
        return cls(d["segment_a"], d["segment_b"], bool(d["over"]), tuple(d["point"]))


@dataclass
class RopeState:
    vertices: np.ndarray  # (V, 3), index 0 = working end
    segment_length: float
    crossings: list = field(default_factory=list)

    def copy(self):
        return RopeState(self.vertices.copy(), self.segment_length, [copy.copy(c) for c in self.crossings])

    @property
    def xy(self):
        return self.vertices[:, :2]


@dataclass
class Pole:
    center: tuple  # (x, y) on the table
    shaft_radius: float
    hole_radius: float
    hole_z: float
    hole_axis: tuple  # horizontal unit vector, the drill direction

    @property
    def hole_center(self):
        return (self.center[0], self.center[1], self.hole_z)

    def axis_vec(self):
        return np.array(self.hole_axis, dtype=float)

    def gate_segment(self):
        """Top-down projection of the hole disc: perpendicular to the axis."""
        c = np.array(self.center, dtype=float)
        t = np.array([-self.hole_axis[1], self.hole_axis[0]])
        return c - self.hole_radius * t, c + self.hole_radius * t

    def contains(self, xy):
        """Inside shaft material: within the shaft disc but not in the hole slot."""
        d = np.asarray(xy, dtype=float) - np.asarray(self.center, dtype=float)
        r = float(np.hypot(d[0], d[1]))
        if r > self.shaft_radius:
            return False
        perp = abs(-self.hole_axis[1] * d[0] + self.hole_axis[0] * d[1])
        return perp > self.hole_radius

    def to_json(self):
        return {
            "center": [float(self.center[0]), float(self.center[1])],
            "shaft_radius": self.shaft_radius,
            "hole_radius": self.hole_radius,
            "hole_z": self.hole_z,
            "hole_axis": [float(self.hole_axis[0]), float(self.hole_axis[1])],
        }

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["center"]), d["shaft_radius"], d["hole_radius"], d["hole_z"], tuple(d["hole_axis"]))


class Camera:
    """Top-down orthographic mapping between workspace XY and raster pixels."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.mpp = config.meters_per_pixel

    def point_to_pixel(self, xy):
        cfg = self.config
        u = int(np.clip(np.floor((xy[0] - cfg.workspace_min[0]) / self.mpp), 0, cfg.raster_width - 1))
        v = int(np.clip(np.floor((xy[1] - cfg.workspace_min[1]) / self.mpp), 0, cfg.raster_height - 1))
        return u, v

    def pixel_to_point(self, uv):
        cfg = self.config
        x = cfg.workspace_min[0] + (uv[0] + 0.5) * self.mpp
        y = cfg.workspace_min[1] + (uv[1] + 0.5) * self.mpp
        return x, y


@dataclass
class Scene:
    config: SimConfig
    rope: RopeState
    pole: Pole
    seed: int
    pass_through: bool = False
    hole_vertex: int = -1  # vertex currently seated in the hole slot, -1 if none
    step_count: int = 0

    @property
    def camera(self):
        return Camera(self.config)

    def copy(self):
        return Scene(
            self.config,
            self.rope.copy(),
            self.pole,
            self.seed,
            self.pass_through,
            self.hole_vertex,
            self.step_count,
        )


@dataclass
class Observation:
    rgb: np.ndarray  # (480, 640, 3) uint8
    cloud: np.ndarray  # (N, 3) float, meters
