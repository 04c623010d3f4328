"""Scene snapshot persistence: JSON manifest plus a PNG raster for replay."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .render import render_rgb
from .state import CrossingRecord, Pole, RopeState, Scene, SimConfig


def scene_to_json(scene: Scene) -> dict:
    return {
        "seed": scene.seed,
        "step_count": scene.step_count,
        "pass_through": scene.pass_through,
        "hole_vertex": scene.hole_vertex,
        "segment_length": scene.rope.segment_length,
        "vertices": [[float(v) for v in row] for row in scene.rope.vertices],
        "crossings": [c.to_json() for c in scene.rope.crossings],
        "pole": scene.pole.to_json(),
        "config": {k: getattr(scene.config, k) for k in scene.config.__dataclass_fields__},
    }


def scene_from_json(d: dict) -> Scene:
    cfg = SimConfig(**{k: tuple(v) if isinstance(v, list) else v for k, v in d["config"].items()})
    rope = RopeState(
        np.asarray(d["vertices"], dtype=float),
        d["segment_length"],
        [CrossingRecord.from_json(c) for c in d["crossings"]],
    )
    return Scene(
        config=cfg,
        rope=rope,
        pole=Pole.from_json(d["pole"]),
        seed=d["seed"],
        pass_through=d["pass_through"],
        hole_vertex=d["hole_vertex"],
        step_count=d["step_count"],
    )


def save_snapshot(scene: Scene, path):
    """Write <path>.json and <path>.png."""
    base = Path(path)
    base.parent.mkdir(parents=True, exist_ok=True)
    base.with_suffix(".json").write_text(json.dumps(scene_to_json(scene)))
    Image.fromarray(render_rgb(scene)).save(base.with_suffix(".png"))


def load_snapshot(path) -> Scene:
    base = Path(path)
    return scene_from_json(json.loads(base.with_suffix(".json").read_text()))
