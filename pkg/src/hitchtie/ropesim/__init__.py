from .state import Camera, CrossingRecord, Observation, Pole, RopeState, Scene, SimConfig
from .scene import init_scene
from .actions import ActionResult, apply_action, update_crossings
from .render import render_rgb
from .cloud import sample_pointcloud
from .hitch import check_hitch
from .snapshot import load_snapshot, save_snapshot, scene_from_json, scene_to_json
from .pbd import max_length_residual


def observe(scene, seed=None):
    """Render + sense: the policy's only view of the world."""
    from .state import Observation

    s = scene.step_count if seed is None else seed
    return Observation(rgb=render_rgb(scene), cloud=sample_pointcloud(scene, seed=s))
