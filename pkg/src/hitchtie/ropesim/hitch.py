"""Half-hitch detection on the crossing-record sequence.

Success requires (a) the rope threaded through the pole hole and (b) a
crossing near the pole where the working-end strand passes over the standing
strand and the free tip has ended up on the far side of the standing strand
from where the working strand came in.
"""

from __future__ import annotations

import numpy as np

from .geometry import cross2
from .state import Scene

POLE_ADJACENCY = 0.16  # crossings farther than this from the pole are not part of the hitch


def _side(a, b, p):
    s = cross2(a, b, p)
    if s > 0:
        return 1
    if s < 0:
        return -1
    return 0


def check_hitch(scene: Scene) -> bool:
    if not scene.pass_through:
        return False
    xy = scene.rope.xy
    pole_c = np.asarray(scene.pole.center)
    for rec in scene.rope.crossings:
        q = np.asarray(rec.point)
        if np.hypot(q[0] - pole_c[0], q[1] - pole_c[1]) > POLE_ADJACENCY:
            continue
        # The strand nearer the tip (index 0) is the working one.
        if rec.segment_a < rec.segment_b:
            work_seg, stand_seg, work_over = rec.segment_a, rec.segment_b, rec.over
        else:
            work_seg, stand_seg, work_over = rec.segment_b, rec.segment_a, not rec.over
        if not work_over:
            continue
        # Opposite-side exit: the tip and the pre-crossing part of the working
        # strand fall on opposite sides of the standing strand's line.
        a, b = xy[stand_seg], xy[stand_seg + 1]
        tip_side = _side(a, b, xy[0])
        entry_side = _side(a, b, xy[work_seg + 1])
        if tip_side != 0 and entry_side != 0 and tip_side != entry_side:
            return True
    return False
