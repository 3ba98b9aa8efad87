from __future__ import annotations

import numpy as np

from ..errors import EmptyBounds
from ..geometry import RigidObject, Scene

SAFETY_FACTOR = 10.0


def big_m_for(scene: Scene, obj: RigidObject) -> float:
    """
    A big-M large enough to switch off any containment row at any reachable configuration:
    `SAFETY_FACTOR * 2 * (scene diagonal + largest vertex radius)`.

    Raises:
        EmptyBounds: The scene bounds have no volume.
    """

    if np.any(scene.hi <= scene.lo):
        raise EmptyBounds(f"scene bounds {scene.lo.tolist()} .. {scene.hi.tolist()} are empty")
    return SAFETY_FACTOR * 2.0 * (scene.diagonal + obj.max_radius)
