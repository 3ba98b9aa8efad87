"""Built-in desk-scale scenes and objects used by the benchmarks, the CLI and the tests."""

from __future__ import annotations

from typing_extensions import Callable

from ..geometry import Configuration, ConvexPolytope, RigidObject, Scene
from ..value_object import ValueObject


class Fixture(ValueObject):
    """A scene with a default query for the object it is built around."""

    name: str
    scene: Scene
    start: Configuration
    goal: Configuration
    obj: str = "stick"


def _box(lo: list[float], hi: list[float]) -> ConvexPolytope:
    return ConvexPolytope.from_box(lo, hi)


def _q(p: list[float], rot_index: int = 0) -> Configuration:
    return Configuration(p=p, rot_index=rot_index)


def corner() -> Fixture:
    """An L-shaped corridor one unit wide: along the bottom, then up the right side."""

    scene = Scene(lo=[0.0, 0.0], hi=[3.0, 3.0], obstacles=(_box([0.0, 1.0], [2.0, 3.0]),))
    return Fixture(name="2d-corner", scene=scene, start=_q([0.8, 0.5]), goal=_q([2.5, 2.2], 3))


def bugtrap(scale: float = 1.0, corridor: float = 1.0) -> Fixture:
    """
    A walled box with a slot of width `corridor` in its right wall. The start sits inside the trap and the goal
    outside, level with the slot. `scale` multiplies every scene length but not the object.
    """

    top, bottom, mid = 4.5, 1.5, 3.0
    half = corridor / 2.0
    walls = [
        ([2.0, top - 0.3], [4.5, top]),
        ([2.0, bottom], [4.5, bottom + 0.3]),
        ([2.0, bottom + 0.3], [2.3, top - 0.3]),
        ([4.2, mid + half], [4.5, top - 0.3]),
        ([4.2, bottom + 0.3], [4.5, mid - half]),
    ]
    scene = Scene(lo=[0.0, 0.0], hi=[6.0, 6.0], obstacles=tuple(_box(lo, hi) for lo, hi in walls))
    if scale != 1.0:
        scene = scene.scaled(scale)
    return Fixture(
        name="2d-bugtrap",
        scene=scene,
        start=_q([3.25 * scale, mid * scale]),
        goal=_q([5.3 * scale, mid * scale]),
    )


def peg() -> Fixture:
    """A thick wall with a gap one unit high, sized for the L object with its long leg leading."""

    scene = Scene(
        lo=[0.0, 0.0],
        hi=[4.0, 3.0],
        obstacles=(_box([1.8, 0.0], [2.2, 1.0]), _box([1.8, 2.0], [2.2, 3.0])),
    )
    return Fixture(name="2d-peg", scene=scene, start=_q([0.5, 1.1]), goal=_q([2.5, 1.1]), obj="l")


def slab() -> Fixture:
    """A horizontal slab with a rectangular hole; the pad passes it lying flat."""

    z0, z1 = 1.4, 1.6
    pieces = [
        ([0.0, 0.0, z0], [0.9, 3.0, z1]),
        ([2.1, 0.0, z0], [3.0, 3.0, z1]),
        ([0.9, 0.0, z0], [2.1, 1.0, z1]),
        ([0.9, 2.0, z0], [2.1, 3.0, z1]),
    ]
    scene = Scene(lo=[0.0, 0.0, 0.0], hi=[3.0, 3.0, 3.0], obstacles=tuple(_box(lo, hi) for lo, hi in pieces))
    return Fixture(name="3d-slab", scene=scene, start=_q([1.5, 1.5, 0.7]), goal=_q([1.5, 1.5, 2.3]), obj="pad")


def stick() -> RigidObject:
    return RigidObject.stick(1.2, 0.1)


def l_object() -> RigidObject:
    return RigidObject.l_shape(1.2, 0.8, 0.1)


def pad() -> RigidObject:
    return RigidObject.box3d(1.0, 0.8, 0.1)


SCENES: dict[str, Callable[[], Fixture]] = {
    "2d-corner": corner,
    "2d-bugtrap": bugtrap,
    "2d-peg": peg,
    "3d-slab": slab,
}

OBJECTS: dict[str, Callable[[], RigidObject]] = {"stick": stick, "l": l_object, "pad": pad}


def fixture(name: str) -> Fixture:
    try:
        return SCENES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose one of {', '.join(SCENES)}") from None


def fixture_object(item: Fixture) -> RigidObject:
    return OBJECTS[item.obj]()
