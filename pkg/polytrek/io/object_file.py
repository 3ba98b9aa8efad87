"""
Object files, one directive per line (indices are 1-based, `#` starts a comment):

    v x y [z]     vertex
    e i j         edge
    f i j k       triangle face (3D)
    c x y [z]     center; the vertex centroid when absent
"""

from __future__ import annotations

import logging
from pathlib import Path

from ..errors import ObjectParseError
from ..geometry import RigidObject

logger = logging.getLogger(__name__)

_ARITY = {"e": (2,), "f": (3,), "v": (2, 3), "c": (2, 3)}


def parse_object(text: str) -> RigidObject:
    """
    Raises:
        ObjectParseError: A line is malformed, carrying its line and column.
        InvalidObject: The center lies outside the object or the edges do not connect it.
    """

    vertices: list[list[float]] = []
    edges: list[list[int]] = []
    faces: list[list[int]] = []
    center = None
    references = []

    for number, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = body.split()
        if not tokens:
            continue
        column = len(body) - len(body.lstrip()) + 1
        tag, values = tokens[0], tokens[1:]
        if tag not in _ARITY:
            raise ObjectParseError(f"unknown directive {tag!r}", number, column)
        if len(values) not in _ARITY[tag]:
            raise ObjectParseError(f"{tag!r} takes {' or '.join(map(str, _ARITY[tag]))} values", number, column)

        parse = float if tag in ("v", "c") else int
        parsed = []
        for value in values:
            try:
                parsed.append(parse(value))
            except ValueError:
                raise ObjectParseError(f"bad number {value!r}", number, body.index(value) + 1) from None

        if tag == "v":
            if vertices and len(parsed) != len(vertices[0]):
                raise ObjectParseError("vertices mix 2D and 3D", number, column)
            vertices.append(parsed)
        elif tag == "c":
            if center is not None:
                raise ObjectParseError("center given twice", number, column)
            center = parsed
        else:
            (edges if tag == "e" else faces).append([k - 1 for k in parsed])
            references.append((number, column, parsed))

    if not vertices:
        raise ObjectParseError("the object has no vertices")
    for number, column, indices in references:
        if min(indices) < 1 or max(indices) > len(vertices):
            raise ObjectParseError(f"vertex index out of range 1..{len(vertices)}", number, column)
    if center is not None and len(center) != len(vertices[0]):
        raise ObjectParseError("center dimension differs from the vertices")
    if faces and len(vertices[0]) != 3:
        raise ObjectParseError("faces are only allowed on 3D objects")

    return RigidObject.create(vertices, edges or None, faces or None, center)


def format_object(obj: RigidObject) -> str:
    """Body-frame object text; the center is the origin, so it is written explicitly."""

    def numbers(values) -> str:
        return " ".join(repr(float(v)) for v in values)

    lines = [f"v {numbers(vertex)}" for vertex in obj.vertices]
    lines += [f"e {a + 1} {b + 1}" for a, b in obj.edges.reshape(-1, 2)]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in obj.faces.reshape(-1, 3)]
    lines.append(f"c {numbers([0.0] * obj.dim)}")
    return "\n".join(lines) + "\n"


def load_object(path: Path) -> RigidObject:
    logger.debug("reading object %s", path)
    return parse_object(Path(path).read_text())


def save_object(obj: RigidObject, path: Path) -> None:
    Path(path).write_text(format_object(obj))
