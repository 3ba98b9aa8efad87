"""
Roadmap container layout (all integers little-endian):

    b"PTRM" | u16 version | sections...
    section = 4-byte tag | u32 payload length | payload

Sections are `META` (parameters and seeds), `COAR` (the coarse graph) and one `DENS` per object, in fingerprint
order. Payloads are canonical JSON, so floats round-trip exactly and saving a loaded roadmap reproduces its bytes.
"""

from __future__ import annotations

import json
import logging
import struct
from pathlib import Path
from typing_extensions import Any, Iterator

from pydantic import ValidationError

from ..decompose import CoarseGraph, DecomposeParams
from ..densegraph import DenseGraph
from ..errors import RoadmapFormatError, UnknownRoadmapVersion
from ..geometry import SceneFingerprint
from ..roadmap import Roadmap

logger = logging.getLogger(__name__)

MAGIC = b"PTRM"
ROADMAP_VERSION = 1
META, COARSE, DENSE = b"META", b"COAR", b"DENS"

_HEADER = struct.Struct("<4sH")
_SECTION = struct.Struct("<4sI")


def _canonical(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def _section(tag: bytes, payload: Any) -> bytes:
    body = _canonical(payload)
    return _SECTION.pack(tag, len(body)) + body


def dump_roadmap(roadmap: Roadmap) -> bytes:
    meta = {
        "scene": roadmap.id.root,
        "decompose": roadmap.decompose_params.model_dump(mode="json"),
        "seed": roadmap.decompose_params.seed,
        "objects": sorted(roadmap.dense),
    }
    parts = [_HEADER.pack(MAGIC, ROADMAP_VERSION), _section(META, meta)]
    parts.append(_section(COARSE, roadmap.coarse.model_dump(mode="json")))
    for key in sorted(roadmap.dense):
        parts.append(_section(DENSE, {"key": key, "graph": roadmap.dense[key].model_dump(mode="json")}))
    return b"".join(parts)


def _sections(data: bytes) -> Iterator[tuple[bytes, Any]]:
    offset = _HEADER.size
    while offset < len(data):
        if offset + _SECTION.size > len(data):
            raise RoadmapFormatError("truncated section header")
        tag, length = _SECTION.unpack_from(data, offset)
        offset += _SECTION.size
        if offset + length > len(data):
            raise RoadmapFormatError(f"section {tag!r} is truncated")
        try:
            payload = json.loads(data[offset : offset + length])
        except ValueError as error:
            raise RoadmapFormatError(f"section {tag!r} is corrupt: {error}") from error
        offset += length
        yield tag, payload


def parse_roadmap(data: bytes) -> Roadmap:
    """
    Raises:
        RoadmapFormatError: The data is not a roadmap, or a section is damaged.
        UnknownRoadmapVersion: The roadmap was written by an unknown format version.
    """

    if len(data) < _HEADER.size:
        raise RoadmapFormatError("not a roadmap file: too short")
    magic, version = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise RoadmapFormatError("not a roadmap file: bad magic")
    if version != ROADMAP_VERSION:
        raise UnknownRoadmapVersion(
            f"roadmap format version {version} is not supported (this build reads version {ROADMAP_VERSION})"
        )

    meta, coarse, dense = None, None, {}
    try:
        for tag, payload in _sections(data):
            if tag == META:
                meta = payload
            elif tag == COARSE:
                coarse = CoarseGraph.model_validate(payload)
            elif tag == DENSE:
                graph = DenseGraph.model_validate(payload["graph"])
                if graph.fingerprint.root != payload["key"]:
                    logger.warning("dropping dense graph %s: its object does not match", payload["key"][:12])
                    continue
                dense[payload["key"]] = graph
            else:
                logger.warning("skipping unknown roadmap section %r", tag)
    except (ValidationError, KeyError, TypeError) as error:
        raise RoadmapFormatError(f"roadmap content is invalid: {error}") from error

    if meta is None or coarse is None:
        raise RoadmapFormatError("roadmap is missing its META or COAR section")
    scene = SceneFingerprint(meta["scene"])
    if coarse.scene.fingerprint() != scene:
        raise RoadmapFormatError("the coarse graph does not belong to the recorded scene")
    return Roadmap(
        id=scene,
        coarse=coarse,
        decompose_params=DecomposeParams.model_validate(meta["decompose"]),
        dense=dense,
    )


def save_roadmap(roadmap: Roadmap, path: Path) -> None:
    Path(path).write_bytes(dump_roadmap(roadmap))
    logger.info("roadmap written to %s (%d dense graphs)", path, len(roadmap.dense))


def load_roadmap(path: Path) -> Roadmap:
    return parse_roadmap(Path(path).read_bytes())
