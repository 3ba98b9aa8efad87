from .object_file import format_object, load_object, parse_object, save_object
from .plan_file import PLAN_SCHEMA_VERSION, format_plan, load_plan, parse_plan, save_plan
from .render import RenderSummary, render, render_mesh, render_svg
from .roadmap_file import MAGIC, ROADMAP_VERSION, dump_roadmap, load_roadmap, parse_roadmap, save_roadmap
from .scene_file import SCENE_SCHEMA_VERSION, format_scene, load_scene, parse_scene, save_scene, split_l_polygon

__all__ = [
    "MAGIC",
    "PLAN_SCHEMA_VERSION",
    "ROADMAP_VERSION",
    "SCENE_SCHEMA_VERSION",
    "RenderSummary",
    "dump_roadmap",
    "format_object",
    "format_plan",
    "format_scene",
    "load_object",
    "load_plan",
    "load_roadmap",
    "load_scene",
    "parse_object",
    "parse_plan",
    "parse_roadmap",
    "parse_scene",
    "render",
    "render_mesh",
    "render_svg",
    "save_object",
    "save_plan",
    "save_roadmap",
    "save_scene",
    "split_l_polygon",
]
