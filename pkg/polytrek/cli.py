"""
Command-line tool. Scenes and objects are files, or built-in fixtures written `fixture:<name>`
(`fixture:2d-corner`, `fixture:stick`, ...).

    polytrek decompose SCENE -o ROADMAP
    polytrek build ROADMAP OBJECT
    polytrek plan ROADMAP OBJECT --start X Y R --goal X Y R -o PLAN
    polytrek render SCENE -o OUT [--roadmap ROADMAP] [--plan PLAN --object OBJECT]
    polytrek bench [SCENE] [--object OBJECT] [-o RESULTS]
    polytrek info ROADMAP
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing_extensions import Callable, Optional, Sequence

from pydantic import ValidationError

from .bench import OBJECTS, SCENES, Fixture, validate_path
from .bench.scaling import BenchConfig, scaling_suite
from .decompose import DecomposeParams, decompose
from .densegraph import BuildParams, build_dense_graph
from .eda import Command, LoggingSubscriber
from .errors import PlanRejected, PolytrekError
from .geometry import Configuration, RigidObject, Scene
from .io import load_object, load_plan, load_roadmap, load_scene, render, save_plan, save_roadmap
from .query import Planner, QueryParams
from .roadmap import Roadmap
from .settings import override

logger = logging.getLogger(__name__)

FIXTURE_PREFIX = "fixture:"


class DecomposeCommand(Command):
    scene: str
    out: Path
    params: DecomposeParams


class BuildCommand(Command):
    roadmap: Path
    obj: str
    out: Optional[Path] = None
    params: BuildParams
    resume: bool = False


class PlanCommand(Command):
    roadmap: Path
    obj: str
    start: Configuration
    goal: Configuration
    out: Path
    params: QueryParams


class RenderCommand(Command):
    scene: str
    out: Path
    roadmap: Optional[Path] = None
    plan: Optional[Path] = None
    obj: Optional[str] = None


class BenchCommand(Command):
    scene: str = "fixture:2d-bugtrap"
    obj: str = "fixture:stick"
    config: BenchConfig
    out: Optional[Path] = None


class InfoCommand(Command):
    roadmap: Path


def _fixture_name(spec: str) -> Optional[str]:
    return spec[len(FIXTURE_PREFIX) :] if spec.startswith(FIXTURE_PREFIX) else None


def load_scene_spec(spec: str) -> Scene:
    name = _fixture_name(spec)
    if name is None:
        return load_scene(Path(spec))
    if name not in SCENES:
        raise PolytrekError(f"unknown scene fixture {name!r}; choose one of {', '.join(SCENES)}")
    return SCENES[name]().scene


def load_object_spec(spec: str) -> RigidObject:
    name = _fixture_name(spec)
    if name is None:
        return load_object(Path(spec))
    if name not in OBJECTS:
        raise PolytrekError(f"unknown object fixture {name!r}; choose one of {', '.join(OBJECTS)}")
    return OBJECTS[name]()


def _variants(spec: str) -> Callable[..., Fixture]:
    """Scene variants for the scaling suite: the bugtrap narrows its slot, other scenes only scale."""

    name = _fixture_name(spec)
    if name == "2d-bugtrap":
        return SCENES[name]
    if name is not None and name in SCENES:
        base = SCENES[name]()
    else:
        raise PolytrekError("the scaling suite needs a fixture scene, since files carry no default query")

    def scaled(scale: float = 1.0, corridor: float = 1.0) -> Fixture:
        if corridor != 1.0:
            logger.warning("%s has no corridor parameter; width multiplier %g ignored", base.name, corridor)
        return base.model_copy(
            update={
                "scene": base.scene.scaled(scale),
                "start": Configuration(p=base.start.p * scale, rot_index=base.start.rot_index),
                "goal": Configuration(p=base.goal.p * scale, rot_index=base.goal.rot_index),
            }
        )

    return scaled


def cmd_decompose(command: DecomposeCommand) -> int:
    scene = load_scene_spec(command.scene)
    started = time.perf_counter()
    coarse = decompose(scene, command.params)
    elapsed = time.perf_counter() - started
    save_roadmap(Roadmap.create(coarse, command.params), command.out)
    print(f"coverage: {coarse.coverage:.4f}")
    print(f"polytopes: {coarse.n_polytopes}")
    print(f"edges: {len(coarse.edge_list)}")
    print(f"elapsed: {elapsed:.2f} s")
    return 0


def cmd_build(command: BuildCommand) -> int:
    roadmap = load_roadmap(command.roadmap)
    obj = load_object_spec(command.obj)
    previous = roadmap.dense_for(obj) if command.resume and roadmap.has_dense(obj) else None
    started = time.perf_counter()
    dense = build_dense_graph(roadmap.coarse, obj, command.params, previous=previous)
    elapsed = time.perf_counter() - started
    roadmap.add_dense(dense)
    save_roadmap(roadmap, command.out or command.roadmap)
    stats = dense.stats
    print(f"object: {dense.fingerprint.root[:12]}")
    print(f"patches: {stats.patches}")
    print(f"traversal problems: {stats.problems}")
    print(f"milp solves: {stats.milp_solves} (fast path {stats.fast_path}, pruned {stats.pruned})")
    print(f"certified edges: {stats.certified}")
    print(f"infeasible: {stats.infeasible}, unverified: {stats.unverified}")
    print(f"elapsed: {elapsed:.2f} s")
    return 0


def cmd_plan(command: PlanCommand) -> int:
    roadmap = load_roadmap(command.roadmap)
    obj = load_object_spec(command.obj)
    planner = Planner.from_roadmap(roadmap, obj, command.params)
    motion = planner.plan(command.start, command.goal)
    report = validate_path(motion, roadmap.coarse.scene, obj, planner.dense.table)
    print(f"online time: {planner.last_elapsed_ms:.1f} ms")
    print(f"waypoints: {len(motion.waypoints())}")
    print(f"cost: {motion.cost:.4f}")
    print(f"validation: {'pass' if report.passed else 'FAIL'}")
    if not report.passed:
        raise PlanRejected(f"plan not saved: penetration {report.penetration:.3g}, exit depth {report.exit_depth:.3g}")
    save_plan(motion, obj.dim, command.out)
    return 0


def cmd_render(command: RenderCommand) -> int:
    scene = load_scene_spec(command.scene)
    coarse = table = obj = motion = None
    if command.roadmap is not None:
        roadmap = load_roadmap(command.roadmap)
        coarse = roadmap.coarse
        if command.obj is not None:
            obj = load_object_spec(command.obj)
            table = roadmap.dense_for(obj).table
    if command.plan is not None:
        if obj is None:
            raise PolytrekError("rendering a plan needs --roadmap and --object")
        motion = load_plan(command.plan)
    summary = render(scene, command.out, coarse, motion, obj, table)
    print(
        f"drawn: {summary.obstacles} obstacles, {summary.polytopes} polytopes, {summary.adjacencies} adjacencies, "
        f"{summary.sweeps} sweeps"
    )
    return 0


def cmd_bench(command: BenchCommand) -> int:
    base = _variants(command.scene)
    obj = load_object_spec(command.obj)
    table = scaling_suite(base, obj, command.config)
    sys.stdout.write(table.to_text())
    if command.out is not None:
        command.out.write_text(table.to_json())
    return 0


def cmd_info(command: InfoCommand) -> int:
    roadmap = load_roadmap(command.roadmap)
    coarse = roadmap.coarse
    print(f"scene: {roadmap.id.root[:12]} ({coarse.scene.dim}D, {len(coarse.scene.obstacles)} obstacles)")
    print(f"polytopes: {coarse.n_polytopes}, edges: {len(coarse.edge_list)}, coverage: {coarse.coverage:.4f}")
    params = roadmap.decompose_params
    print(f"decompose: n_v={params.n_v} n_s={params.n_s} alpha={params.alpha} seed={params.seed}")
    for key, dense in sorted(roadmap.dense.items()):
        stats = dense.stats
        print(
            f"object {key[:12]}: {stats.patches} patches, {stats.certified} edges, {stats.problems} problems, "
            f"{stats.unverified} unverified"
        )
    return 0


HANDLERS: dict[type[Command], Callable[..., int]] = {
    DecomposeCommand: cmd_decompose,
    BuildCommand: cmd_build,
    PlanCommand: cmd_plan,
    RenderCommand: cmd_render,
    BenchCommand: cmd_bench,
    InfoCommand: cmd_info,
}


def _configuration(values: Optional[Sequence[float]]) -> Optional[dict]:
    if values is None:
        return None
    *p, rot = values
    if float(rot) != int(rot):
        raise PolytrekError(f"rotation index must be an integer, got {rot}")
    return {"p": list(p), "rot_index": int(rot)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")
    common.add_argument("--eps", type=float, default=None, help="containment tolerance")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="polytrek", description=__doc__.splitlines()[1])
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("decompose", parents=[common], help="cover a scene with convex polytopes")
    sub.add_argument("scene")
    sub.add_argument("-o", "--out", type=Path, required=True)
    sub.add_argument("--n-v", type=int, default=DecomposeParams().n_v)
    sub.add_argument("--n-s", type=int, default=DecomposeParams().n_s)
    sub.add_argument("--alpha", type=float, default=DecomposeParams().alpha)

    sub = commands.add_parser("build", parents=[common], help="build the dense graph of an object")
    sub.add_argument("roadmap", type=Path)
    sub.add_argument("object")
    sub.add_argument("-o", "--out", type=Path, default=None)
    sub.add_argument("--n-t", type=int, default=BuildParams().n_t)
    sub.add_argument("--n-r", type=int, default=None)
    sub.add_argument("--waypoints", type=int, default=0)
    sub.add_argument("--retry", action=argparse.BooleanOptionalAction, default=True)
    sub.add_argument("--resume", action="store_true", help="retry only the unverified pairs of a stored graph")

    sub = commands.add_parser("plan", parents=[common], help="answer a query")
    sub.add_argument("roadmap", type=Path)
    sub.add_argument("object")
    sub.add_argument("--start", type=float, nargs="+", required=True, metavar="X")
    sub.add_argument("--goal", type=float, nargs="+", required=True, metavar="X")
    sub.add_argument("-o", "--out", type=Path, required=True)
    sub.add_argument("--k", type=int, default=QueryParams().k)
    sub.add_argument("--waypoints", type=int, default=0)
    sub.add_argument("--retry", action=argparse.BooleanOptionalAction, default=True)

    sub = commands.add_parser("render", parents=[common], help="draw a scene, cover and plan")
    sub.add_argument("scene")
    sub.add_argument("-o", "--out", type=Path, required=True)
    sub.add_argument("--roadmap", type=Path, default=None)
    sub.add_argument("--plan", type=Path, default=None)
    sub.add_argument("--object", default=None)

    sub = commands.add_parser("bench", parents=[common], help="run the scaling comparison")
    sub.add_argument("scene", nargs="?", default=f"{FIXTURE_PREFIX}2d-bugtrap")
    sub.add_argument("--object", default=f"{FIXTURE_PREFIX}stick")
    sub.add_argument("-o", "--out", type=Path, default=None)
    sub.add_argument("--factors", type=float, nargs="+", default=list(BenchConfig().factors))
    sub.add_argument("--shrink", type=float, nargs="+", default=list(BenchConfig().corridor_shrink))
    sub.add_argument("--trials", type=int, default=BenchConfig().trials)
    sub.add_argument("--n-v", type=int, default=DecomposeParams().n_v)
    sub.add_argument("--n-t", type=int, default=BuildParams().n_t)
    sub.add_argument("--n-r", type=int, default=None)

    sub = commands.add_parser("info", parents=[common], help="summarize a roadmap")
    sub.add_argument("roadmap", type=Path)
    return parser


def to_command(args: argparse.Namespace) -> Command:
    """
    Raises:
        ValidationError: A flag value is out of range.
    """

    if args.command == "decompose":
        params = DecomposeParams(n_v=args.n_v, n_s=args.n_s, alpha=args.alpha, seed=args.seed)
        return DecomposeCommand(scene=args.scene, out=args.out, params=params)
    if args.command == "build":
        params = BuildParams(n_t=args.n_t, n_r=args.n_r, waypoints=args.waypoints, retry=args.retry)
        return BuildCommand(roadmap=args.roadmap, obj=args.object, out=args.out, params=params, resume=args.resume)
    if args.command == "plan":
        params = QueryParams(k=args.k, waypoints=args.waypoints, retry=args.retry)
        return PlanCommand(
            roadmap=args.roadmap,
            obj=args.object,
            start=_configuration(args.start),
            goal=_configuration(args.goal),
            out=args.out,
            params=params,
        )
    if args.command == "render":
        return RenderCommand(scene=args.scene, out=args.out, roadmap=args.roadmap, plan=args.plan, obj=args.object)
    if args.command == "bench":
        config = BenchConfig(
            factors=tuple(args.factors),
            corridor_shrink=tuple(args.shrink),
            trials=args.trials,
            seed=args.seed,
            decompose=DecomposeParams(n_v=args.n_v, seed=args.seed),
            build=BuildParams(n_t=args.n_t, n_r=args.n_r),
        )
        return BenchCommand(scene=args.scene, obj=args.object, config=config, out=args.out)
    return InfoCommand(roadmap=args.roadmap)


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    try:
        command = to_command(args)
        settings = {"jobs": args.jobs} if args.eps is None else {"jobs": args.jobs, "eps": args.eps}
        with override(**settings), LoggingSubscriber().attached():
            return HANDLERS[type(command)](command)
    except PolytrekError as error:
        logger.error("%s", error)
        return error.exit_code
    except ValidationError as error:
        logger.error("invalid arguments: %s", error)
        return 1
    except OSError as error:
        logger.error("%s", error)
        return 1


if __name__ == "__main__":
    sys.exit(main())
