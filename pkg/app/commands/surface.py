from __future__ import annotations

import argparse
import logging
import sys

from app.commands.common import SCHEMA_HINT, add_source_arguments, load_source, parse_fix, positive_int, report
from app.config import Config
from app.geometry.projection import GridSpec, check_fixed, slice_to_mesh
from app.utils.errors import DomainError
from app.utils.export_utils import write_obj
from app.utils.linalg4 import AXES

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "surface",
        help="mesh a 2-parameter slice of the family as OBJ",
        description="Fix one parameter, project by dropping one axis and write an OBJ mesh "
        "with the isogeodesic as a polyline. " + SCHEMA_HINT,
    )
    add_source_arguments(parser)
    parser.add_argument("--fix", metavar="P=VALUE", help="fixed parameter, e.g. q=0.125 (default: scene [grid])")
    parser.add_argument("--drop", choices=AXES, default=None, help="coordinate to drop (default: scene [grid].drop, else w)")
    parser.add_argument("--n-s", type=positive_int, default=Config.SLICE_GRID[0], help="samples along s (default: %(default)s)")
    parser.add_argument("--n-free", type=positive_int, default=Config.SLICE_GRID[1], help="samples along the other free parameter (default: %(default)s)")
    parser.add_argument("--out", metavar="PATH", help="OBJ output path (default: scene [output].mesh, else stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    source = load_source(args)
    family = source.family
    scene = source.scene

    if args.fix:
        name, value = parse_fix(args.fix)
        grid = GridSpec.slice(name, value, n_s=args.n_s, n_free=args.n_free)
    elif scene is not None and scene.grid.fixed is not None:
        grid = scene.grid
    else:
        raise ValueError("surface needs --fix P=VALUE or a scene with [grid].fix")
    axis = args.drop or (scene.axis if scene is not None else "w")

    fixed_name, fixed_value = grid.fixed  # type: ignore[misc]
    try:
        check_fixed(family, fixed_name, fixed_value)
    except DomainError as exc:
        raise ValueError(str(exc)) from exc

    mesh = slice_to_mesh(family, grid, axis)
    out = source.output("mesh", args.out)
    write_obj(mesh, out or sys.stdout)
    report(
        f"surface: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, "
        f"polyline {mesh.marked_polyline.size} ({fixed_name}={fixed_value:g}, drop {axis})"
        + (f" -> {out}" if out else ""),
        to_stderr=not out,
    )
    return 0
