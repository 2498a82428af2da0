from __future__ import annotations

import argparse
import logging
import sys

from app.commands.common import SCHEMA_HINT, add_source_arguments, load_source, positive_int, report
from app.config import Config
from app.geometry.projection import GridSpec, sample_volume
from app.utils.export_utils import write_csv
from app.utils.linalg4 import AXES

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "volume",
        help="sample the projected family on an (s, t, q) grid as CSV",
        description="Write rows (s, t, q, X, Y, Z) with s outermost and q innermost. " + SCHEMA_HINT,
    )
    add_source_arguments(parser)
    parser.add_argument("--drop", choices=AXES, default=None, help="coordinate to drop (default: scene [grid].drop, else w)")
    parser.add_argument("--n-s", type=positive_int, default=None, help=f"samples along s (default: {Config.VOLUME_GRID[0]})")
    parser.add_argument("--n-t", type=positive_int, default=None, help=f"samples along t (default: {Config.VOLUME_GRID[1]})")
    parser.add_argument("--n-q", type=positive_int, default=None, help=f"samples along q (default: {Config.VOLUME_GRID[2]})")
    parser.add_argument("--out", metavar="PATH", help="CSV output path (default: scene [output].table, else stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    source = load_source(args)
    scene = source.scene
    base = scene.grid if scene is not None and scene.grid.fixed is None else GridSpec.volume()
    grid = GridSpec(
        n_s=args.n_s or base.n_s,
        n_t=args.n_t or base.n_t,
        n_q=args.n_q or base.n_q,
    )
    axis = args.drop or (scene.axis if scene is not None else "w")

    volume = sample_volume(source.family, grid, axis)
    out = source.output("table", args.out)
    write_csv(volume.table(), out or sys.stdout)
    report(
        f"volume: {len(volume)} samples ({grid.n_s}x{grid.n_t}x{grid.n_q}, drop {axis})" + (f" -> {out}" if out else ""),
        to_stderr=not out,
    )
    return 0
