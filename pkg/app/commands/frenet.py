from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, List

from app.commands.common import SCHEMA_HINT, add_source_arguments, load_source, parse_number_list, positive_int, report
from app.config import Config
from app.geometry.curve import check_arclength, frenet_apparatus, frenet_residuals
from app.utils.errors import DegenerateFrame, DomainError
from app.utils.export_utils import Table, write_csv

logger = logging.getLogger(__name__)

VECTOR_COLUMNS = [f"{name}_{i}" for name in ("T", "N", "B1", "B2") for i in range(1, 5)]
RESIDUAL_COLUMNS = ["third_residual", "fourth_residual", "ode_residual"]

NUMERIC_FAILURES = (DegenerateFrame, DomainError)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "frenet",
        help="Frenet frame and curvatures along the curve",
        description="Write one CSV row (s, T, N, B1, B2, k1, k2, k3) per sample. " + SCHEMA_HINT,
    )
    add_source_arguments(parser, anchors=False)
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--samples", type=positive_int, default=Config.DEFAULT_SAMPLES, help="uniform samples over the s-range (default: %(default)s)")
    group.add_argument("--s", dest="s_list", metavar="LIST", help="explicit comma-separated s values, e.g. 0,pi/2")
    parser.add_argument("--residuals", action="store_true", help="add r''' / r'''' reconstruction and Frenet-equation residual columns")
    parser.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    source = load_source(args)
    curve = source.family.curve
    s_values = parse_number_list(args.s_list) if args.s_list else curve.samples(args.samples).tolist()
    lo, hi = curve.domain
    outside = [s for s in s_values if not lo <= s <= hi]
    if outside:
        raise ValueError(f"--s value {outside[0]:g} lies outside the s-range [{lo:g}, {hi:g}]")

    header = ["s", *VECTOR_COLUMNS, "k1", "k2", "k3", "k2_degenerate", "status"]
    if args.residuals:
        header += RESIDUAL_COLUMNS

    rows: List[List[Any]] = []
    failures: List[str] = []
    for s in s_values:
        try:
            app = frenet_apparatus(curve, s)
        except NUMERIC_FAILURES as exc:
            logger.warning("frenet: s=%.6g: %s", s, exc)
            failures.append(str(exc))
            rows.append([s, *([""] * (len(header) - 2)), f"degenerate: {exc}"])
            continue
        row: List[Any] = [s, *(value for vector in app.frame.vectors() for value in vector)]
        row += [app.k1, app.k2, app.k3, app.k2_degenerate, "ok"]
        if args.residuals:
            residuals = frenet_residuals(curve, s)
            row += [residuals.third_derivative, residuals.fourth_derivative, residuals.ode_max]
        rows.append(row)

    to_stdout = not args.out
    write_csv(Table(header, rows), sys.stdout if to_stdout else args.out)

    if s_values and len(failures) == len(s_values):
        report(f"frenet: every sample is degenerate: {failures[0]}", to_stderr=True)
        return 3
    deviation = check_arclength(curve, tol=Config.FRAME_TOL)
    report(
        f"frenet: {len(rows)} rows, {len(failures)} degenerate, max |‖r'‖ - 1| = {deviation:.3e}",
        to_stderr=to_stdout,
    )
    return 0
