from __future__ import annotations

import argparse
import json
import logging
from typing import Optional

from app.commands.common import SCHEMA_HINT, add_source_arguments, load_source, parse_number_list, positive_int, report
from app.config import Config
from app.geometry.conditions import ConditionReport, check_conditions
from app.geometry.validator import Thresholds, anchor_grid, sweep_anchor, sweep_table, validate
from app.utils.errors import MarchingHypothesisError
from app.utils.export_utils import write_csv

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "validate",
        help="check that the curve is an isogeodesic of the family",
        description="Validate the family numerically; exit 0 on pass, 1 on fail. " + SCHEMA_HINT,
    )
    add_source_arguments(parser)
    parser.add_argument("--samples", type=positive_int, default=Config.DEFAULT_SAMPLES, help="s-samples (default: %(default)s)")
    parser.add_argument("--eps-zero", type=float, default=Config.EPS_ZERO, help="tolerance for vanishing quantities (default: %(default)s)")
    parser.add_argument("--eps-nonzero", type=float, default=Config.EPS_NONZERO, help="base lower bound for |phi2|, scaled by 1 + max partial (default: %(default)s)")
    parser.add_argument("--collinearity-tol", type=float, default=Config.COLLINEARITY_TOL, help="max 1 - |cos(normal, N)| (default: %(default)s)")
    parser.add_argument("--tangential-tol", type=float, default=Config.TANGENTIAL_TOL, help="max tangential part of r'' (default: %(default)s)")
    parser.add_argument("--sweep-t0", metavar="LIST", help="sweep the anchor over these t0 values (default: the family's t0)")
    parser.add_argument("--sweep-q0", metavar="LIST", help="sweep the anchor over these q0 values (default: the family's q0)")
    parser.add_argument("--conditions", action="store_true", help="also print the per-type condition report")
    parser.add_argument("--json", action="store_true", help="print the report as JSON instead of a summary line")
    parser.add_argument("--out", metavar="PATH", help="report CSV path (default: scene [output].report, else none)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    source = load_source(args)
    family = source.family
    thresholds = Thresholds(
        eps_zero=args.eps_zero,
        eps_nonzero=args.eps_nonzero,
        collinearity=args.collinearity_tol,
        tangential=args.tangential_tol,
    )
    out = source.output("report", args.out)

    if args.sweep_t0 or args.sweep_q0:
        t_values = parse_number_list(args.sweep_t0) if args.sweep_t0 else [family.params.t0]
        q_values = parse_number_list(args.sweep_q0) if args.sweep_q0 else [family.params.q0]
        rows = sweep_anchor(family, anchor_grid(t_values, q_values), args.samples, thresholds)
        table = sweep_table(rows)
        if out:
            write_csv(table, out)
        if args.json:
            print(json.dumps([{"t0": r.t0, "q0": r.q0, **r.report.to_dict()} for r in rows], indent=2))
        else:
            for row in rows:
                report(f"t0={row.t0:g} q0={row.q0:g}: {row.report.summary_line()}")
        return 0 if all(row.passed for row in rows) else 1

    result = validate(family, args.samples, thresholds)
    if out:
        write_csv(result.table(), out)
    conditions: Optional[ConditionReport] = None
    not_applicable: Optional[str] = None
    if args.conditions:
        try:
            conditions = check_conditions(family, args.samples, args.eps_zero, args.eps_nonzero)
        except MarchingHypothesisError as exc:
            logger.warning("validate: type conditions not applicable: %s", exc)
            not_applicable = str(exc)

    if args.json:
        document = result.to_dict()
        if not_applicable is not None:
            document["conditions"] = {"applicable": False, "reason": not_applicable}
        elif conditions is not None:
            document["conditions"] = {"applicable": True, **conditions.to_dict()}
        print(json.dumps(document, indent=2))
        return 0 if result.passed else 1

    report(result.summary_line())
    if not_applicable is not None:
        report(f"conditions: not applicable ({not_applicable})")
    elif conditions is not None:
        report(conditions.summary_line())
        for entry in conditions.entries:
            report(f"  {entry.describe()}")
    return 0 if result.passed else 1
