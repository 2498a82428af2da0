from __future__ import annotations

import argparse

from app.commands.common import report
from app.services.builtin_store import builtin_store


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "examples",
        help="list the built-in families",
        description="List every family addressable with --builtin NAME.",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    for entry in builtin_store.entries():
        family = entry.family
        lo, hi = family.curve.domain
        t_lo, t_hi = family.params.t_domain
        q_lo, q_hi = family.params.q_domain
        expected = "isogeodesic" if entry.expected_pass else "negative case"
        report(
            f"{entry.name:<18} type {family.marching.kind:<7} t0={family.params.t0:g} q0={family.params.q0:g} "
            f"s=[{lo:.6g}, {hi:.6g}] t=[{t_lo:g}, {t_hi:g}] q=[{q_lo:g}, {q_hi:g}]  {expected}: {entry.description}"
        )
    return 0
