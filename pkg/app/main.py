# app/main.py
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from app.commands import examples, frenet, surface, validate, volume
from app.commands.common import SCHEMA_HINT
from app.utils.errors import (
    DegenerateFrame,
    DomainError,
    ExprSyntaxError,
    MarchingHypothesisError,
    SchemaError,
    SingularTangentSpace,
    WrongVariant,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# Checked in order; the first matching class decides the exit code.
ERROR_EXIT_CODES = (
    ((SchemaError, ExprSyntaxError, WrongVariant, MarchingHypothesisError), EXIT_USAGE),
    ((DegenerateFrame, SingularTangentSpace, DomainError), EXIT_NUMERIC),
    ((ValueError, OSError), EXIT_USAGE),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isogeo4",
        description="Isogeodesic hypersurface families in R^4: Frenet frames, validation, meshes.",
        epilog=SCHEMA_HINT + " Environment: ISOGEO4_THREADS (0 = one worker per CPU), LOG_LEVEL.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for command in (frenet, validate, surface, volume, examples):
        command.register(subparsers)
    return parser


def _configure_logging() -> None:
    load_dotenv()
    level = os.getenv("LOG_LEVEL", "INFO").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format="%(asctime)s %(levelname)s %(message)s")


def exit_code_for(exc: BaseException) -> Optional[int]:
    for classes, code in ERROR_EXIT_CODES:
        if isinstance(exc, classes):
            return code
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        return int(args.handler(args))
    except Exception as exc:  # noqa: BLE001
        code = exit_code_for(exc)
        if code is None:
            raise
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
