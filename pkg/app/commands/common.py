"""Argument helpers shared by the subcommands."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.config import Config
from app.geometry.family import HypersurfaceFamily
from app.services.builtin_store import builtin_store
from app.services.scene_store import Scene, load_scene_file
from app.utils.expr import parse_constant

logger = logging.getLogger(__name__)

SCHEMA_HINT = f"Scene file schema: {Config.SCENE_SCHEMA_DOC}."


@dataclass(frozen=True)
class Source:
    family: HypersurfaceFamily
    scene: Optional[Scene] = None

    def output(self, key: str, override: Optional[str]) -> Optional[str]:
        """Explicit flag first, then the scene's [output] entry."""
        if override:
            return override
        if self.scene is not None:
            return self.scene.outputs.get(key)
        return None


def add_source_arguments(parser: argparse.ArgumentParser, *, anchors: bool = True) -> None:
    parser.add_argument("scene", nargs="?", help="scene TOML file")
    parser.add_argument("--builtin", metavar="NAME", help="use a built-in family instead of a scene file (see `examples`)")
    if anchors:
        parser.add_argument("--t0", type=float, default=None, help="override the anchor t0")
        parser.add_argument("--q0", type=float, default=None, help="override the anchor q0")


def load_source(args: argparse.Namespace) -> Source:
    if bool(args.scene) == bool(args.builtin):
        raise ValueError("give either a scene file or --builtin NAME")
    if args.builtin:
        source = Source(builtin_store.get(args.builtin))
    else:
        scene = load_scene_file(args.scene)
        source = Source(scene.family, scene)
    t0 = getattr(args, "t0", None)
    q0 = getattr(args, "q0", None)
    if t0 is not None or q0 is not None:
        source = Source(source.family.with_anchor(t0=t0, q0=q0), source.scene)
    return source


def parse_number_list(text: str) -> List[float]:
    """Comma-separated constants, e.g. ``0,pi/2,pi``."""
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        raise ValueError(f"malformed number list {text!r}")
    return [parse_constant(item) for item in items]


def parse_fix(text: str) -> Tuple[str, float]:
    """``q=0.125`` -> ("q", 0.125)."""
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or name not in ("s", "t", "q") or not value.strip():
        raise ValueError(f"--fix expects s=VALUE, t=VALUE or q=VALUE, got {text!r}")
    return name, parse_constant(value.strip())


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def report(message: str, *, to_stderr: bool = False) -> None:
    """Human-readable result line. Goes to stderr when stdout carries data."""
    print(message, file=sys.stderr if to_stderr else sys.stdout)
