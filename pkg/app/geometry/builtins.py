"""Worked example families and their documented negative mutations.

The expression strings below are the same ones the shipped scene files in
``data/scenes`` use, so a scene loaded from disk compares equal to its
built-in counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Tuple

from app.geometry.curve import Curve4
from app.geometry.family import FamilyParams, HypersurfaceFamily, marching_from_strings


@dataclass(frozen=True)
class BuiltinEntry:
    name: str
    family: HypersurfaceFamily
    description: str
    expected_pass: bool = True


HELIX: Tuple[str, str, str, str] = ("0.5*cos(s)", "0.5*sin(s)", "0.5*s", "sqrt(2)/2*s")

CIRCLE_HELIX: Tuple[str, str, str, str] = ("0.5*sin(s)", "0.5*cos(s)", "0", "sqrt(3)/2*s")

EXAMPLE1_MARCHING: Dict[str, str] = {
    "l": "1",
    "m": "1",
    "n": "1",
    "p": "1",
    "U": "(t - t0)*(q - q0)",
    "V": "0",
    "W": "t - t0",
    "X": "q - q0",
}

EXAMPLE2_MARCHING: Dict[str, str] = {
    "l": "1",
    "m": "1",
    "n": "s + t + 1",
    "p": "(s + 1)*(t - t0)",
    "U": "0",
    "V": "0",
    "W": "q - q0",
    "X": "1",
}

EXAMPLE3_MARCHING: Dict[str, str] = {
    "l": "1",
    "m": "1",
    "n": "sin(s*(q - q0))",
    "p": "s*q^2",
    "U": "0",
    "V": "0",
    "W": "1",
    "X": "t - t0",
}


def _family(
    name: str,
    components: Tuple[str, str, str, str],
    s_range: Tuple[str, str],
    kind: str,
    marching: Mapping[str, str],
    t0: float,
    q0: float,
) -> HypersurfaceFamily:
    return HypersurfaceFamily(
        curve=Curve4.from_strings(components, s_range),
        marching=marching_from_strings(kind, marching),
        params=FamilyParams(t0=t0, q0=q0, t_domain=(0.0, 1.0), q_domain=(0.0, 1.0)),
        name=name,
    )


def example1() -> HypersurfaceFamily:
    return _family("example1", HELIX, ("0", "2*pi"), "I", EXAMPLE1_MARCHING, t0=0.5, q0=0.0)


def example2() -> HypersurfaceFamily:
    return _family("example2", CIRCLE_HELIX, ("0", "2*pi"), "II", EXAMPLE2_MARCHING, t0=0.5, q0=0.0)


def example3() -> HypersurfaceFamily:
    return _family("example3", CIRCLE_HELIX, ("pi", "3*pi"), "III", EXAMPLE3_MARCHING, t0=1.0, q0=1.0)


def builtin_examples() -> List[HypersurfaceFamily]:
    return [example1(), example2(), example3()]


def builtin_mutations() -> List[HypersurfaceFamily]:
    """Variants of the examples that must fail every check."""
    base1 = example1()
    wx_equal = marching_from_strings("I", {**EXAMPLE1_MARCHING, "X": "t - t0"})
    v_active = marching_from_strings("I", {**EXAMPLE1_MARCHING, "V": "t - t0"})
    return [
        base1.with_marching(wx_equal, name="example1_wx_equal"),
        base1.with_marching(v_active, name="example1_v_active"),
        replace(example3().with_anchor(q0=0.0), name="example3_q0_zero"),
    ]


def builtin_catalog() -> List[BuiltinEntry]:
    families = {f.name: f for f in builtin_examples() + builtin_mutations()}
    return [
        BuiltinEntry("example1", families["example1"], "helix (cos, sin, s, s); type I, U=(t-t0)(q-q0), W=t-t0, X=q-q0"),
        BuiltinEntry("example2", families["example2"], "circular helix; type II, n=s+t+1, p=(s+1)(t-t0), W=q-q0"),
        BuiltinEntry("example3", families["example3"], "circular helix on [pi, 3pi]; type III, n=sin(s(q-q0)), p=s q^2"),
        BuiltinEntry("example1_wx_equal", families["example1_wx_equal"], "example1 with X=t-t0 (phi2 vanishes)", False),
        BuiltinEntry("example1_v_active", families["example1_v_active"], "example1 with V=t-t0 (phi3 nonzero)", False),
        BuiltinEntry("example3_q0_zero", families["example3_q0_zero"], "example3 anchored at q0=0", False),
    ]
