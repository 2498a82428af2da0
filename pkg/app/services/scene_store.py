"""Scene files: TOML documents describing a curve, a marching scale and an anchor.

The document is validated against pydantic models first; expressions are
parsed only once the shape is known to be right, so every error carries the
key path it came from.
"""

from __future__ import annotations

import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.config import Config
from app.geometry.curve import Curve4
from app.geometry.family import (
    MARCHING_TYPES,
    FamilyParams,
    HypersurfaceFamily,
    MarchingScale,
    marching_from_strings,
)
from app.geometry.projection import GridSpec
from app.utils.errors import ExprSyntaxError, SchemaError, UnknownIdentifier
from app.utils.expr import VARIABLES, parse, parse_constant

logger = logging.getLogger(__name__)

Bound = Union[float, str]
MARCHING_KEYS = ("u", "v", "w", "x", "l", "m", "n", "p", "U", "V", "W", "X")


def _ordered(values: Tuple[Bound, Bound]) -> Tuple[float, float]:
    try:
        lo, hi = parse_constant(values[0]), parse_constant(values[1])
    except ArithmeticError as exc:
        raise ValueError(str(exc)) from exc
    if not lo < hi:
        raise ValueError("L1 < L2 required")
    return (lo, hi)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class CurveModel(_Strict):
    x1: str
    x2: str
    x3: str
    x4: str
    s_range: Tuple[Bound, Bound]

    @field_validator("s_range")
    @classmethod
    def _check_range(cls, value: Tuple[Bound, Bound]) -> Tuple[float, float]:
        return _ordered(value)


class MarchingModel(_Strict):
    type: Literal["general", "I", "II", "III"]
    u: Optional[str] = None
    v: Optional[str] = None
    w: Optional[str] = None
    x: Optional[str] = None
    l: Optional[str] = None  # noqa: E741
    m: Optional[str] = None
    n: Optional[str] = None
    p: Optional[str] = None
    U: Optional[str] = None
    V: Optional[str] = None
    W: Optional[str] = None
    X: Optional[str] = None

    def texts(self) -> Dict[str, str]:
        return {key: getattr(self, key) for key in MARCHING_KEYS if getattr(self, key) is not None}


class AnchorModel(_Strict):
    t0: float
    q0: float
    t_range: Tuple[Bound, Bound] = (0.0, 1.0)
    q_range: Tuple[Bound, Bound] = (0.0, 1.0)

    @field_validator("t_range", "q_range")
    @classmethod
    def _check_range(cls, value: Tuple[Bound, Bound]) -> Tuple[float, float]:
        return _ordered(value)


class GridModel(_Strict):
    n_s: Optional[int] = Field(default=None, ge=1)
    n_t: Optional[int] = Field(default=None, ge=1)
    n_q: Optional[int] = Field(default=None, ge=1)
    fix: Optional[Literal["s", "t", "q"]] = None
    value: Optional[Bound] = None
    drop: Literal["x", "y", "z", "w"] = "w"

    @model_validator(mode="after")
    def _fix_needs_value(self) -> "GridModel":
        if (self.fix is None) != (self.value is None):
            raise ValueError("fix and value must be given together")
        return self


class OutputModel(_Strict):
    mesh: Optional[str] = None
    table: Optional[str] = None
    report: Optional[str] = None


class SceneModel(_Strict):
    name: str = ""
    curve: CurveModel
    marching: MarchingModel
    anchor: AnchorModel
    grid: GridModel = Field(default_factory=GridModel)
    output: OutputModel = Field(default_factory=OutputModel)


@dataclass(frozen=True)
class Scene:
    name: str
    curve: Curve4
    marching: MarchingScale
    params: FamilyParams
    grid: GridSpec
    axis: str = "w"
    outputs: Dict[str, str] = field(default_factory=dict, compare=False)

    @property
    def family(self) -> HypersurfaceFamily:
        return HypersurfaceFamily(self.curve, self.marching, self.params, name=self.name)


def _key_path(loc: Tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc)


def _schema_errors(exc: ValidationError) -> List[Tuple[str, str]]:
    errors = []
    for error in exc.errors():
        message = str(error.get("msg", "invalid value"))
        message = message.removeprefix("Value error, ")
        errors.append((_key_path(error.get("loc", ())), message))
    return errors


def _scope_error(path: str, exc: UnknownIdentifier, allowed: Tuple[str, ...], where: str) -> Tuple[str, str]:
    return (path, f"variable '{exc.name}' is not allowed in {where} (allowed: {', '.join(allowed) or 'none'})")


def _build_curve(model: CurveModel) -> Curve4:
    components = []
    errors: List[Tuple[str, str]] = []
    for key in ("x1", "x2", "x3", "x4"):
        text = getattr(model, key)
        try:
            components.append(parse(text, variables=("s",), parameters=()))
        except UnknownIdentifier as exc:
            if exc.name in VARIABLES:
                errors.append(_scope_error(f"curve.{key}", exc, ("s",), "a curve component"))
                continue
            raise exc.with_key_path(f"curve.{key}") from exc
        except ExprSyntaxError as exc:
            raise exc.with_key_path(f"curve.{key}") from exc
    if errors:
        raise SchemaError(errors)
    return Curve4(tuple(components), model.s_range)  # type: ignore[arg-type]


def _build_marching(model: MarchingModel) -> MarchingScale:
    kind = model.type
    scopes = MARCHING_TYPES[kind].SCOPES
    texts = model.texts()
    errors = [(f"marching.{key}", f"required for type {kind}") for key in scopes if key not in texts]
    errors += [(f"marching.{key}", f"not used by type {kind}") for key in texts if key not in scopes]
    if errors:
        raise SchemaError(errors)
    for key, allowed in scopes.items():
        try:
            parse(texts[key], variables=allowed)
        except UnknownIdentifier as exc:
            if exc.name in VARIABLES:
                raise SchemaError([_scope_error(f"marching.{key}", exc, allowed, f"type {kind} {key}")]) from exc
            raise exc.with_key_path(f"marching.{key}") from exc
        except ExprSyntaxError as exc:
            raise exc.with_key_path(f"marching.{key}") from exc
    return marching_from_strings(kind, texts)


def _build_grid(model: GridModel) -> GridSpec:
    if model.fix is None:
        n_s, n_t, n_q = Config.VOLUME_GRID
        return GridSpec(n_s=model.n_s or n_s, n_t=model.n_t or n_t, n_q=model.n_q or n_q)
    value = parse_constant(model.value)  # type: ignore[arg-type]
    n_s, n_free = Config.SLICE_GRID
    return GridSpec(
        n_s=model.n_s or (1 if model.fix == "s" else n_s),
        n_t=model.n_t or (1 if model.fix == "t" else n_free),
        n_q=model.n_q or (1 if model.fix == "q" else n_free),
        fixed=(model.fix, value),
    )


def load_scene(text: str) -> Scene:
    """Parse and validate a TOML scene document."""
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SchemaError([("", f"invalid TOML: {exc}")]) from exc

    try:
        model = SceneModel.model_validate(document)
    except ValidationError as exc:
        raise SchemaError(_schema_errors(exc)) from exc

    curve = _build_curve(model.curve)
    marching = _build_marching(model.marching)
    try:
        params = FamilyParams(
            t0=model.anchor.t0,
            q0=model.anchor.q0,
            t_domain=model.anchor.t_range,  # type: ignore[arg-type]
            q_domain=model.anchor.q_range,  # type: ignore[arg-type]
        )
    except ValueError as exc:
        raise SchemaError([("anchor", str(exc))]) from exc
    try:
        grid = _build_grid(model.grid)
    except (ValueError, ArithmeticError) as exc:
        raise SchemaError([("grid", str(exc))]) from exc

    outputs = {key: value for key, value in model.output.model_dump().items() if value is not None}
    scene = Scene(
        name=model.name,
        curve=curve,
        marching=marching,
        params=params,
        grid=grid,
        axis=model.grid.drop,
        outputs=outputs,
    )
    logger.debug("scene_store: loaded scene %r (type %s)", scene.name, marching.kind)
    return scene


def load_scene_file(path: Union[str, Path]) -> Scene:
    source = Path(path)
    logger.info("scene_store: loading %s", source)
    return load_scene(source.read_text(encoding="utf-8"))
