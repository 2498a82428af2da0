"""Parallel projection of family members into 3-space.

A slice fixes one parameter and meshes the remaining two; a volume samples
all three. Both drop one coordinate of R^4.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from app.config import Config
from app.geometry.curve import FrenetApparatus
from app.geometry.family import HypersurfaceFamily, eval_point
from app.services.executor import parallel_map
from app.utils.errors import DomainError
from app.utils.export_utils import Table
from app.utils.linalg4 import AXES, Vec4

logger = logging.getLogger(__name__)

PARAMETERS = ("s", "t", "q")


def _axis_index(axis: str) -> int:
    try:
        return AXES.index(axis)
    except ValueError as exc:
        raise ValueError(f"axis must be one of {'|'.join(AXES)}, got {axis!r}") from exc


def kept_axes(axis: str) -> Tuple[str, str, str]:
    index = _axis_index(axis)
    kept = [name for i, name in enumerate(AXES) if i != index]
    return (kept[0], kept[1], kept[2])


def project_drop_axis(p: Vec4, axis: str) -> Tuple[float, float, float]:
    index = _axis_index(axis)
    kept = [value for i, value in enumerate(p) if i != index]
    return (kept[0], kept[1], kept[2])


def project_points(points: np.ndarray, axis: str) -> np.ndarray:
    """Row-wise ``project_drop_axis`` over an (N, 4) array."""
    return np.delete(np.asarray(points, dtype=float).reshape(-1, 4), _axis_index(axis), axis=1)


@dataclass(frozen=True)
class GridSpec:
    n_s: int
    n_t: int
    n_q: int
    fixed: Optional[Tuple[str, float]] = None

    def __post_init__(self) -> None:
        if self.fixed is not None:
            name, value = self.fixed
            if name not in PARAMETERS:
                raise ValueError(f"fixed parameter must be one of s|t|q, got {name!r}")
            object.__setattr__(self, "fixed", (name, float(value)))
        for name in self.free:
            if self.count(name) < 2:
                raise ValueError(f"n_{name} must be at least 2 for a free parameter")

    @classmethod
    def slice(
        cls,
        fixed: str,
        value: float,
        n_s: int = Config.SLICE_GRID[0],
        n_free: int = Config.SLICE_GRID[1],
    ) -> "GridSpec":
        """Slice grid: n_s samples along s and n_free along the other free parameter.

        With s fixed both free parameters use ``n_free``.
        """
        if fixed == "s":
            return cls(n_s=1, n_t=n_free, n_q=n_free, fixed=("s", value))
        if fixed == "t":
            return cls(n_s=n_s, n_t=1, n_q=n_free, fixed=("t", value))
        return cls(n_s=n_s, n_t=n_free, n_q=1, fixed=(fixed, value))

    @classmethod
    def volume(cls, n_s: int = Config.VOLUME_GRID[0], n_t: int = Config.VOLUME_GRID[1], n_q: int = Config.VOLUME_GRID[2]) -> "GridSpec":
        return cls(n_s=n_s, n_t=n_t, n_q=n_q)

    @property
    def free(self) -> Tuple[str, ...]:
        fixed = self.fixed[0] if self.fixed else None
        return tuple(name for name in PARAMETERS if name != fixed)

    def count(self, name: str) -> int:
        return {"s": self.n_s, "t": self.n_t, "q": self.n_q}[name]


@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray  # (N, 3) float
    triangles: np.ndarray  # (M, 3) int, 0-based
    marked_polyline: np.ndarray  # (K,) int

    @classmethod
    def empty(cls) -> "SurfaceMesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])


@dataclass(frozen=True)
class VolumeTable:
    axes: Tuple[str, str, str]
    rows: np.ndarray  # (N, 6): s, t, q and the three kept coordinates

    def table(self) -> Table:
        return Table(("s", "t", "q") + self.axes, self.rows.tolist())

    def __len__(self) -> int:
        return int(self.rows.shape[0])


def _domain(f: HypersurfaceFamily, name: str) -> Tuple[float, float]:
    return {"s": f.curve.domain, "t": f.params.t_domain, "q": f.params.q_domain}[name]


def _values(f: HypersurfaceFamily, name: str, n: int) -> np.ndarray:
    lo, hi = _domain(f, name)
    return np.linspace(lo, hi, n)


def check_fixed(f: HypersurfaceFamily, name: str, value: float) -> None:
    lo, hi = _domain(f, name)
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    if not lo - pad <= value <= hi + pad:
        raise DomainError(f"{name}={value} lies outside [{lo}, {hi}]")


def _grid_index(values: np.ndarray, target: float) -> Optional[int]:
    span = float(values[-1] - values[0]) if len(values) > 1 else 1.0
    hits = np.flatnonzero(np.abs(values - target) <= 1e-12 * max(1.0, abs(span)))
    return int(hits[0]) if hits.size else None


def _show_progress() -> bool:
    return sys.stderr.isatty()


def _evaluate(f: HypersurfaceFamily, points: Sequence[Tuple[float, float, float]], label: str) -> np.ndarray:
    """eval_point over (s, t, q) triples; one Frenet apparatus per distinct s."""
    by_s: Dict[float, List[int]] = {}
    for index, (s, _, _) in enumerate(points):
        by_s.setdefault(s, []).append(index)

    out = np.empty((len(points), 4))
    for s, indices in tqdm(by_s.items(), desc=label, unit="row", disable=not _show_progress(), file=sys.stderr):
        app: FrenetApparatus = f.apparatus(s)
        values = parallel_map(lambda i: tuple(eval_point(f, *points[i], apparatus=app)), indices)
        out[indices] = np.asarray(values, dtype=float)
    return out


def _quad_triangles(n_a: int, n_b: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(n_a - 1), np.arange(n_b - 1), indexing="ij")
    v00 = (i * n_b + j).ravel()
    v10 = ((i + 1) * n_b + j).ravel()
    v11 = ((i + 1) * n_b + j + 1).ravel()
    v01 = (i * n_b + j + 1).ravel()
    first = np.stack([v00, v10, v11], axis=1)
    second = np.stack([v00, v11, v01], axis=1)
    return np.stack([first, second], axis=1).reshape(-1, 3).astype(np.int64)


def slice_to_mesh(f: HypersurfaceFamily, grid: GridSpec, axis: str) -> SurfaceMesh:
    """Mesh of the 2-parameter slice ``grid.fixed`` with the isogeodesic marked on it."""
    if grid.fixed is None:
        raise ValueError("slice_to_mesh needs a grid with one fixed parameter")
    fixed_name, fixed_value = grid.fixed
    check_fixed(f, fixed_name, fixed_value)
    _axis_index(axis)

    a_name, b_name = grid.free
    a_values = _values(f, a_name, grid.count(a_name))
    b_values = _values(f, b_name, grid.count(b_name))

    def triple(a: float, b: float) -> Tuple[float, float, float]:
        named = {fixed_name: fixed_value, a_name: float(a), b_name: float(b)}
        return (named["s"], named["t"], named["q"])

    points = [triple(a, b) for a in a_values for b in b_values]
    vertices = project_points(_evaluate(f, points, f"slice {fixed_name}={fixed_value:g}"), axis)
    triangles = _quad_triangles(len(a_values), len(b_values))

    anchor = {"t": f.params.t0, "q": f.params.q0}
    n_b = len(b_values)
    if fixed_name == "s":
        ia, ib = _grid_index(a_values, anchor["t"]), _grid_index(b_values, anchor["q"])
        if ia is not None and ib is not None:
            polyline = np.array([ia * n_b + ib], dtype=np.int64)
        else:
            extra = [(fixed_value, anchor["t"], anchor["q"])]
            polyline, vertices = _append(vertices, project_points(_evaluate(f, extra, "polyline"), axis))
    else:
        ib = _grid_index(b_values, anchor[b_name])
        if ib is not None:
            polyline = np.arange(len(a_values), dtype=np.int64) * n_b + ib
        else:
            extra = [triple(a, anchor[b_name]) for a in a_values]
            polyline, vertices = _append(vertices, project_points(_evaluate(f, extra, "polyline"), axis))

    logger.info(
        "projection: %s slice %s=%g -> %d vertices, %d triangles",
        f.name or "family",
        fixed_name,
        fixed_value,
        vertices.shape[0],
        triangles.shape[0],
    )
    return SurfaceMesh(vertices=vertices, triangles=triangles, marked_polyline=polyline)


def _append(vertices: np.ndarray, extra: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    start = vertices.shape[0]
    indices = np.arange(start, start + extra.shape[0], dtype=np.int64)
    return indices, np.vstack([vertices, extra])


def sample_volume(f: HypersurfaceFamily, grid: GridSpec, axis: str) -> VolumeTable:
    """Rows (s, t, q, X, Y, Z) with s outermost and q innermost."""
    if grid.fixed is not None:
        raise ValueError("sample_volume needs a grid without a fixed parameter")
    axes = kept_axes(axis)
    ss = _values(f, "s", grid.n_s)
    ts = _values(f, "t", grid.n_t)
    qs = _values(f, "q", grid.n_q)
    params = np.array(np.meshgrid(ss, ts, qs, indexing="ij")).reshape(3, -1).T
    points = [(float(s), float(t), float(q)) for s, t, q in params]
    projected = project_points(_evaluate(f, points, "volume"), axis)
    logger.info("projection: %s volume -> %d samples", f.name or "family", len(points))
    return VolumeTable(axes=axes, rows=np.hstack([params, projected]))
