import math
from collections import Counter

import numpy as np
import pytest

from app.geometry.family import eval_point
from app.geometry.projection import (
    GridSpec,
    SurfaceMesh,
    kept_axes,
    project_drop_axis,
    project_points,
    sample_volume,
    slice_to_mesh,
)
from app.utils.errors import DomainError
from app.utils.linalg4 import Vec4

from tests.closed_forms import SQRT3, example1_point, example2_point, example3_point


def _drop(values, index):
    return tuple(v for i, v in enumerate(values) if i != index)


def test_drop_axis():
    p = Vec4(1.0, 2.0, 3.0, 4.0)
    assert project_drop_axis(p, "x") == (2.0, 3.0, 4.0)
    assert project_drop_axis(p, "z") == (1.0, 2.0, 4.0)
    assert project_drop_axis(p, "w") == (1.0, 2.0, 3.0)
    assert kept_axes("y") == ("x", "z", "w")
    with pytest.raises(ValueError, match="axis"):
        project_drop_axis(p, "v")


def test_projection_is_linear():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b = Vec4.of(rng.normal(size=4)), Vec4.of(rng.normal(size=4))
        c = rng.normal()
        for axis in ("x", "y", "z", "w"):
            combined = project_drop_axis(a + b * c, axis)
            separate = np.add(project_drop_axis(a, axis), np.multiply(project_drop_axis(b, axis), c))
            np.testing.assert_allclose(combined, separate, atol=1e-14)


def test_project_points_matches_single_points():
    rng = np.random.default_rng(4)
    points = rng.normal(size=(10, 4))
    projected = project_points(points, "y")
    assert projected.shape == (10, 3)
    for row, point in zip(projected, points):
        assert tuple(row) == project_drop_axis(Vec4.of(point), "y")


def test_helix_slice_matches_closed_form(ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("q", 0.125), "w")
    assert mesh.n_vertices == 65 * 17
    assert mesh.n_triangles == 2 * 64 * 16
    coefficient = (1 + 8 * SQRT3) / 16
    index = 0
    for s in np.linspace(0.0, 2 * math.pi, 65):
        for t in np.linspace(0.0, 1.0, 17):
            x, y, z = mesh.vertices[index]
            assert x == pytest.approx(0.5 * math.cos(s) - coefficient * (t - 0.5) * math.sin(s), abs=1e-12)
            assert y == pytest.approx(0.5 * math.sin(s) + coefficient * (t - 0.5) * math.cos(s), abs=1e-12)
            np.testing.assert_allclose(mesh.vertices[index], _drop(example1_point(s, t, 0.125), 3), atol=1e-12)
            index += 1


def test_thin_strip_slice_matches_closed_form(ex2):
    mesh = slice_to_mesh(ex2, GridSpec.slice("q", 0.002), "w")
    grid = [(s, t) for s in np.linspace(0.0, 2 * math.pi, 65) for t in np.linspace(0.0, 1.0, 17)]
    for vertex, (s, t) in zip(mesh.vertices, grid):
        np.testing.assert_allclose(vertex, _drop(example2_point(s, t, 0.002), 3), atol=1e-12)
    # dropped w coordinate
    s, t = grid[-1]
    assert example2_point(s, t, 0.002)[3] == pytest.approx(SQRT3 / 2 * s - 0.001 * (s + t + 1))


def test_example3_slice_ignores_t(ex3):
    at_anchor = slice_to_mesh(ex3, GridSpec.slice("t", 1.0), "z")
    elsewhere = slice_to_mesh(ex3, GridSpec.slice("t", 0.3), "z")
    np.testing.assert_allclose(at_anchor.vertices, elsewhere.vertices, atol=1e-12)
    grid = [(s, q) for s in np.linspace(math.pi, 3 * math.pi, 65) for q in np.linspace(0.0, 1.0, 17)]
    for vertex, (s, q) in zip(at_anchor.vertices, grid):
        np.testing.assert_allclose(vertex, _drop(example3_point(s, 1.0, q), 2), atol=1e-12)


def test_polyline_reuses_grid_vertices(ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("q", 0.0, n_s=9, n_free=5), "w")
    assert mesh.n_vertices == 9 * 5
    assert len(mesh.marked_polyline) == 9
    for index, s in zip(mesh.marked_polyline, np.linspace(0.0, 2 * math.pi, 9)):
        np.testing.assert_allclose(mesh.vertices[index], _drop(tuple(ex1.curve.point(s)), 3), atol=1e-12)


def test_polyline_off_grid_is_appended(ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("q", 0.125, n_s=9, n_free=4), "w")
    assert mesh.n_vertices == 9 * 4 + 9
    assert mesh.marked_polyline.tolist() == list(range(36, 45))
    assert not np.isin(mesh.marked_polyline, mesh.triangles).any()
    for index, s in zip(mesh.marked_polyline, np.linspace(0.0, 2 * math.pi, 9)):
        expected = project_drop_axis(eval_point(ex1, s, 0.5, 0.125), "w")
        np.testing.assert_allclose(mesh.vertices[index], expected, atol=1e-12)


def test_fixed_s_slice_marks_one_point(ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("s", 1.0, n_free=5), "w")
    assert mesh.n_vertices == 25
    assert mesh.n_triangles == 32
    assert len(mesh.marked_polyline) == 1
    np.testing.assert_allclose(
        mesh.vertices[mesh.marked_polyline[0]], _drop(tuple(ex1.curve.point(1.0)), 3), atol=1e-12
    )


def test_mesh_is_a_watertight_grid(ex2):
    mesh = slice_to_mesh(ex2, GridSpec.slice("q", 0.5, n_s=7, n_free=5), "x")
    triangles = mesh.triangles
    assert triangles.min() >= 0 and triangles.max() < mesh.n_vertices
    assert all(len(set(row)) == 3 for row in triangles.tolist())
    edges = Counter()
    for a, b, c in triangles.tolist():
        for edge in ((a, b), (b, c), (c, a)):
            edges[tuple(sorted(edge))] += 1
    assert set(edges.values()) <= {1, 2}
    boundary = sum(1 for count in edges.values() if count == 1)
    assert boundary == 2 * (7 - 1) + 2 * (5 - 1)


def test_volume_rows_and_order(ex1):
    volume = sample_volume(ex1, GridSpec.volume(3, 3, 3), "w")
    assert len(volume) == 27
    assert volume.axes == ("x", "y", "z")
    params = volume.rows[:, :3]
    assert params[:3, 2].tolist() == [0.0, 0.5, 1.0]
    assert params[:9:3, 1].tolist() == [0.0, 0.5, 1.0]
    assert params[::9, 0].tolist() == pytest.approx([0.0, math.pi, 2 * math.pi])
    for s, t, q, *coords in volume.rows:
        np.testing.assert_allclose(coords, _drop(example1_point(s, t, q), 3), atol=1e-12)
    table = volume.table()
    assert table.header == ("s", "t", "q", "x", "y", "z")
    assert len(table.rows) == 27


def test_volume_agrees_with_slice(ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("q", 0.125, n_s=9, n_free=5), "w")
    volume = sample_volume(ex1, GridSpec.volume(9, 5, 9), "w")
    rows = volume.rows[volume.rows[:, 2] == 0.125]
    np.testing.assert_allclose(rows[:, 3:], mesh.vertices[: 9 * 5], atol=1e-15)


def test_grid_and_domain_errors(ex1):
    with pytest.raises(DomainError):
        slice_to_mesh(ex1, GridSpec.slice("q", 2.0), "w")
    with pytest.raises(ValueError):
        GridSpec.volume(1, 9, 9)
    with pytest.raises(ValueError):
        GridSpec(5, 5, 5, fixed=("r", 0.0))
    with pytest.raises(ValueError):
        sample_volume(ex1, GridSpec.slice("q", 0.0), "w")
    with pytest.raises(ValueError):
        slice_to_mesh(ex1, GridSpec.volume(), "w")
    with pytest.raises(ValueError):
        slice_to_mesh(ex1, GridSpec.slice("q", 0.0, n_s=5, n_free=3), "u")


def test_empty_mesh():
    mesh = SurfaceMesh.empty()
    assert mesh.n_vertices == 0
    assert mesh.n_triangles == 0
