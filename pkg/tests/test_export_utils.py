import io
import math

import numpy as np
import pytest

from app.geometry.projection import GridSpec, SurfaceMesh, sample_volume, slice_to_mesh
from app.geometry.validator import validate
from app.utils.export_utils import OBJ_HEADER, Table, read_csv, write_csv, write_obj

from tests.obj_files import read_obj


def _render_obj(mesh):
    buffer = io.StringIO()
    write_obj(mesh, buffer)
    return buffer.getvalue()


def test_single_triangle_obj():
    mesh = SurfaceMesh(
        vertices=np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.5]]),
        triangles=np.array([[0, 1, 2]], dtype=np.int64),
        marked_polyline=np.zeros(0, dtype=np.int64),
    )
    text = _render_obj(mesh)
    content = [line for line in text.splitlines() if line and not line.startswith("#")]
    assert content == ["v 0 0 0", "v 1 0 0", "v 0 1 0.5", "f 1 2 3"]
    assert text.startswith(OBJ_HEADER + "\n")
    assert text.endswith("\n")


def test_empty_obj_is_only_the_header():
    assert _render_obj(SurfaceMesh.empty()) == OBJ_HEADER + "\n"


def test_slice_obj_parses_back(ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("q", 0.125, n_s=9, n_free=5), "w")
    text = _render_obj(mesh)
    vertices, faces, polyline = read_obj(text)
    assert len(vertices) == mesh.n_vertices
    assert faces == [tuple(row) for row in mesh.triangles.tolist()]
    assert polyline == mesh.marked_polyline.tolist()
    np.testing.assert_allclose(vertices, mesh.vertices, rtol=1e-8, atol=1e-9)
    assert _render_obj(mesh) == text


def test_obj_to_path_creates_parent(tmp_path, ex1):
    mesh = slice_to_mesh(ex1, GridSpec.slice("s", 0.5, n_free=3), "w")
    target = tmp_path / "nested" / "mesh.obj"
    write_obj(mesh, target)
    vertices, faces, polyline = read_obj(target.read_text())
    assert len(vertices) == 9
    assert len(faces) == 8
    assert len(polyline) == 1


def test_csv_round_trip_is_bit_exact(tmp_path):
    values = [0.1, 1.0 / 3.0, 1e-300, -2.5e17, np.pi, 6.02214076e23]
    table = Table(("name", "value", "flag"), [[f"row{i}", v, i % 2 == 0] for i, v in enumerate(values)])
    target = tmp_path / "table.csv"
    write_csv(table, target)
    back = read_csv(target)
    assert back.header == ("name", "value", "flag")
    for row, value in zip(back.rows, values):
        assert float(row[1]) == value
    assert [row[2] for row in back.rows] == ["true", "false"] * 3
    lines = target.read_text().split("\n")
    assert lines[-1] == ""
    assert len(lines) == len(values) + 2


def test_csv_rejects_ragged_rows():
    with pytest.raises(ValueError, match="row 2"):
        write_csv(Table(("a", "b"), [[1, 2], [3]]), io.StringIO())


def test_csv_header_only():
    buffer = io.StringIO()
    write_csv(Table(("a", "b"), []), buffer)
    assert buffer.getvalue() == "a,b\n"
    assert read_csv(io.StringIO("")) == Table((), [])


def test_report_and_volume_tables_have_one_line_per_row(ex1):
    buffer = io.StringIO()
    write_csv(validate(ex1, n_samples=9).table(), buffer)
    assert len(buffer.getvalue().splitlines()) == 9 + 2

    buffer = io.StringIO()
    write_csv(sample_volume(ex1, GridSpec.volume(3, 3, 3), "w").table(), buffer)
    assert len(buffer.getvalue().splitlines()) == 27 + 1


def test_csv_keeps_the_sign_of_zero():
    buffer = io.StringIO()
    write_csv(Table(("a", "b", "c"), [[-0.0, 0.0, 0]]), buffer)
    assert buffer.getvalue() == "a,b,c\n-0,0,0\n"
    (row,) = read_csv(io.StringIO(buffer.getvalue())).rows
    assert math.copysign(1.0, row[0]) == -1.0
    assert math.copysign(1.0, row[1]) == 1.0
    assert row[2] == 0
