"""Artifact writers: Wavefront OBJ meshes and CSV tables."""

from __future__ import annotations

import csv
import io
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterator, List, NamedTuple, Sequence, TextIO, Union

if TYPE_CHECKING:
    from app.geometry.projection import SurfaceMesh

logger = logging.getLogger(__name__)

OBJ_HEADER = "# isogeo4 surface mesh"

Sink = Union[TextIO, str, Path]


class Table(NamedTuple):
    header: Sequence[str]
    rows: Sequence[Sequence[Any]]


@contextmanager
def _open_sink(sink: Sink) -> Iterator[TextIO]:
    if isinstance(sink, (str, Path)):
        path = Path(sink)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            yield handle
        logger.info("export_utils: wrote %s", path)
    else:
        yield sink


def _g9(value: float) -> str:
    return format(float(value), ".9g")


def write_obj(mesh: "SurfaceMesh", sink: Sink) -> None:
    """Vertices, 1-based triangle faces, then the marked polyline as one ``l`` element."""
    lines: List[str] = [OBJ_HEADER]
    lines.extend(f"v {_g9(x)} {_g9(y)} {_g9(z)}" for x, y, z in mesh.vertices.tolist())
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles.tolist())
    polyline = mesh.marked_polyline.tolist()
    if polyline:
        lines.append("l " + " ".join(str(index + 1) for index in polyline))
    with _open_sink(sink) as handle:
        handle.write("\n".join(lines) + "\n")


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(table: Table, sink: Sink) -> None:
    """Header row then data rows; floats with 17 significant digits, "\\n" line endings."""
    width = len(table.header)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.header)
    for number, row in enumerate(table.rows, start=1):
        if len(row) != width:
            raise ValueError(f"row {number} has {len(row)} cells, header has {width}")
        writer.writerow([_cell(value) for value in row])
    with _open_sink(sink) as handle:
        handle.write(buffer.getvalue())


def _parse_cell(text: str) -> Any:
    try:
        value = int(text)
    except ValueError:
        pass
    else:
        # "-0" is how a negative zero float is written
        return -0.0 if value == 0 and text.lstrip().startswith("-") else value
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(source: Union[TextIO, str, Path]) -> Table:
    """Inverse of ``write_csv``: numbers come back as int or float, anything else as str."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        return Table((), [])
    return Table(tuple(rows[0]), [[_parse_cell(cell) for cell in row] for row in rows[1:]])
