"""Mesh file formats.

``node``/``ele``
    Triangle/TetGen style text, read and write. Node header
    ``<#points> <dim> [<#attributes> [<#markers>]]`` then one
    ``<idx> <x> <y> [<z>] ...`` line per point. Element header
    ``<#elements> <3|4> [<#attributes>]`` then ``<idx> <v1> ... <vk> ...``.
    Numbering may start at 0 or 1; it is detected from the first node index.
    ``#`` starts a comment. Attribute and marker columns are ignored on read
    and never written. Output is always 1-based.

combined
    A node file, a line reading ``#ELE``, then an element file. Used for
    piping meshes between CLI commands.

VTK legacy (write only), SVG (write only, triangle meshes).
"""

import re

import numpy as np

from .errors import EmptyMesh, IndexBaseMismatch, ParseError
from .mesh import build_tet_mesh, build_tri_mesh

ELE_SEPARATOR = "#ELE"

_TOKEN = re.compile(r"\S+")

VTK_TRIANGLE = 5
VTK_TETRA = 10

SVG_FILLS = ("#4c72b0", "#dd8452")
SVG_PLAIN_FILL = "#d9d9d9"


def _records(text):
    """Yield ``(line_no, [(column, token), ...])`` for non-blank, non-comment lines."""
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
        if tokens:
            yield n, tokens


def _int(tok, line, what):
    col, s = tok
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {s!r}", line, col) from None


def _float(tok, line, what):
    col, s = tok
    try:
        value = float(s)
    except ValueError:
        raise ParseError(f"expected number {what}, got {s!r}", line, col) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite {what} {s!r}", line, col)
    return value


def _header(records, what, minimum):
    try:
        line, tokens = next(records)
    except StopIteration:
        raise ParseError(f"empty {what} file") from None
    if len(tokens) < minimum:
        raise ParseError(f"{what} header needs at least {minimum} fields", line, 1)
    return line, tokens


def _body(records, count, what):
    rows = []
    for _ in range(count):
        try:
            rows.append(next(records))
        except StopIteration:
            raise ParseError(f"{what} file ends after {len(rows)} of {count} entries") from None
    extra = next(records, None)
    if extra is not None:
        raise ParseError(f"unexpected data after {count} {what} entries", extra[0], extra[1][0][0])
    return rows


def _check_numbering(rows, base, what):
    for offset, (line, tokens) in enumerate(rows):
        idx = _int(tokens[0], line, f"{what} index")
        if idx != base + offset:
            raise ParseError(f"{what} index {idx}, expected {base + offset}", line, tokens[0][0])


def read_node_ele(node_text, ele_text):
    """Parse node and element text into a validated mesh.

    Returns
    -------
    TriMesh or TetMesh
        ``TriMesh`` for 2-D points with 3-corner elements, ``TetMesh`` for
        3-D points with 4-corner elements.

    Raises
    ------
    ParseError
        Malformed text, with line and column.
    IndexBaseMismatch
        The element file numbers entities from a different base than the
        node file, or references vertex ``base - 1`` / ``n + base``.
    """
    records = _records(node_text)
    line, head = _header(records, "node", 2)
    n_points = _int(head[0], line, "point count")
    dim = _int(head[1], line, "dimension")
    if dim not in (2, 3):
        raise ParseError(f"dimension must be 2 or 3, got {dim}", line, head[1][0])
    if n_points < 0:
        raise ParseError("negative point count", line, head[0][0])
    rows = _body(records, n_points, "node")
    base = _int(rows[0][1][0], rows[0][0], "node index") if rows else 1
    if base not in (0, 1):
        raise IndexBaseMismatch(f"first node index must be 0 or 1, got {base}", rows[0][0], 1)
    _check_numbering(rows, base, "node")
    points = np.empty((n_points, dim))
    for k, (ln, tokens) in enumerate(rows):
        if len(tokens) < 1 + dim:
            raise ParseError(f"node line needs {1 + dim} fields, got {len(tokens)}", ln, 1)
        for d in range(dim):
            points[k, d] = _float(tokens[1 + d], ln, "coordinate")

    records = _records(ele_text)
    line, head = _header(records, "ele", 2)
    n_cells = _int(head[0], line, "element count")
    corners = _int(head[1], line, "corner count")
    if corners not in (3, 4):
        raise ParseError(f"elements must have 3 or 4 corners, got {corners}", line, head[1][0])
    if corners != dim + 1:
        raise ParseError(f"{corners}-corner elements do not fit {dim}-D points", line, head[1][0])
    if n_cells < 0:
        raise ParseError("negative element count", line, head[0][0])
    rows = _body(records, n_cells, "ele")
    if rows:
        first = _int(rows[0][1][0], rows[0][0], "element index")
        if first != base:
            raise IndexBaseMismatch(
                f"element numbering starts at {first} but node numbering at {base}", rows[0][0], 1
            )
    _check_numbering(rows, base, "element")
    cells = np.empty((n_cells, corners), dtype=np.int64)
    for k, (ln, tokens) in enumerate(rows):
        if len(tokens) < 1 + corners:
            raise ParseError(f"element line needs {1 + corners} fields, got {len(tokens)}", ln, 1)
        for c in range(corners):
            v = _int(tokens[1 + c], ln, "vertex index") - base
            if v == -1 or v == n_points:
                raise IndexBaseMismatch(
                    f"vertex {v + base} is outside {base}-based numbering of {n_points} points",
                    ln,
                    tokens[1 + c][0],
                )
            cells[k, c] = v
    build = build_tri_mesh if dim == 2 else build_tet_mesh
    return build(points, cells)


def write_node_ele(mesh):
    """Serialise to 1-based ``(node_text, ele_text)``; coordinates use ``repr``."""
    node = [f"{mesh.n_points} {mesh.dim} 0 0"]
    for i, p in enumerate(mesh.points.tolist(), start=1):
        node.append(" ".join([str(i)] + [repr(x) for x in p]))
    ele = [f"{mesh.n_cells} {mesh.corners} 0"]
    for i, c in enumerate(mesh.cells.tolist(), start=1):
        ele.append(" ".join(str(x) for x in [i] + [v + 1 for v in c]))
    return "\n".join(node) + "\n", "\n".join(ele) + "\n"


def read_combined(text):
    lines = text.splitlines(keepends=True)
    for i, line in enumerate(lines):
        if line.strip() == ELE_SEPARATOR:
            return read_node_ele("".join(lines[:i]), "".join(lines[i + 1 :]))
    raise ParseError(f"missing {ELE_SEPARATOR} separator line")


def write_combined(mesh):
    node, ele = write_node_ele(mesh)
    return node + ELE_SEPARATOR + "\n" + ele


def read_colors(text, n_cells=None):
    colors = []
    for line, tokens in _records(text):
        c = _int(tokens[0], line, "color")
        if c not in (0, 1):
            raise ParseError(f"color must be 0 or 1, got {c}", line, tokens[0][0])
        colors.append(c)
    if n_cells is not None and len(colors) != n_cells:
        raise ParseError(f"{len(colors)} colors for {n_cells} elements")
    return colors


def write_colors(colors):
    return "".join(f"{int(c)}\n" for c in colors)


def _colors(coloring):
    if coloring is None:
        return None
    return list(getattr(coloring, "color", coloring))


def write_vtk(mesh, coloring=None, quality=None, title="bipmesh"):
    """Legacy ASCII VTK unstructured grid.

    Triangles are written as cell type 5 with ``z = 0``, tetrahedra as type 10.
    ``coloring`` (an :class:`~bipmesh.bipartite.ElementColoring` or a list of
    0/1) becomes the integer cell scalar ``color``; ``quality`` (a
    :class:`~bipmesh.quality.QualityReport`) adds ``zeta`` and, for
    tetrahedra, ``eta``.
    """
    out = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {mesh.n_points} double",
    ]
    for p in mesh.points.tolist():
        if len(p) == 2:
            p = p + [0.0]
        out.append(" ".join(repr(x) for x in p))
    k = mesh.corners
    out.append(f"CELLS {mesh.n_cells} {mesh.n_cells * (k + 1)}")
    for c in mesh.cells.tolist():
        out.append(" ".join(str(x) for x in [k] + c))
    out.append(f"CELL_TYPES {mesh.n_cells}")
    ctype = VTK_TRIANGLE if mesh.dim == 2 else VTK_TETRA
    out.extend([str(ctype)] * mesh.n_cells)

    scalars = []
    colors = _colors(coloring)
    if colors is not None:
        if len(colors) != mesh.n_cells:
            raise ValueError(f"{len(colors)} colors for {mesh.n_cells} cells")
        scalars.append(("color", "int", [str(int(c)) for c in colors]))
    if quality is not None:
        scalars.append(("zeta", "double", [repr(float(q.zeta)) for q in quality.elements]))
        if mesh.dim == 3:
            scalars.append(("eta", "double", [repr(float(q.eta)) for q in quality.elements]))
    if scalars:
        out.append(f"CELL_DATA {mesh.n_cells}")
        for name, kind, values in scalars:
            out.append(f"SCALARS {name} {kind} 1")
            out.append("LOOKUP_TABLE default")
            out.extend(values)
    return "\n".join(out) + "\n"


def _fmt(x, scale=0.0):
    if abs(x) <= 1e-12 * scale:
        return "0"
    s = format(x, ".10g")
    return "0" if s == "-0" else s


def write_svg(mesh, coloring=None, width=800):
    """Render a triangle mesh as SVG, one polygon per triangle.

    The y axis is flipped (SVG y grows downwards) and the view box is the
    bounding box of the mesh plus a margin of 5% of its larger side.
    """
    if mesh.dim != 2:
        raise TypeError("SVG export needs a triangle mesh")
    if mesh.n_cells == 0:
        raise EmptyMesh("cannot render a mesh without triangles")
    colors = _colors(coloring)
    used = mesh.points[mesh.used_vertices()]
    lo, hi = used.min(axis=0), used.max(axis=0)
    span = hi - lo
    margin = 0.05 * float(span.max())
    vx, vy = lo[0] - margin, -hi[1] - margin
    vw, vh = span[0] + 2 * margin, span[1] + 2 * margin
    height = max(1, round(width * vh / vw))
    size = float(span.max())
    stroke = 0.004 * size
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
        "<!-- y axis flipped: svg_y = -y -->",
        f'<g stroke="#000000" stroke-width="{_fmt(stroke)}" stroke-linejoin="round">',
    ]
    for k, cell in enumerate(mesh.cells.tolist()):
        fill = SVG_PLAIN_FILL if colors is None else SVG_FILLS[colors[k]]
        pts = " ".join(f"{_fmt(x, size)},{_fmt(-y, size)}" for x, y in mesh.points[cell].tolist())
        out.append(f'<polygon points="{pts}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
