"""Line-based object file formats.

Headers: ``igraph i=<i> r=<r>``, ``origraph i=<i> r=<r>``,
``bgraph i=<i> r=<r>``, ``relation n=<n> r=<m>``, ``group r=<m>``.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from pathlib import Path

from .decorated import BoundaryCell, BoundaryGraph, OrientedGraph, oriented_cell
from .errors import InputError
from .graphs import IGraph
from .relations import GroupTable, NaryRelation, format_tuple, tuple_key

HEADERS = {
    "igraph": ("i", "r"),
    "origraph": ("i", "r"),
    "bgraph": ("i", "r"),
    "relation": ("n", "r"),
    "group": ("r",),
}


def _fail(source, lineno, msg):
    raise InputError(f"{source}:{lineno}: {msg}")


def _ints(tokens, source, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        _fail(source, lineno, f"expected integers, got {' '.join(tokens)!r}")


def _header(line, source):
    parts = line.split()
    kind = parts[0] if parts else ""
    if kind not in HEADERS:
        _fail(source, 1, f"unknown header {kind!r}; expected one of {', '.join(HEADERS)}")
    params = {}
    for tok in parts[1:]:
        name, sep, value = tok.partition("=")
        if not sep or name not in HEADERS[kind] or name in params:
            _fail(source, 1, f"bad header parameter {tok!r}")
        try:
            params[name] = int(value)
        except ValueError:
            _fail(source, 1, f"parameter {name} must be an integer")
        if params[name] < 0:
            _fail(source, 1, f"parameter {name} must be non-negative")
    missing = [p for p in HEADERS[kind] if p not in params]
    if missing:
        _fail(source, 1, f"header is missing {', '.join(missing)}")
    return kind, params


def parse_text(text: str, source: str = "<string>"):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise InputError(f"{source}: empty file")
    first_lineno, first = lines[0]
    kind, params = _header(first, source)
    body = lines[1:]
    try:
        return _PARSERS[kind](params, body, source)
    except InputError as exc:
        if str(exc).startswith(source):
            raise
        raise InputError(f"{source}: {exc}") from exc


def parse_object(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not an ASCII file") from exc
    return parse_text(text, str(path))


def _check_vertices(vs, r, source, lineno):
    for v in vs:
        if not 0 <= v < r:
            _fail(source, lineno, f"vertex {v} out of range 0..{r - 1}")


def _parse_igraph(params, body, source):
    i, r = params["i"], params["r"]
    cells = set()
    for lineno, line in body:
        parts = line.split()
        if parts[0] != "cell":
            _fail(source, lineno, f"expected 'cell', got {parts[0]!r}")
        vs = _ints(parts[1:], source, lineno)
        _check_vertices(vs, r, source, lineno)
        if len(vs) != i or len(set(vs)) != i:
            _fail(source, lineno, f"cell must list {i} distinct vertices")
        cell = tuple(sorted(vs))
        if cell in cells:
            _fail(source, lineno, f"duplicate cell {cell}")
        cells.add(cell)
    return IGraph(i, r, frozenset(cells))


def _parse_origraph(params, body, source):
    i, r = params["i"], params["r"]
    cells, supports = set(), set()
    for lineno, line in body:
        parts = line.split()
        if parts[0] != "cell" or len(parts) < 2 or parts[1] not in "+-" or len(parts[1]) != 1:
            _fail(source, lineno, "expected 'cell <+|-> <v1> ...'")
        vs = _ints(parts[2:], source, lineno)
        _check_vertices(vs, r, source, lineno)
        if len(vs) != i or len(set(vs)) != i:
            _fail(source, lineno, f"cell must list {i} distinct vertices")
        cell = oriented_cell(vs, 1 if parts[1] == "+" else -1)
        if cell.support in supports:
            _fail(source, lineno, f"duplicate cell {cell.support}")
        supports.add(cell.support)
        cells.add(cell)
    return OrientedGraph(i, r, frozenset(cells))


def _parse_bgraph(params, body, source):
    i, r = params["i"], params["r"]
    cells, supports = set(), set()
    for lineno, line in body:
        head, sep, tail = line.partition(";")
        parts = head.split()
        if not parts or parts[0] != "cell":
            _fail(source, lineno, "expected 'cell <v1> ... ; boundary <u1> ...'")
        vs = _ints(parts[1:], source, lineno)
        _check_vertices(vs, r, source, lineno)
        if len(vs) != i or len(set(vs)) != i:
            _fail(source, lineno, f"cell must list {i} distinct vertices")
        boundary = []
        if sep:
            bparts = tail.split()
            if not bparts or bparts[0] != "boundary":
                _fail(source, lineno, "expected 'boundary' after ';'")
            boundary = _ints(bparts[1:], source, lineno)
            if len(set(boundary)) != len(boundary) or not set(boundary) <= set(vs):
                _fail(source, lineno, "boundary must be distinct vertices of the cell")
        support = tuple(sorted(vs))
        if support in supports:
            _fail(source, lineno, f"duplicate cell {support}")
        supports.add(support)
        cells.add(BoundaryCell(support, tuple(sorted(boundary)), ""))
    return BoundaryGraph(i, r, frozenset(cells))


def _parse_relation(params, body, source):
    n, r = params["n"], params["r"]
    if n < 1:
        _fail(source, 1, "arity must be at least 1")
    tuples = set()
    for lineno, line in body:
        parts = line.split()
        if parts[0] != "tuple":
            _fail(source, lineno, f"expected 'tuple', got {parts[0]!r}")
        if any(p.startswith("*") for p in parts[1:]):
            _fail(source, lineno, "placeholders are not allowed in relation files")
        es = _ints(parts[1:], source, lineno)
        _check_vertices(es, r, source, lineno)
        if len(es) != n:
            _fail(source, lineno, f"tuple must have {n} entries")
        t = tuple(es)
        if t in tuples:
            _fail(source, lineno, f"duplicate tuple {t}")
        tuples.add(t)
    return NaryRelation(n, 0, r, frozenset(tuples))


def _parse_group(params, body, source):
    m = params["r"]
    rows = []
    for lineno, line in body:
        parts = line.split()
        if parts[0] != "row":
            _fail(source, lineno, f"expected 'row', got {parts[0]!r}")
        entries = _ints(parts[1:], source, lineno)
        if len(entries) != m:
            _fail(source, lineno, f"row must have {m} entries")
        rows.append(tuple(entries))
    if len(rows) != m:
        raise InputError(f"{source}: expected {m} rows, found {len(rows)}")
    return GroupTable(tuple(rows))


_PARSERS = {
    "igraph": _parse_igraph,
    "origraph": _parse_origraph,
    "bgraph": _parse_bgraph,
    "relation": _parse_relation,
    "group": _parse_group,
}


def serialize(obj) -> str:
    """Canonical file text; ``parse_text(serialize(x)) == x``."""
    if isinstance(obj, IGraph):
        lines = [f"igraph i={obj.arity} r={obj.vertex_count}"]
        lines += ["cell " + " ".join(map(str, c)) if c else "cell" for c in sorted(obj.cells)]
    elif isinstance(obj, OrientedGraph):
        lines = [f"origraph i={obj.arity} r={obj.vertex_count}"]
        for c in sorted(obj.cells):
            sign = "+" if c.sign > 0 else "-"
            lines.append(" ".join(["cell", sign, *map(str, c.support)]))
    elif isinstance(obj, BoundaryGraph):
        if obj.label_length:
            raise InputError("only unlabeled boundary graphs have a file form")
        lines = [f"bgraph i={obj.arity} r={obj.vertex_count}"]
        for c in sorted(obj.cells):
            lines.append(" ".join(["cell", *map(str, c.support), ";", "boundary", *map(str, c.boundary)]))
    elif isinstance(obj, NaryRelation):
        if obj.depth:
            raise InputError("only depth-0 relations have a file form")
        lines = [f"relation n={obj.arity} r={obj.vertex_count}"]
        lines += ["tuple " + " ".join(map(str, t)) for t in sorted(obj.tuples)]
    elif isinstance(obj, GroupTable):
        lines = [f"group r={obj.order}"]
        lines += ["row " + " ".join(map(str, row)) for row in obj.table]
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def describe(obj) -> str:
    """One-line description used inside reports."""
    if isinstance(obj, IGraph):
        cells = " ".join("{" + ",".join(map(str, c)) + "}" for c in sorted(obj.cells))
        return f"igraph i={obj.arity} r={obj.vertex_count} cells=[{cells}]"
    if isinstance(obj, OrientedGraph):
        cells = " ".join(
            ("+" if c.sign > 0 else "-") + "{" + ",".join(map(str, c.support)) + "}"
            for c in sorted(obj.cells)
        )
        return f"origraph i={obj.arity} r={obj.vertex_count} cells=[{cells}]"
    if isinstance(obj, BoundaryGraph):
        cells = " ".join(
            "{" + ",".join(map(str, c.support)) + "}/{" + ",".join(map(str, c.boundary)) + "}" + c.label
            for c in sorted(obj.cells)
        )
        return f"bgraph i={obj.arity} r={obj.vertex_count} d={obj.label_length} cells=[{cells}]"
    if isinstance(obj, NaryRelation):
        tuples = " ".join(format_tuple(t) for t in sorted(obj.tuples, key=tuple_key))
        return f"relation n={obj.arity} d={obj.depth} r={obj.vertex_count} tuples=[{tuples}]"
    if isinstance(obj, GroupTable):
        rows = ";".join(",".join(map(str, row)) for row in obj.table)
        return f"group r={obj.order} table=[{rows}]"
    raise InputError(f"cannot describe {type(obj).__name__}")
