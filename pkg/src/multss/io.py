"""JSON formats for complexes, maps, groups, graded rings and tower specs.

Every document may carry "schema_version" (currently 1).  Schema errors are
raised as SchemaError with a JSON path and, when the source text is known,
the line it sits on.

    complex  {"vertices": [names], "simplices": [[i, j, ...], ...]}
             or the name of a built-in fixture, e.g. "T2"
    map      {"source": complex, "target": complex, "vertex_map": [target indices]}
    group    {"table": [[...], ...]}  or  {"cyclic": n}
    ring     {"levels": {"q": "Z" | "Z/m" | "0"}, "pairing": [...], "period": {...}}
             or one of "Z", "Z/m"
    cover    {"base": complex, "pieces": [[facets], ...]}
    tower    {"kind": "ahss" | "serre" | "bockstein" | "descent" | "group",
              "complex" | "map" | "cover" | "group": ..., "ring": ..., "modulus": m,
              "options": {"window": [q, ...], "maxdim": d, "pages": [r1, r2],
                          "action": [1, ...]}}   (group action: trivial only)
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Mapping

from .fixtures import FIXTURES, fixture
from .graded import SCHEMA_VERSION, GradedRing, InvalidGradedRing
from .instances import KINDS, CoverData, NotACover, TowerSpec
from .simplicial import (InvalidGroupTable, InvalidSimplicialMap, NotAComplex, OrderedComplex,
                         SimplicialMap, _check_group_table, cyclic_group)


class SchemaError(ValueError):
    def __init__(self, message: str, path: str = "$", line: int | None = None, source: str = ""):
        self.path, self.line, self.source = path, line, source
        where = f"{source}:" if source else ""
        where += f"{line}: " if line is not None else " "
        super().__init__(f"{where}{path}: {message}".strip())


# ---------------------------------------------------------------------------
# line numbers for JSON paths


def _line_index(text: str) -> dict:
    """Map JSON paths ("$.a[3].b") to the line where their value starts."""
    out: dict = {}
    pos = 0
    n = len(text)

    def ws():
        nonlocal pos
        while pos < n and text[pos] in " \t\r\n":
            pos += 1

    def string():
        nonlocal pos
        m = re.compile(r'"(?:[^"\\]|\\.)*"').match(text, pos)
        if not m:
            raise ValueError
        pos = m.end()
        return json.loads(m.group())

    def value(path):
        nonlocal pos
        ws()
        out[path] = text.count("\n", 0, pos) + 1
        if pos >= n:
            return
        ch = text[pos]
        if ch == "{":
            pos += 1
            ws()
            if text[pos] == "}":
                pos += 1
                return
            while True:
                ws()
                key = string()
                ws()
                pos += 1            # ':'
                value(f"{path}.{key}")
                ws()
                ch = text[pos]
                pos += 1
                if ch == "}":
                    return
        elif ch == "[":
            pos += 1
            ws()
            if text[pos] == "]":
                pos += 1
                return
            i = 0
            while True:
                value(f"{path}[{i}]")
                i += 1
                ws()
                ch = text[pos]
                pos += 1
                if ch == "]":
                    return
        elif ch == '"':
            string()
        else:
            m = re.compile(r"[-+0-9.eEtruefalsn]+").match(text, pos)
            pos = m.end() if m else pos + 1

    try:
        value("$")
    except (ValueError, IndexError):
        pass
    return out


class _Doc:
    """Parsed JSON plus the path -> line table of its text."""

    def __init__(self, data: Any, text: str | None = None, source: str = ""):
        self.data = data
        self.lines = _line_index(text) if text is not None else {}
        self.source = source

    def fail(self, message: str, path: str) -> SchemaError:
        at = path
        line = self.lines.get(at)
        while line is None and at not in ("$", ""):
            up = re.sub(r"(\.[^.\[]*|\[\d+\])$", "", at)
            if up == at:
                break
            at = up
            line = self.lines.get(at)
        return SchemaError(message, path, line, self.source)


def load_json(path: str | os.PathLike) -> _Doc:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, "$", exc.lineno, str(path)) from None
    return _Doc(data, text, str(path))


def _version(doc: _Doc, node: Any, path: str) -> None:
    if isinstance(node, Mapping) and "schema_version" in node:
        v = node["schema_version"]
        if v != SCHEMA_VERSION:
            raise doc.fail(f"unsupported schema_version {v!r} (expected {SCHEMA_VERSION})", f"{path}.schema_version")


# ---------------------------------------------------------------------------
# parsers


def parse_complex(doc: _Doc, node: Any = None, path: str = "$") -> OrderedComplex:
    node = doc.data if node is None else node
    if isinstance(node, str):
        if node not in FIXTURES:
            raise doc.fail(f"unknown fixture {node!r}", path)
        return fixture(node)
    if not isinstance(node, Mapping):
        raise doc.fail("expected an object or a fixture name", path)
    _version(doc, node, path)
    for key in ("vertices", "simplices"):
        if key not in node:
            raise doc.fail(f"missing field {key!r}", path)
    verts = node["vertices"]
    if not isinstance(verts, list) or len(set(map(str, verts))) != len(verts):
        raise doc.fail("vertices must be a list of distinct names", f"{path}.vertices")
    simps = node["simplices"]
    if not isinstance(simps, list):
        raise doc.fail("simplices must be a list", f"{path}.simplices")
    given = set()
    for i, s in enumerate(simps):
        p = f"{path}.simplices[{i}]"
        if not isinstance(s, list) or not s or not all(isinstance(v, int) and not isinstance(v, bool) for v in s):
            raise doc.fail("a simplex is a nonempty list of vertex indices", p)
        if any(v < 0 or v >= len(verts) for v in s):
            raise doc.fail("vertex index out of range", p)
        if any(b <= a for a, b in zip(s, s[1:])):
            raise doc.fail("vertex indices must be strictly increasing", p)
        given.add(tuple(s))
    for i, s in enumerate(simps):
        s = tuple(s)
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            if len(face) > 1 and face not in given:
                raise doc.fail(f"simplex set is not closed: face {list(face)} of {list(s)} is missing",
                               f"{path}.simplices[{i}]")
    try:
        return OrderedComplex(verts, given, name=node.get("name", ""))
    except NotAComplex as exc:
        raise doc.fail(str(exc), path) from None


def parse_map(doc: _Doc, node: Any = None, path: str = "$") -> SimplicialMap:
    node = doc.data if node is None else node
    if not isinstance(node, Mapping):
        raise doc.fail("expected an object", path)
    _version(doc, node, path)
    for key in ("source", "target", "vertex_map"):
        if key not in node:
            raise doc.fail(f"missing field {key!r}", path)
    X = parse_complex(doc, node["source"], f"{path}.source")
    B = parse_complex(doc, node["target"], f"{path}.target")
    try:
        return SimplicialMap(X, B, node["vertex_map"])
    except (InvalidSimplicialMap, TypeError, IndexError) as exc:
        raise doc.fail(str(exc) or "invalid vertex map", f"{path}.vertex_map") from None


def parse_group(doc: _Doc, node: Any = None, path: str = "$") -> list:
    node = doc.data if node is None else node
    if not isinstance(node, Mapping):
        raise doc.fail("expected an object", path)
    _version(doc, node, path)
    if "cyclic" in node:
        n = node["cyclic"]
        if not isinstance(n, int) or n < 1:
            raise doc.fail("cyclic order must be a positive integer", f"{path}.cyclic")
        return cyclic_group(n)
    if "table" not in node:
        raise doc.fail("missing field 'table'", path)
    try:
        _check_group_table(node["table"])
    except (InvalidGroupTable, TypeError) as exc:
        raise doc.fail(str(exc), f"{path}.table") from None
    return [list(row) for row in node["table"]]


_MOD = re.compile(r"Z/(\d+)$")


def parse_ring(doc: _Doc, node: Any = None, path: str = "$") -> GradedRing:
    node = doc.data if node is None else node
    if isinstance(node, str):
        if node == "Z":
            return GradedRing.integers()
        m = _MOD.match(node)
        if m and int(m.group(1)) >= 2:
            return GradedRing.mod(int(m.group(1)))
        raise doc.fail(f"unknown ring shorthand {node!r}", path)
    if not isinstance(node, Mapping):
        raise doc.fail("expected a graded ring object", path)
    _version(doc, node, path)
    try:
        return GradedRing.from_json(node, name=node.get("name", ""))
    except (InvalidGradedRing, ValueError, TypeError, KeyError) as exc:
        raise doc.fail(str(exc), path) from None


def parse_cover(doc: _Doc, node: Any = None, path: str = "$") -> CoverData:
    node = doc.data if node is None else node
    if not isinstance(node, Mapping) or "base" not in node or "pieces" not in node:
        raise doc.fail("a cover needs 'base' and 'pieces'", path)
    base = parse_complex(doc, node["base"], f"{path}.base")
    pieces = []
    for i, facets in enumerate(node["pieces"]):
        try:
            pieces.append(base.subcomplex([tuple(f) for f in facets]))
        except (NotAComplex, TypeError) as exc:
            raise doc.fail(str(exc), f"{path}.pieces[{i}]") from None
    try:
        return CoverData(base, pieces)
    except NotACover as exc:
        raise doc.fail(str(exc), f"{path}.pieces") from None


def parse_tower(doc: _Doc, node: Any = None, path: str = "$", ring: GradedRing | None = None,
                modulus: int | None = None) -> TowerSpec:
    node = doc.data if node is None else node
    if not isinstance(node, Mapping):
        raise doc.fail("expected a tower object", path)
    _version(doc, node, path)
    kind = node.get("kind")
    if kind not in KINDS:
        raise doc.fail(f"kind must be one of {', '.join(KINDS)}", f"{path}.kind")
    kw: dict = {"kind": kind, "options": dict(node.get("options", {}))}
    if "complex" in node:
        kw["complex"] = parse_complex(doc, node["complex"], f"{path}.complex")
    if "map" in node:
        kw["map"] = parse_map(doc, node["map"], f"{path}.map")
    if "cover" in node:
        kw["cover"] = parse_cover(doc, node["cover"], f"{path}.cover")
    if "group" in node:
        kw["group"] = parse_group(doc, node["group"], f"{path}.group")
    if ring is not None:
        kw["ring"] = ring
    elif "ring" in node:
        kw["ring"] = parse_ring(doc, node["ring"], f"{path}.ring")
    m = modulus if modulus is not None else node.get("modulus", 0)
    if not isinstance(m, int) or m < 0 or m == 1:
        raise doc.fail("modulus must be 0 or at least 2", f"{path}.modulus")
    kw["modulus"] = m
    try:
        return TowerSpec(**kw)
    except ValueError as exc:
        raise doc.fail(str(exc), path) from None


def complex_to_json(K: OrderedComplex) -> dict:
    return {"schema_version": SCHEMA_VERSION, "name": K.name, "vertices": [str(v) for v in K.vertices],
            "simplices": [list(s) for s in K.simplices()]}


# ---------------------------------------------------------------------------
# output


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write the whole file or nothing."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"
