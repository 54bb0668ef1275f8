from __future__ import annotations

import json
import os

import pytest

from multss.cli import main
from multss.fixtures import circle, torus
from multss.io import (SchemaError, _Doc, atomic_write, complex_to_json, load_json, parse_complex, parse_cover,
                       parse_group, parse_ring, parse_tower)


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj, indent=2) if not isinstance(obj, str) else obj)
    return p


def test_complex_round_trip(tmp_path):
    p = _write(tmp_path, "t.json", complex_to_json(torus()))
    K = parse_complex(load_json(p))
    assert K.f_vector() == torus().f_vector()
    assert parse_complex(_Doc("S1")) == circle()


def test_non_closed_complex_reports_path_and_line(tmp_path):
    text = '{\n  "vertices": ["a", "b", "c"],\n  "simplices": [\n    [0, 1],\n    [0, 1, 2]\n  ]\n}\n'
    p = _write(tmp_path, "bad.json", text)
    with pytest.raises(SchemaError) as exc:
        parse_complex(load_json(p))
    e = exc.value
    assert e.path == "$.simplices[1]" and e.line == 5
    assert "not closed" in str(e) and "bad.json:5" in str(e)


@pytest.mark.parametrize("doc, path", [
    ({"vertices": ["a"]}, "$"),
    ({"vertices": ["a", "a"], "simplices": []}, "$.vertices"),
    ({"vertices": ["a", "b"], "simplices": [[1, 0]]}, "$.simplices[0]"),
    ({"vertices": ["a", "b"], "simplices": [[0, 5]]}, "$.simplices[0]"),
    ({"schema_version": 9, "vertices": [], "simplices": []}, "$.schema_version"),
    ("Nowhere", "$"),
])
def test_complex_schema_errors(doc, path):
    with pytest.raises(SchemaError) as exc:
        parse_complex(_Doc(doc))
    assert exc.value.path == path


def test_group_ring_cover_parsers():
    assert len(parse_group(_Doc({"cyclic": 3}))) == 3
    with pytest.raises(SchemaError) as exc:
        parse_group(_Doc({"table": [[0, 1], [1, 1]]}))
    assert exc.value.path == "$.table"
    assert parse_ring(_Doc("Z/4")).modulus(0) == 4
    with pytest.raises(SchemaError):
        parse_ring(_Doc("Q"))
    with pytest.raises(SchemaError):
        parse_ring(_Doc({"levels": {"1": "Z"}}))
    cov = parse_cover(_Doc({"base": "S1", "pieces": [[[0, 1], [1, 2]], [[0, 2]]]}))
    assert len(cov.pieces) == 2
    with pytest.raises(SchemaError) as exc:
        parse_cover(_Doc({"base": "S1", "pieces": [[[0, 1]]]}))
    assert exc.value.path == "$.pieces"


def test_tower_parser_errors():
    with pytest.raises(SchemaError) as exc:
        parse_tower(_Doc({"kind": "lhs"}))
    assert exc.value.path == "$.kind"
    with pytest.raises(SchemaError):
        parse_tower(_Doc({"kind": "ahss"}))                          # no complex
    with pytest.raises(SchemaError) as exc:
        parse_tower(_Doc({"kind": "serre", "complex": "S1", "modulus": 1}))
    assert exc.value.path == "$.modulus"


def test_invalid_json_line(tmp_path):
    p = _write(tmp_path, "broken.json", '{\n "kind": "ahss",\n "complex": \n}')
    with pytest.raises(SchemaError) as exc:
        load_json(p)
    assert exc.value.line == 4


def test_atomic_write(tmp_path):
    target = tmp_path / "sub" / "out.json"
    atomic_write(target, "one\n")
    atomic_write(target, "two\n")
    assert target.read_text() == "two\n"
    assert os.listdir(target.parent) == ["out.json"]

    class Boom:
        def __str__(self):
            raise RuntimeError

    with pytest.raises(TypeError):
        atomic_write(target, Boom())
    assert target.read_text() == "two\n"
    assert os.listdir(target.parent) == ["out.json"]


def test_cli_compute_point(tmp_path, capsys):
    spec = _write(tmp_path, "pt.json", {"kind": "ahss", "complex": "point"})
    assert main(["compute", "--input", str(spec), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "pt.pages.json").read_text())
    assert [len(p["entries"]) for p in doc["pages"]] == [1]
    e = doc["pages"][0]["entries"][0]
    assert (e["bidegree"], e["rank"], e["torsion"]) == ([0, 0], 1, [])
    assert doc["abutment"]["ok"] and doc["limit_index"] == 1


def test_cli_compute_csv_and_coeff(tmp_path, capsys):
    spec = _write(tmp_path, "rp2.json", {"kind": "ahss", "complex": "RP2"})
    assert main(["compute", "--input", str(spec), "--coeff", "Z/2", "--pages", "1..2", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("r,") and len(out.splitlines()) > 3


def test_cli_bockstein(tmp_path, capsys):
    spec = _write(tmp_path, "b.json", {"kind": "bockstein", "complex": "RP3"})
    assert main(["compute", "--input", str(spec), "--modulus", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["limit_index"] == 2
    assert [e["degree"] for e in doc["pages"][-1]["entries"]] == [0, 3]
    assert main(["compute", "--input", str(spec)]) == 2            # no modulus


def test_cli_schema_error_exit_code(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", '{\n "kind": "ahss",\n "complex": {"vertices": ["a"], "simplices": [[0, 3]]}\n}')
    assert main(["compute", "--input", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "schema error" in err and "$.complex.simplices[0]" in err and ":3:" in err


def test_cli_pair(tmp_path, capsys):
    spec = _write(tmp_path, "torus.json", {"kind": "ahss", "complex": "T2"})
    assert main(["pair", "--input", str(spec), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "PASS torus: E2 vs graded cup" in out and "FAIL" not in out
    doc = json.loads((tmp_path / "torus.pairing.json").read_text())
    assert all(v["isomorphic"] for v in doc["verdicts"])
    assert main(["pair", "--input", str(spec), "--input", str(spec), "--input", str(spec)]) == 2
    d = _write(tmp_path, "d.json", {"kind": "descent", "cover": {"base": "S1", "pieces": [[[0, 1], [1, 2]], [[0, 2]]]}})
    assert main(["pair", "--input", str(d)]) == 2


def test_cli_check():
    assert main(["check", "--range", "4"]) == 0


def test_cli_convert_round_trip(tmp_path, capsys):
    spec = _write(tmp_path, "s2.json", {"kind": "ahss", "complex": "S2", "ring": "Z"})
    assert main(["compute", "--input", str(spec), "--out", str(tmp_path)]) == 0
    pages = tmp_path / "s2.pages.json"
    assert main(["convert", "--input", str(pages), "--to", "ahss", "--out", str(tmp_path)]) == 0
    conv = tmp_path / "s2.pages.ahss.json"
    assert json.loads(conv.read_text())["indexing"] == "ahss"
    assert main(["convert", "--input", str(conv), "--to", "engine", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "s2.pages.ahss.engine.json").read_text() == pages.read_text()
    assert main(["convert", "--input", str(spec)]) == 2
