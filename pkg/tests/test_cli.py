import json

import pytest

from qvtmaps import fixtures as fx
from qvtmaps import fmio
from qvtmaps.cli import main


def test_solve_type(capsys):
    assert main(["solve-type", "5,5,5,3"]) == 0
    out = capsys.readouterr().out
    assert "32/15" in out and "hyperbolic" in out
    assert main(["solve-type", "4,4,4,4"]) == 0
    assert "euclidean" in capsys.readouterr().out


def test_solve_type_json(capsys):
    assert main(["solve-type", "5,5,5,3", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["alpha"] == "32/15" and doc["class"] == "hyperbolic"


@pytest.mark.parametrize("argv", [
    ["solve-type", "3,3"],
    ["solve-type", "5,x"],
    ["build-f", "6"],
    ["build-f", "3"],
    ["census", "--type", "5,5,3", "--chi", "-1", "--out", "unused"],
    ["tile", "5", "--depth", "0"],
    ["tile", "5", "--depth", "-1", "--svg", "unused.svg"],
    ["frobnicate"],
    [],
])
def test_invalid_input_exits_1(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 1


def test_build_f_reports_mismatch(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["build-f", "5", "--json", str(out)]) == 2
    text = capsys.readouterr().out
    assert "MISMATCH" in text and "all proper: True" in text
    first = out.read_bytes()
    main(["build-f", "5", "--json", str(out)])
    assert out.read_bytes() == first
    doc = json.loads(first)
    assert doc["all_proper"] and not doc["all_match"]


def test_build_f_p7(tmp_path, capsys):
    out = tmp_path / "r7.json"
    main(["build-f", "7", "--json", str(out)])
    doc = json.loads(out.read_text())
    assert doc["boundary_vertex_count"] == 16
    assert len(doc["pairings"]) == 8


def test_tile(tmp_path, capsys):
    svg = tmp_path / "out.svg"
    js = tmp_path / "out.json"
    assert main(["tile", "5", "--depth", "3", "--svg", str(svg), "--json", str(js)]) == 0
    assert svg.read_text().startswith("<svg")
    doc = json.loads(js.read_text())
    assert doc["homogeneous"] and doc["polyhedral"] and doc["interior"] > 0
    seed = tmp_path / "o.svg"
    assert main(["tile", "5", "--depth", "0", "--svg", str(seed)]) == 0
    assert seed.read_text().count('class="kite"') == 5


def test_census_polyhedral_chi_minus_1(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["census", "--type", "5,5,5,3", "--chi", "-1", "--polyhedral",
                 "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["count"] == 0
    assert list(out.glob("*.fm")) == []


def test_census_first(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["census", "--type", "5,5,5,3", "--chi", "-1", "--first",
                 "--out", str(out)]) == 0
    files = list(out.glob("*.fm"))
    assert len(files) == 1
    m = fmio.read(files[0])
    assert (m.V, m.E, m.F) == (15, 30, 14)


def test_census_first_without_witness_exits_3(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["census", "--type", "3,3,3,3,3", "--chi", "1", "--orientable", "--first",
                 "--out", str(out)]) == 3
    assert json.loads((out / "manifest.json").read_text())["count"] == 0


def test_census_curvature_mismatch_exits_1(tmp_path, capsys):
    assert main(["census", "--type", "5,5,5,3", "--chi", "1", "--out", str(tmp_path)]) == 1


def test_inspect_and_dual(tmp_path, capsys):
    anti = tmp_path / "antiprism4.fm"
    fmio.write(anti, fx.antiprism(4))
    assert main(["inspect", str(anti), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["chi"] == 2 and doc["vertex_orbits"] == 1
    cube = tmp_path / "cube.fm"
    dual = tmp_path / "o.fm"
    fmio.write(cube, fx.cube())
    assert main(["dual", str(cube), str(dual)]) == 0
    assert main(["inspect", str(dual), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["V"] == 6


def test_inspect_errors(tmp_path, capsys):
    bad = tmp_path / "bad.fm"
    bad.write_text("flags 3\n")
    assert main(["inspect", str(bad)]) == 1
    assert "line" in capsys.readouterr().err
    assert main(["inspect", str(tmp_path / "missing.fm")]) == 1


def test_vt_check(capsys):
    assert main(["vt-check", "7"]) == 0
    assert "obstructed" in capsys.readouterr().out
    assert main(["vt-check", "9", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "not_obstructed"
    assert main(["vt-check", "2"]) == 1
