"""CLI tests: exit codes and output shapes, in-process through main()."""

import json

import pytest

from hyperflip import PointConfig, fileio
from hyperflip.cli import main
from hyperflip.hypertriangulations import Hypertriangulation, LabeledTriangle

from conftest import Q4_COORDS, T4_COORDS, q4_level2_fixture


@pytest.fixture
def files(tmp_path):
    q4 = PointConfig.from_coords(Q4_COORDS)
    points = tmp_path / "q4.json"
    fileio.save_points(points, q4)
    tri = tmp_path / "fixture.json"
    fileio.save_triangulation(tri, q4_level2_fixture(q4))
    return {"points": points, "tri": tri, "dir": tmp_path, "config": q4}


def run(*argv):
    return main([str(a) for a in argv])


def test_sums(files, capsys):
    assert run("sums", "--points", files["points"], "--k", "2") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sums"]["1.2"] == ["6", "0"]
    assert data["sums"]["3.4"] == ["8", "11"]


def test_validate_ok_and_failure(files, tmp_path, capsys):
    assert run("validate", "--points", files["points"], "--k", "2",
               "--tri", files["tri"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True

    broken = tmp_path / "broken.json"
    q4 = files["config"]
    bad = Hypertriangulation(
        q4.level(2),
        [
            LabeledTriangle.make((1, 2), (2, 3), (1, 3)),
            LabeledTriangle.make((2, 3), (3, 4), (1, 3)),
        ],
    )
    fileio.save_triangulation(broken, bad)
    assert run("validate", "--points", files["points"], "--k", "2",
               "--tri", broken) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False


def test_validate_degenerate_exit(files, tmp_path, capsys):
    degenerate = tmp_path / "deg.json"
    fileio.save_points(degenerate, PointConfig.from_coords(
        [(0, 0), (1, 0), (2, 0), (0, 1)]))
    assert run("validate", "--points", degenerate, "--k", "1",
               "--tri", files["tri"]) == 3


def test_enumerate_census_line(files, capsys):
    assert run("enumerate", "--points", files["points"], "--k", "2") == 0
    out = capsys.readouterr().out.strip()
    assert out == "2 hypertriangulations, 1 edge (III)"


def test_enumerate_t4_type_iv(tmp_path, capsys):
    points = tmp_path / "t4.json"
    fileio.save_points(points, PointConfig.from_coords(T4_COORDS))
    assert run("enumerate", "--points", points, "--k", "2") == 0
    assert capsys.readouterr().out.strip() == "2 hypertriangulations, 1 edge (IV)"


def test_enumerate_graph_and_filters(files, tmp_path, capsys):
    graph = tmp_path / "graph.json"
    assert run("enumerate", "--points", files["points"], "--k", "2",
               "--graph", graph, "--only-types", "I,III") == 0
    data = json.loads(graph.read_text())
    assert len(data["nodes"]) == 2
    assert len(data["edges"]) == 1 and data["edges"][0][2] == "III"
    assert run("enumerate", "--points", files["points"], "--k", "2",
               "--coherent-only") == 0
    assert "2 hypertriangulations" in capsys.readouterr().out


def test_enumerate_budget_exit(files, capsys):
    assert run("--budget", "2", "enumerate", "--points", files["points"],
               "--k", "2") == 4


def test_coherent_and_gkz(files, capsys):
    assert run("coherent", "--points", files["points"], "--k", "2",
               "--squared-norms", "--gkz") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["k"] == 2 and len(data["triangles"]) == 4
    assert "gkz" in data and len(data["gkz"]) == 4


def test_coherent_heights_file_and_flat(files, tmp_path, capsys):
    heights = tmp_path / "h.json"
    heights.write_text('{"heights": ["0", "1", "0", "1"]}')
    assert run("coherent", "--points", files["points"], "--k", "2",
               "--heights", heights) == 0
    data = json.loads(capsys.readouterr().out)
    used = {tuple(lab) for tri in data["triangles"] for lab in tri}
    assert (1, 3) in used and (2, 4) not in used
    heights.write_text('{"heights": ["0", "0", "0", "0"]}')
    assert run("coherent", "--points", files["points"], "--k", "2",
               "--heights", heights) == 3
    data = json.loads(capsys.readouterr().out)
    assert "non_triangular_faces" in data


def test_flips_listing_and_apply(files, tmp_path, capsys):
    assert run("flips", "--points", files["points"], "--k", "2",
               "--tri", files["tri"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["flips"]) == 1 and data["flips"][0]["type"] == "III"
    out = tmp_path / "after.json"
    assert run("flips", "--points", files["points"], "--k", "2",
               "--tri", files["tri"], "--apply", "0", "--out", out) == 0
    after = json.loads(out.read_text())
    assert [2, 4] in [lab for tri in after["triangles"] for lab in tri]
    assert run("flips", "--points", files["points"], "--k", "2",
               "--tri", files["tri"], "--apply", "5") == 2


def test_age_up_down_roundtrip(files, tmp_path, capsys):
    down = tmp_path / "down.json"
    assert run("age", "--points", files["points"], "--tri", files["tri"],
               "--down", "--out", down) == 0
    data = json.loads(down.read_text())
    assert data["k"] == 1 and len(data["triangles"]) == 2
    up = tmp_path / "up.json"
    assert run("age", "--points", files["points"], "--tri", down,
               "--up", "--out", up) == 0
    assert json.loads(up.read_text()) == json.loads(files["tri"].read_text())
    assert run("age", "--points", files["points"], "--tri", down, "--down") == 2


def test_connect(files, tmp_path, capsys):
    other = tmp_path / "other.json"
    assert run("flips", "--points", files["points"], "--k", "2",
               "--tri", files["tri"], "--apply", "0", "--out", other) == 0
    out = tmp_path / "path.json"
    assert run("connect", "--points", files["points"], "--k", "2",
               "--from", files["tri"], "--to", other, "--out", out) == 0
    path = json.loads(out.read_text())
    assert len(path["flips"]) == 1 and path["flips"][0]["type"] == "III"
    # path files are re-readable
    assert len(fileio.load_flips(out)) == 1


def test_overlap_search(tmp_path, capsys):
    out = tmp_path / "witness.json"
    assert run("overlap-search", "--n", "5", "--trials", "200",
               "--seed", "0", "--out", out) == 0
    data = json.loads(out.read_text())
    assert data["overlaps"]
    assert data["k"] == 2
    # witness re-validates and still overlaps
    config = fileio.points_from_json(data)
    u = fileio.triangles_from_json(data, config)
    from hyperflip import aging_overlap, validate

    assert validate(u).ok
    assert aging_overlap(u)


def test_malformed_points_exit(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run("sums", "--points", bad, "--k", "2") == 2


def test_budget_env_var(files, monkeypatch, capsys):
    monkeypatch.setenv("HYPERFLIP_BUDGET", "2")
    assert run("enumerate", "--points", files["points"], "--k", "2") == 4
    monkeypatch.setenv("HYPERFLIP_BUDGET", "100000")
    assert run("enumerate", "--points", files["points"], "--k", "2") == 0


def test_overlap_search_exhaustion_exit(tmp_path):
    assert run("overlap-search", "--n", "5", "--trials", "0", "--seed", "1") == 4


def test_flips_and_connect_reject_invalid_inputs(files, tmp_path):
    broken = tmp_path / "broken.json"
    q4 = files["config"]
    bad = Hypertriangulation(
        q4.level(2), [LabeledTriangle.make((1, 2), (2, 3), (1, 3))]
    )
    fileio.save_triangulation(broken, bad)
    assert run("flips", "--points", files["points"], "--k", "2",
               "--tri", broken) == 2
    assert run("connect", "--points", files["points"], "--k", "2",
               "--from", broken, "--to", files["tri"]) == 2
