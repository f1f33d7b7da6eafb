import numpy as np
import pytest

from mapperci.cli import main
from mapperci.errors import InputError
from mapperci.fileio import (
    confidence_to_csv,
    diagram_to_csv,
    diagram_to_svg,
    load_points,
    mapper_to_dot,
    parse_dot,
    parse_points,
    read_diagram_csv,
    save_points,
)
from mapperci.confidence import significant_features
from mapperci.geometry import PointCloud
from mapperci.persistence import ExtendedDiagram
from mapperci.runner import RunConfig, run_pipeline
from mapperci.shapes import synth_shape


def test_parse_points():
    assert parse_points("0,0\n3,4\n").points.tolist() == [[0, 0], [3, 4]]
    assert parse_points("x,y\n0,0\n3,4\n").points.tolist() == [[0, 0], [3, 4]]
    with pytest.raises(InputError, match=":2:"):
        parse_points("1,2\n3\n")
    with pytest.raises(InputError, match=":2:"):
        parse_points("1,2\n3,a\n")
    with pytest.raises(InputError):
        parse_points("")


def test_points_roundtrip(tmp_path):
    pc = synth_shape("torus", 30, rng=2)
    path = tmp_path / "p.csv"
    save_points(pc, path)
    assert np.array_equal(load_points(path).points, pc.points)
    with pytest.raises(InputError):
        load_points(tmp_path / "missing.csv")


@pytest.fixture(scope="module")
def circle_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    pc = synth_shape("circle", 300, 0.01, rng=0)
    cfg = RunConfig(output=str(out), bootstrap=10, subsamples=20, seed=5)
    return run_pipeline(cfg, points=pc), out


def test_artifacts_written(circle_run):
    res, out = circle_run
    for name in ("mapper.dot", "diagram.csv", "confidence.csv", "diagram.svg", "params.txt"):
        assert (out / name).stat().st_size > 0
    assert "reach_condition = unverifiable" in (out / "params.txt").read_text()


def test_dot_roundtrip(circle_run):
    res, out = circle_run
    m = res.result.mapper
    nodes, edges = parse_dot((out / "mapper.dot").read_text())
    assert len(nodes) == len(m.nodes)
    assert sorted(edges) == sorted(m.edges)
    for v in m.nodes:
        assert nodes[v.id] == (v.size, v.fvalue)
    assert 'label="c0|' in mapper_to_dot(m)


def test_diagram_csv_roundtrip(circle_run):
    res, out = circle_run
    assert read_diagram_csv((out / "diagram.csv").read_text()) == res.result.diagram
    header = (out / "confidence.csv").read_text().splitlines()[0]
    assert header == "type,birth,death,eta,significant"


def test_single_point_run(tmp_path):
    res = run_pipeline(RunConfig(output=str(tmp_path), bootstrap=3), points=PointCloud([[0.5, 1.0]]))
    assert len(res.result.mapper.nodes) == 1
    (pt,) = res.result.diagram.points
    # node value is the midpoint of the lone interval, a hair above the point
    assert pt.ptype == "Ext0" and pt.birth == pt.death == pytest.approx(0.5, abs=1e-8)
    nodes, edges = parse_dot((tmp_path / "mapper.dot").read_text())
    assert len(nodes) == 1 and edges == []


def test_svg_deterministic():
    d = ExtendedDiagram.from_tuples([("Ord0", 0, 1), ("Rel1", 1, 0), ("Ext0", 0, 2), ("Ext1", 2, 0)])
    a = diagram_to_svg(d, 0.3)
    assert a == diagram_to_svg(d, 0.3)
    assert a.startswith("<svg") and "<line" in a
    assert diagram_to_svg(ExtendedDiagram(()), 0.0).startswith("<svg")


def test_confidence_csv_flags():
    d = ExtendedDiagram.from_tuples([("Ord0", 0, 4), ("Ord0", 0, 1)])
    rows = confidence_to_csv(significant_features(d, 1.0)).splitlines()
    assert rows[1:] == ["Ord0,0.0,1.0,1.0,false", "Ord0,0.0,4.0,1.0,true"]
    assert diagram_to_csv(d).splitlines()[0] == "type,birth,death"


# --- command line ---------------------------------------------------------

@pytest.fixture
def points_file(tmp_path):
    path = tmp_path / "circle.csv"
    save_points(synth_shape("circle", 150, 0.01, rng=1), path)
    return path


def test_cli_run_deterministic(tmp_path, points_file):
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}"
        code = main(["run", str(points_file), "--bootstrap", "5", "--subsamples", "10",
                     "--seed", "3", "--out", str(out)])
        assert code == 0
        outs.append(out)
    for name in ("mapper.dot", "diagram.csv", "confidence.csv", "diagram.svg", "params.txt"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


@pytest.mark.parametrize("method,extra", [("subsampling", ["--mc", "50"]), ("known", ["--a", "1", "--b", "1"])])
def test_cli_confidence_methods(tmp_path, points_file, method, extra):
    out = tmp_path / method
    code = main(["run", str(points_file), "--subsamples", "10", "--confidence-method", method,
                 "--out", str(out), *extra])
    assert code == 0
    assert f"confidence_method = {method}" in (out / "params.txt").read_text()


def test_cli_tune(capsys, points_file):
    assert main(["tune", str(points_file), "--subsamples", "10"]) == 0
    text = capsys.readouterr().out
    assert "delta = " in text and "intersection_crossing_edges = 0" in text


def test_cli_bootstrap(capsys, points_file):
    assert main(["bootstrap", str(points_file), "--subsamples", "10", "--bootstrap", "4"]) == 0
    assert capsys.readouterr().out.startswith("type,birth,death,eta,significant")


def test_cli_synth_denoise(tmp_path):
    raw, clean = tmp_path / "crater.csv", tmp_path / "clean.csv"
    assert main(["synth", "crater", "--n", "300", "--seed", "2", "--out", str(raw)]) == 0
    assert main(["denoise", str(raw), "--spec", "dtm:10:0.4", "--out", str(clean)]) == 0
    assert 0 < load_points(clean).n < 300


def test_cli_convergence(capsys, tmp_path):
    out = tmp_path / "c.csv"
    assert main(["convergence", "--n-list", "100,200", "--reps", "2", "--subsamples", "5",
                 "--out", str(out)]) == 0
    assert "log-log slope" in capsys.readouterr().out and out.exists()


def test_seed_env(monkeypatch, tmp_path, points_file):
    monkeypatch.setenv("MAPPERCI_SEED", "9")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(points_file), "--bootstrap", "3", "--subsamples", "5", "--out", str(a)]) == 0
    monkeypatch.delenv("MAPPERCI_SEED")
    assert main(["run", str(points_file), "--bootstrap", "3", "--subsamples", "5", "--seed", "9",
                 "--out", str(b)]) == 0
    assert (a / "params.txt").read_bytes() == (b / "params.txt").read_bytes()
    monkeypatch.setenv("MAPPERCI_SEED", "nope")
    assert main(["tune", str(points_file)]) == 2


def test_exit_codes(tmp_path, points_file):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert main(["tune", str(bad)]) == 2
    assert main(["tune", str(tmp_path / "missing.csv")]) == 2
    assert main(["tune", str(points_file), "--gain", "0.7"]) == 2
    assert main(["tune", str(points_file), "--filter", "bogus"]) == 2
    flat = tmp_path / "flat.csv"
    flat.write_text("1,1\n1,1\n1,1\n")
    assert main(["tune", str(flat), "--filter", "pca:1"]) == 3
    tiny = tmp_path / "tiny.csv"
    tiny.write_text("0\n1\n3\n")
    assert main(["denoise", str(tiny), "--spec", "dtm:1:0.0", "--out", str(tmp_path / "x.csv")]) == 3
    assert main(["run", str(points_file), "--confidence-method", "known", "--out", str(tmp_path / "k")]) == 2


def test_internal_error_code(monkeypatch, points_file):
    import mapperci.cli as cli

    def boom(*a, **k):
        from mapperci.errors import InternalError
        raise InternalError("broken invariant")

    monkeypatch.setattr(cli, "compute_mapper", boom)
    assert main(["tune", str(points_file), "--subsamples", "5"]) == 4
