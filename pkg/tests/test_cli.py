import csv
import json

import pytest

from tangency_lab.cli import main
from tangency_lab.curves import CurveFamily
from tangency_lab.exact_geom import Point, Q


def read(path):
    return json.loads(path.read_text())


def test_gen_incidences_raw_and_sheared(tmp_path, capsys):
    assert main(["gen-incidences", "--k", "2", "--raw", "--out", str(tmp_path / "raw.json")]) == 0
    assert "16 incidences" in capsys.readouterr().out
    raw = read(tmp_path / "raw.json")
    assert len(raw["points"]) == 16 and len(raw["lines"]) == 8
    assert main(["gen-incidences", "--k", "1", "--shear-m", "3", "--out", str(tmp_path / "s.json")]) == 0
    assert read(tmp_path / "s.json")["lines"] == [{"slope": "1/4", "intercept": "3/4"}]


def test_too_small_shear_is_a_usage_failure(tmp_path, capsys):
    assert main(["gen-incidences", "--k", "2", "--shear-m", "1", "--out", str(tmp_path / "x.json")]) == 2
    assert "shear" in capsys.readouterr().err.lower()


def test_pipeline_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["pipeline", "--k", "2", "--out", str(out)]) == 0
    assert "16 certified tangencies" in capsys.readouterr().out
    for name in ("point_line_system.json", "curve_family.json", "tangency_report.json", "figure.svg"):
        assert (out / name).exists()
    assert read(out / "tangency_report.json")["total_tangencies"] == 16


def test_pipeline_rejects_bad_k(tmp_path, capsys):
    assert main(["pipeline", "--k", "0", "--out", str(tmp_path)]) == 2
    assert "k must be at least 1" in capsys.readouterr().err


def test_step_by_step_commands_agree(tmp_path, capsys):
    s, f, r = tmp_path / "s.json", tmp_path / "f.json", tmp_path / "r.json"
    assert main(["gen-incidences", "--k", "2", "--out", str(s)]) == 0
    assert main(["synth-curves", "--in", str(s), "--grounded", "--out", str(f)]) == 0
    capsys.readouterr()
    assert main(["count-tangencies", "--in", str(f), "--out", str(r)]) == 0
    assert capsys.readouterr().out.strip() == "16"
    assert main(["verify", "--in", str(f)]) == 0
    assert main(["claim-p2", "--in", str(f)]) == 0
    assert read(r)["total_tangencies"] == 16


def test_verify_fails_on_broken_family(tmp_path, capsys):
    path = tmp_path / "f.json"
    main(["pipeline", "--k", "1", "--out", str(tmp_path)])
    fam = CurveFamily.from_json(read(tmp_path / "curve_family.json"))
    # declare a tangency the geometry does not have
    red = fam.reds()[0]
    red.declared_tangencies.append((99, Point(Q(0), Q(0))))
    path.write_text(json.dumps(fam.to_json()))
    capsys.readouterr()
    assert main(["verify", "--in", str(path)]) == 1
    assert "declared tangencies are not certified" in capsys.readouterr().err


def test_schema_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"curves": [], "box": []}))
    assert main(["verify", "--in", str(bad)]) == 2
    assert "curve_family.box" in capsys.readouterr().err
    bad.write_text("{not json")
    assert main(["count-tangencies", "--in", str(bad)]) == 2
    assert main(["verify", "--in", str(tmp_path / "missing.json")]) == 2


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_scaling_table_csv_and_png(tmp_path, capsys):
    out = tmp_path / "scaling.csv"
    assert main(["scaling-table", "--k-max", "3", "--out", str(out)]) == 0
    assert "slope 1.333333" in capsys.readouterr().out
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["k", "n_points", "n_lines", "n_curves", "incidences", "tangencies_certified", "ratio"]
    assert [r[0] for r in rows[1:]] == ["1", "2", "3"]
    assert rows[3][3] == str(3 * 27) and rows[3][5] == "81"
    assert out.with_suffix(".png").read_bytes()[:4] == b"\x89PNG"


def test_scaling_table_caps_k_and_validates_threads(tmp_path, monkeypatch, capsys):
    assert main(["scaling-table", "--k-max", "6", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["scaling-table", "--k-max", "2", "--out", str(tmp_path / "x.csv")]) == 2
    monkeypatch.setenv("TANGENCY_LAB_THREADS", "zero")
    assert main(["scaling-table", "--k-max", "3", "--out", str(tmp_path / "x.csv")]) == 2
    monkeypatch.setenv("TANGENCY_LAB_THREADS", "0")
    assert main(["scaling-table", "--k-max", "3", "--out", str(tmp_path / "x.csv")]) == 2


def test_scaling_table_with_worker_processes(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TANGENCY_LAB_THREADS", "2")
    out = tmp_path / "t.csv"
    assert main(["scaling-table", "--k-max", "3", "--out", str(out), "--png", str(tmp_path / "p.png")]) == 0
    assert len(out.read_text().splitlines()) == 4 and (tmp_path / "p.png").exists()


def test_emit_svg_is_deterministic(tmp_path):
    main(["pipeline", "--k", "1", "--grounded", "--out", str(tmp_path)])
    fam, rep = tmp_path / "curve_family.json", tmp_path / "tangency_report.json"
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["emit-svg", "--in", str(fam), "--report", str(rep), "--out", str(a)]) == 0
    assert main(["emit-svg", "--in", str(fam), "--report", str(rep), "--out", str(b)]) == 0
    text = a.read_text()
    assert text == b.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert text.count('class="tangency"') == 1 and text.count('class="strip"') == 2


def test_check_commands(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"n": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4]], "order": [1, 3, 2, 4]}))
    assert main(["check-p5", "--in", str(g)]) == 1
    assert json.loads(capsys.readouterr().out)["witness"] == [0, 1, 2, 3, 4]
    g.write_text(json.dumps({"n": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4]], "order": [1, 2, 3, 4]}))
    assert main(["check-p5", "--in", str(g)]) == 0
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"rows": 3, "cols": 3, "ones": [[r, c] for r in range(3) for c in range(3)]}))
    assert main(["check-positive-c6", "--in", str(m)]) == 1
    m.write_text(json.dumps({"rows": 2, "cols": 2, "ones": [[0, 0]]}))
    assert main(["check-positive-c6", "--in", str(m)]) == 0
    m.write_text(json.dumps({"rows": 2, "cols": 2, "ones": [[5, 0]]}))
    assert main(["check-positive-c6", "--in", str(m)]) == 2


def test_extremal_search_command(capsys):
    assert main(["extremal-search", "--pattern", "p5", "--n", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["max"] == 6
    assert main(["extremal-search", "--pattern", "posc6", "--n", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["max"] == 8
    assert main(["extremal-search", "--pattern", "p5", "--n", "6"]) == 2
