import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from mixpunct.cli import cmd_check_algebra, cmd_render, dumps_report, main
from mixpunct.config import ConfigError, ExperimentConfig, parse_config


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out.read_bytes()


# -- config ---------------------------------------------------------------


def test_defaults_round_trip():
    cfg = ExperimentConfig()
    again = parse_config(json.dumps(cfg.to_dict()))
    assert again == cfg


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ('{"schema_version": 1,\n "bogus": 3}', 2, "unknown key 'bogus'"),
        ('{"schema_version": 1,\n "geometry": {\n   "rows": 12,\n   "colz": 4}}', 4, "geometry.colz"),
        ('{"schema_version": 2}', 1, "schema_version"),
        ('{"schema_version": 1,\n "shots": 0}', 2, "at least 1"),
        ('{"schema_version": 1,\n "shots": "many"}', 2, "wrong type"),
        ('{"schema_version": 1,\n "fusion": {"signs": [1, 2]}}', 2, "+1 or -1"),
        ('{"schema_version": 1,\n\n "braid": {"moving": "p9"}}', 3, "unknown puncture"),
        ('{"schema_version": 1,\n "geometry": {"boundary": {"top": "bumpy"}}}', 2, "boundary types"),
        ('{"schema_version": 1,\n "seed": 1,,}', 2, ""),
    ],
)
def test_config_errors_name_the_line(text, line, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert str(err.value).startswith(f"line {line}:")
    assert fragment in str(err.value)


def test_bad_config_exits_2(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text('{"schema_version": 1, "extra": true}')
    assert main(["run-fusion", "--config", str(path)]) == 2
    assert "unknown key" in capsys.readouterr().err


# -- check-algebra ------------------------------------------------------------


def test_check_algebra_passes_and_reports_matrices(tmp_path):
    code, data = run(["check-algebra"], tmp_path)
    report = json.loads(data)
    assert code == 0 and report["passed"]
    assert report["schema_version"] == 1
    toric = [c for c in report["checks"] if c["name"].startswith("toric R")]
    assert len(toric) == 5 and all(c["ok"] for c in toric)
    b = report["matrices"]["B"]
    assert b[0][0] == pytest.approx([0.0, 0.0], abs=1e-12)
    assert b[0][1] == pytest.approx([2**-0.5, -(2**-0.5)], abs=1e-14)


def test_tampered_f_fails():
    report, code = cmd_check_algebra(tamper=True)
    assert code != 0 and not report["passed"]
    assert any(c["name"] == "F unitary" and not c["ok"] for c in report["checks"])


def test_console_script_exit_code():
    proc = subprocess.run([sys.executable, "-m", "mixpunct", "check-algebra", "--tamper"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["tampered"] is True


# -- run-fusion / run-braid -------------------------------------------------


def test_run_fusion_small(tmp_path):
    code, data = run(["run-fusion", "--shots", "400", "--seed", "5"], tmp_path)
    report = json.loads(data)
    assert code == 0
    assert len(report["shots"]) == 400
    assert all(a == b for a, b in report["shots"])
    f = report["frequencies"]
    assert f["1,1"]["count"] + f["psi,psi"]["count"] == 400
    assert f["1,1"]["stderr"] > 0


def test_single_shot_determinism(tmp_path):
    _, a = run(["run-fusion", "--shots", "1", "--seed", "42"], tmp_path, "a.json")
    _, b = run(["run-fusion", "--shots", "1", "--seed", "42"], tmp_path, "b.json")
    assert a == b


def test_run_braid_verdicts(tmp_path):
    code, data = run(["run-braid"], tmp_path)
    report = json.loads(data)
    assert code == 0 and report["simulated"]
    main_runs = [r for r in report["runs"] if r["run"] == "main"]
    assert {(r["initial_label"], r["final_label"]) for r in main_runs} == {("++", "--"), ("--", "++")}
    controls = [r for r in report["runs"] if r["run"] == "control"]
    assert all(r["initial_label"] == r["final_label"] for r in controls)
    assert any(c["name"].startswith("double braid") and c["ok"] for c in report["checks"])


def test_run_braid_clearance_reported_before_simulation(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schema_version": 1, "geometry": {"rows": 8, "cols": 8},
                               "quartet": {"anchors": {"p1": [2, 2], "p2": [5, 2], "p3": [2, 5], "p4": [5, 5]}}}))
    code, data = run(["run-braid", "--config", str(cfg)], tmp_path)
    report = json.loads(data)
    assert code == 2
    assert report["simulated"] is False
    assert "clearance" in report["checks"][0]["name"]


def test_report_floats_are_stable():
    report = {"x": 0.1 + 0.2, "z": complex(1, -0.0), "neg0": -0.0}
    text = dumps_report(report)
    assert '"x": 0.3' in text
    assert '"neg0": 0.0' in text
    assert text == dumps_report(json.loads(text))


# -- render -------------------------------------------------------------------


def test_render_snapshots_ascii():
    cfg = ExperimentConfig()
    empty = cmd_render(cfg, "empty")
    assert not any(ch in empty.split("legend")[0] for ch in "1234zo")
    fresh = cmd_render(cfg, "fresh")
    body = fresh.split("legend")[0]
    assert all(str(i) in body for i in range(1, 5))
    assert body.count("z") == 8  # two Z-measured edges per 1x1 mixed puncture
    post = cmd_render(cfg, "post-braid")
    assert "after braiding p1 around p3" in post
    grid = post.splitlines()[1:-1]  # drop title and legend
    assert sum(line.count("o") for line in grid) == 16  # 8 X-loop edges around each of p1, p3
    assert cmd_render(cfg, "post-braid") == post


def test_render_svg_is_self_contained(tmp_path):
    out = tmp_path / "d.svg"
    assert main(["render", "--snapshot", "prepared", "--format", "svg", "--out", str(out)]) == 0
    text = out.read_text()
    root = ET.fromstring(text)
    assert root.tag.endswith("svg")
    assert "href" not in text and "<image" not in text
    assert "#d62728" in text and "#1f77b4" in text  # red e-strings, blue m-strings
    assert 'stroke-dasharray="6,4"' in text  # smooth boundary segments are dashed
    again = tmp_path / "e.svg"
    main(["render", "--snapshot", "prepared", "--format", "svg", "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_unknown_snapshot():
    with pytest.raises(ValueError):
        cmd_render(ExperimentConfig(), "nonexistent")
