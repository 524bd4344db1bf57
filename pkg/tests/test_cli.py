import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from flattwistor.cli import RunConfig, main
from flattwistor.quadric import Quadric, normal_form


def write_quadric(path, matrix):
    path.write_text(json.dumps(Quadric(np.asarray(matrix)).to_json()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quadric_check_identity(tmp_path, capsys):
    code, out, _ = run(capsys, "quadric", "check", write_quadric(tmp_path / "i.json", np.eye(3)))
    assert code == 0
    assert json.loads(out)["verdict"] == "no real points; phases all 0"


def test_quadric_check_real_points(tmp_path, capsys):
    code, out, _ = run(capsys, "quadric", "check", write_quadric(tmp_path / "r.json", np.diag([1, -1, 1])))
    assert code == 0
    assert json.loads(out)["verdict"] == "has real points"


def test_quadric_check_degenerate_and_parse(tmp_path, capsys):
    assert run(capsys, "quadric", "check", write_quadric(tmp_path / "d.json", np.diag([1, 1, 0])))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "quadric", "check", str(bad))
    assert code == 1 and "cannot read" in err
    assert run(capsys, "quadric", "check", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "flat", "verify", "--tol", "nonsense=1")[0] == 1
    assert run(capsys, "flat", "verify", "--trials", "0")[0] == 1


def test_random_file_phases_match(tmp_path, capsys):
    code, out, _ = run(capsys, "quadric", "random", "--n", "3", "--seed", "4")
    assert code == 0
    data = json.loads(out)
    (tmp_path / "q.json").write_text(out)
    code, out, _ = run(capsys, "quadric", "check", str(tmp_path / "q.json"))
    phases = json.loads(out)["normal_form"]["phases"]
    assert np.max(np.abs(np.array(phases) - data["generation"]["phases"])) < 1e-9


def test_section_sample_csv_and_svg(tmp_path, capsys):
    f = write_quadric(tmp_path / "i.json", np.eye(3))
    out_dir = tmp_path / "out"
    code, csv_text, _ = run(capsys, "section", "sample", f, "--trials", "100", "--format", "csv", "--svg",
                            "--out", str(out_dir))
    assert code == 0
    rows = [r.split(",") for r in csv_text.strip().splitlines()[1:]]
    assert len(rows) == 100
    assert max(float(r[-1]) for r in rows) < 1e-10
    assert all(float(r[-2]) > 0 for r in rows)
    root = ET.parse(out_dir / "section_tau.svg").getroot()
    assert root.tag.endswith("svg") and len(root) == 102
    assert (out_dir / "section_sample.csv").read_text() == csv_text
    again = run(capsys, "section", "sample", f, "--trials", "100", "--format", "csv")[1]
    assert again == csv_text


def test_output_dir_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FLATTWISTOR_OUT", str(tmp_path / "env"))
    f = write_quadric(tmp_path / "i.json", np.eye(3))
    assert run(capsys, "section", "sample", f, "--trials", "3")[0] == 0
    assert (tmp_path / "env" / "section_sample.json").exists()


def test_holomorphy_identity_and_perturbed(tmp_path, capsys):
    f = write_quadric(tmp_path / "i.json", np.eye(4))
    code, out, _ = run(capsys, "holomorphy", f, "--trials", "6")
    rep = json.loads(out)
    assert code == 0 and rep["agreement"]
    assert rep["max_holomorphy_residual"] < 1e-5 and rep["max_torsion_coefficient"] < 1e-5
    code, out, _ = run(capsys, "holomorphy", f, "--trials", "6", "--perturb", "1e-2")
    rep = json.loads(out)
    assert code == 0 and rep["agreement"]
    assert rep["min_holomorphy_residual"] > 1e-4 and rep["min_torsion_coefficient"] > 1e-4
    base = run(capsys, "holomorphy", f, "--trials", "6")[1]
    zero = run(capsys, "holomorphy", f, "--trials", "6", "--perturb", "0")[1]
    assert json.loads(base)["samples"] == json.loads(zero)["samples"]


def test_holomorphy_real_point_input(tmp_path, capsys):
    f = write_quadric(tmp_path / "r.json", np.diag([1, -1, 1]))
    assert run(capsys, "holomorphy", f, "--trials", "2")[0] == 2


def test_flat_verify(capsys):
    code, out, _ = run(capsys, "flat", "verify", "--trials", "20")
    rep = json.loads(out)
    assert code == 0 and rep["all_pass"] and rep["schema_version"] == 1
    assert {r["n"] for r in rep["results"]} == {1, 2, 3, 5}
    code, out, _ = run(capsys, "flat", "verify", "--trials", "5", "--break-xi")
    rep = json.loads(out)
    assert code == 4
    se = [r for r in rep["results"] if r["identity"] == "structure_equation"]
    assert min(r["max_residual"] for r in se) > 1e-2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(tolerances={"identity": -1.0})


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "flattwistor", "flat", "verify", "--n", "1", "--trials", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["all_pass"]
