"""Command-line frontend: exit codes, output formats, config echo."""

import json

import pytest

from levydens import modelio
from levydens.cli import run
from levydens.levy_core import builtin_model


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_psi_csv_output(capsys):
    code, out, err = _run(capsys, "psi", "--model", "builtin:gaussian",
                          "--xi", "0:2:0.5")
    assert code == 0
    lines = out.strip().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert any("subcommand = psi" in ln for ln in header)
    assert any("digest" in ln for ln in header)
    rows = [ln for ln in lines if not ln.startswith("#")]
    assert rows[0] == "xi,re_psi,im_psi"
    last = rows[-1].split(",")
    assert float(last[0]) == 2.0
    assert float(last[1]) == pytest.approx(4.0)


def test_density_hits_zero_node_exactly(capsys):
    code, out, _ = _run(capsys, "density", "--model", "builtin:gaussian",
                        "--t", "1", "--grid", "-2:2:0.5")
    assert code == 0
    rows = {ln.split(",")[0]: ln for ln in out.splitlines()
            if ln and not ln.startswith("#") and ln[0] in "-0123456789"}
    assert "0.0" in rows
    val = float(rows["0.0"].split(",")[1])
    assert val == pytest.approx(0.2820947917738781, rel=1e-9)


def test_density_json_format(capsys):
    code, out, _ = _run(capsys, "density", "--model", "builtin:gaussian",
                        "--t", "1", "--grid", "-8:8:0.1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["subcommand"] == "density"
    assert doc["mass"] == pytest.approx(1.0, abs=1e-4)


def test_refusal_exit_code_and_payload(capsys):
    code, out, _ = _run(capsys, "density", "--model", "builtin:sym_gamma",
                        "--t", "0.4", "--grid", "-2:2:0.5")
    assert code == 2
    doc = json.loads(out)
    assert "refusal" in doc


def test_error_exit_code(capsys):
    code, out, err = _run(capsys, "psi", "--model", "builtin:nope",
                          "--xi", "0:1:0.5")
    assert code == 1
    assert "error:" in err
    code2, _, err2 = _run(capsys, "density", "--model", "builtin:gaussian",
                          "--t", "1", "--grid", "backwards")
    assert code2 == 1


def test_diagnose_hw(capsys):
    code, out, _ = _run(capsys, "diagnose", "hw", "--model",
                        "builtin:sym_gamma", "--k", "4:24", "--t", "0.75")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "bounded"
    assert doc["threshold_compare"]["pass"] is True


def test_diagnose_hw_phi_needs_phi_model(capsys):
    code, _, err = _run(capsys, "diagnose", "hw-phi", "--model",
                        "builtin:gaussian", "--k", "4:10")
    assert code == 1
    assert "phi-model" in err


def test_classify(capsys):
    code, out, _ = _run(capsys, "classify", "--model", "builtin:exa4_atoms",
                        "--t-list", "1.0")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "no density (Re psi does not diverge)"


def test_nu_dist_table(capsys):
    code, out, _ = _run(capsys, "nu-dist", "--model", "builtin:gaussian",
                        "--x-max", "10", "--x-min", "0.1")
    assert code == 0
    rows = [ln for ln in out.splitlines()
            if ln and not ln.startswith("#") and ln[0].isdigit()]
    x, nu = (float(v) for v in rows[-1].split(","))
    assert nu == pytest.approx(2.0 * x ** 0.5, rel=1e-8)


def test_ratio_limit_subcommand(capsys):
    code, out, _ = _run(capsys, "ratio-limit", "--model", "builtin:cauchy",
                        "--delta", "1", "--x", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["ratios"][-1] == pytest.approx(1.0, abs=1e-5)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = _run(capsys, "psi", "--model", "builtin:gaussian",
                        "--xi", "0:1:0.5", "--output", str(target))
    assert code == 0
    assert out == ""
    assert "xi,re_psi,im_psi" in target.read_text()


def test_model_file_source(tmp_path, capsys):
    path = tmp_path / "m.json"
    modelio.save_model(builtin_model("gaussian"), path)
    code, out, _ = _run(capsys, "psi", "--model", str(path), "--xi", "0:1:1")
    assert code == 0


def test_negative_grid_bounds_parse(capsys):
    code, _, _ = _run(capsys, "density", "--model", "builtin:gaussian",
                      "--t", "1", "--grid", "-1:1:0.5")
    assert code == 0
