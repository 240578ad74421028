import json
import re

import pytest

from stardrop.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def strip_timestamp(text: str) -> str:
    return re.sub(r'"timestamp": "[^"]*"', '"timestamp": null', text)


def test_params_reference_values(capsys):
    code, out = run_cli(capsys, "params", "--d", "3", "--t0", "0.05", "--t-top", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "1"
    assert rep["outputs"]["r"] == pytest.approx(0.2272747707857997, rel=1e-12)
    assert rep["outputs"]["x_star"] == pytest.approx(0.2261014730906884, rel=1e-12)
    assert rep["outputs"]["rho"] == pytest.approx(0.7461, abs=5e-5)
    assert rep["outputs"]["t0_crit"] == pytest.approx(1 / 9, rel=1e-12)
    assert abs(rep["diagnostics"]["r_residual"]) < 1e-14


def test_params_supercritical_exit_code(capsys):
    code, _ = run_cli(capsys, "params", "--d", "3", "--t0", "0.2", "--t-top", "2")
    assert code == 3


def test_bad_flag_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["params", "--bogus", "1"])
    assert exc.value.code == 3


def test_droplet_moments(capsys):
    code, out = run_cli(capsys, "droplet", "--d", "3", "--t0", "0.05",
                        "--t-top", "2", "--moments", "8")
    assert code == 0
    rep = json.loads(out)
    moments = rep["outputs"]["moments"]
    assert moments[0][0] == pytest.approx(0.05, rel=1e-11)
    assert moments[4][0] == pytest.approx(2.0, rel=1e-11)
    for k, (re_m, im_m) in enumerate(moments):
        if k in (0, 4):
            continue
        assert abs(complex(re_m, im_m)) < 1e-10
    assert rep["diagnostics"]["schwarz_residual_max"] < 1e-9
    assert rep["diagnostics"]["boundary_simple"] is True


def test_droplet_csv(capsys, tmp_path):
    out_file = tmp_path / "boundary.csv"
    code, _ = run_cli(capsys, "droplet", "--d", "3", "--t0", "0.05", "--t-top", "2",
                      "--format", "csv", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "theta,re,im"
    assert len(lines) == 513


def test_curve_report(capsys):
    code, out = run_cli(capsys, "curve", "--d", "3", "--t0", "0.05", "--t-top", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["outputs"]["c"][2] == pytest.approx(2.0, rel=1e-12)
    assert rep["outputs"]["beta"] == pytest.approx(rep["outputs"]["beta_closed_form"], rel=1e-10)
    assert rep["diagnostics"]["on_surface_residual_max"] < 1e-8


def test_airy_report(capsys):
    code, out = run_cli(capsys, "airy", "--d", "2", "--grid", "100")
    assert code == 0
    rep = json.loads(out)
    assert rep["diagnostics"]["ode_residual_max"] < 1e-10
    first = rep["outputs"]["values"][0]
    assert set(first) == {"x", "re", "im", "exponent", "value"}


def test_determinism_modulo_timestamp(capsys):
    _, out1 = run_cli(capsys, "curve", "--d", "3", "--t0", "0.05", "--t-top", "2",
                      "--seed", "42")
    _, out2 = run_cli(capsys, "curve", "--d", "3", "--t0", "0.05", "--t-top", "2",
                      "--seed", "42")
    assert strip_timestamp(out1) == strip_timestamp(out2)


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"d": 3, "t0": 0.05, "t_top": 2.0, "seed": 9}))
    _, out = run_cli(capsys, "params", "--config", str(cfg))
    rep = json.loads(out)
    assert rep["inputs"]["t0"] == 0.05
    assert rep["inputs"]["seed"] == 9
    # flag overrides config
    _, out2 = run_cli(capsys, "params", "--config", str(cfg), "--t0", "0.04")
    rep2 = json.loads(out2)
    assert rep2["inputs"]["t0"] == 0.04


def test_config_unknown_key_rejected(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _ = run_cli(capsys, "params", "--config", str(cfg))
    assert code == 3


def test_mop_report(capsys):
    code, out = run_cli(capsys, "mop", "--d", "3", "--t0", "0.05", "--t-top", "2",
                        "--n", "6")
    assert code == 0
    rep = json.loads(out)
    res = rep["outputs"]["results"]["6"]
    assert len(res["zeros"]) == 6
    assert res["max_star_distance"] < 1e-8
    assert 0 < res["ks_distance"] < 1
    assert res["precision_bits"] == 128 + 8 * 6


def test_mop_zeros_csv(capsys, tmp_path):
    out_file = tmp_path / "zeros.csv"
    code, _ = run_cli(capsys, "mop", "--d", "3", "--t0", "0.05", "--t-top", "2",
                      "--n", "6", "--format", "csv", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "re,im,modulus,ray_angle"
    assert len(lines) == 7


def test_verify_exit_codes(capsys, monkeypatch):
    from stardrop import cli, verify

    def fake_run_all(*a, **kw):
        return [verify.CheckResult("alpha", True, "ok", 0.0),
                verify.CheckResult("beta", True, "ok", 0.0)]

    monkeypatch.setattr(cli.verify, "run_all", fake_run_all)
    code, out = run_cli(capsys, "verify", "--d", "2", "--t0", "0.05", "--t-top", "1")
    assert code == 0
    assert out.count("[PASS]") == 2

    def fake_fail(*a, **kw):
        return [verify.CheckResult("alpha", True, "ok", 0.0),
                verify.CheckResult("beta", False, "numbers disagree", 0.0)]

    monkeypatch.setattr(cli.verify, "run_all", fake_fail)
    code, out = run_cli(capsys, "verify", "--d", "2", "--t0", "0.05", "--t-top", "1")
    assert code == 2
    assert "[FAIL] beta" in out


def test_density_csv(capsys, tmp_path):
    out_file = tmp_path / "density.csv"
    code, _ = run_cli(capsys, "density", "--d", "2", "--t0", "0.02", "--t-top", "1",
                      "--grid", "40", "--format", "csv", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "ray_coordinate,density_1,density_2"
    assert len(lines) == 41
