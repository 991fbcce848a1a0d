import subprocess
import sys

import numpy as np
import pytest

from grazeharvest.cli import main, run
from grazeharvest.config import RunConfig, parse_config
from grazeharvest.errors import ConstraintViolation, TypeMismatch, UnknownKey


def read_report(path):
    out = {}
    for line in (path / "report.txt").read_text().splitlines():
        k, _, v = line.partition(" = ")
        out[k] = v
    return out


def read_fields(path):
    return np.genfromtxt(path / "fields.csv", delimiter=",", names=True)


def test_empty_config_is_canonical():
    cfg = parse_config("")
    ref = RunConfig()
    assert (cfg.lam, cfg.K, cfg.c, cfg.q, cfg.H, cfg.B1, cfg.B2) == (500.0, 20.0, 0.5, 1.0, 0.3, 1.0, 2.0)
    assert cfg.grid.nodes == (257,) and cfg.grid.extents == ((0.0, 1.0),)
    assert cfg.mode == ref.mode


def test_overrides_and_comments():
    cfg = parse_config("c = 0.5\nK = 20  # carrying capacity\n\n# a comment\nlambda = 300\nB2_sweep = 10, 20")
    assert cfg.c == 0.5 and cfg.K == 20.0 and cfg.lam == 300.0
    assert cfg.B2_values == (10.0, 20.0)


def test_range_violation_names_key():
    with pytest.raises(ConstraintViolation) as exc:
        parse_config("H = 1.5")
    assert exc.value.key == "H"
    assert "H" in str(exc.value)


def test_unknown_key_and_type_errors():
    with pytest.raises(UnknownKey) as exc:
        parse_config("colour = blue")
    assert exc.value.key == "colour"
    with pytest.raises(TypeMismatch) as exc:
        parse_config("nodes = 257\nmax_iter = lots")
    assert exc.value.key == "max_iter"


def test_grazing_bound_only_in_wellposed_mode():
    parse_config("c = 1.5", mode="state")
    with pytest.raises(ConstraintViolation) as exc:
        parse_config("c = 1.5", mode="wellposed")
    assert exc.value.key == "c"


def test_2d_defaults():
    cfg = parse_config("dim = 2")
    assert cfg.grid.nodes == (65, 65)
    cfg = parse_config("extents = 0,1;0,2\nnodes = 9,17")
    assert cfg.dim == 2 and cfg.grid.spacing == (0.125, 0.125)


def test_eigen_mode(tmp_path):
    assert main(["eigen", "--out", str(tmp_path)]) == 0
    rep = read_report(tmp_path)
    assert float(rep["lambda1"]) == pytest.approx(1.70705, abs=1e-4)
    assert "sigma1_V1" in rep and "sigma1_V2" in rep
    assert rep["status"] == "ok"


def test_optimize_high_fixed_cost(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("B1 = 25\n")
    out = tmp_path / "out"
    assert main(["optimize", "--config", str(cfg_file), "--out", str(out)]) == 0
    data = read_fields(out)
    assert np.all(data["h"] == 0)
    assert float(read_report(out)["J"]) == 0.0
    assert (out / "trace.csv").exists()


def test_verify_mode_prints_orders(tmp_path, capsys):
    assert main(["verify", "--out", str(tmp_path)]) == 0
    printed = capsys.readouterr().out
    assert "order" in printed
    rep = read_report(tmp_path)
    for n in (65, 129, 257):
        assert float(rep[f"order[n={n}]"]) == pytest.approx(2.0, abs=0.2)


def test_wellposed_mode(tmp_path):
    assert main(["wellposed", "--out", str(tmp_path)]) == 0
    rep = read_report(tmp_path)
    assert rep["c_bound_ok"] == "True" and rep["wellposed"] == "True"


def test_config_error_exit_code(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("c = 1.5\n")
    out = tmp_path / "out"
    assert main(["wellposed", "--config", str(cfg_file), "--out", str(out)]) == 1
    rep = read_report(out)
    assert rep["status"].startswith("config_error") and rep["key"] == "c"


def test_regime_error_exit_code(tmp_path):
    cfg_file = tmp_path / "low.cfg"
    cfg_file.write_text("lambda = 0.1\n")
    out = tmp_path / "out"
    assert main(["state", "--config", str(cfg_file), "--out", str(out)]) == 3
    assert "Extinct" in read_report(out)["status"]


def test_not_converged_exit_code(tmp_path):
    cfg_file = tmp_path / "short.cfg"
    cfg_file.write_text("B2 = 50\nmax_iter = 2\n")
    out = tmp_path / "out"
    assert main(["optimize", "--config", str(cfg_file), "--out", str(out)]) == 2
    rep = read_report(out)
    assert rep["status"].startswith("not_converged")
    assert (out / "trace.csv").read_text().count("\n") == 4


def test_adjoint_and_state_fields(tmp_path):
    assert main(["adjoint", "--out", str(tmp_path)]) == 0
    data = read_fields(tmp_path)
    assert data.dtype.names == ("x", "u", "p", "h", "psi")
    assert np.all(data["u"] >= 7.0)


def test_determinism(tmp_path):
    text = "h0 = random\nnodes = 65\nB2 = 50\n"
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        assert run(parse_config(text, mode="optimize", seed=7), out) == 0
        outs.append(out)
    for name in ("fields.csv", "trace.csv", "report.txt"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_csv_round_trip(tmp_path):
    assert main(["state", "--out", str(tmp_path)]) == 0
    data = read_fields(tmp_path)
    from grazeharvest import GridSpec, ModelParams, solve_state

    u = solve_state(0.0, GridSpec.interval(257), ModelParams()).u
    np.testing.assert_array_equal(data["u"], u)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "grazeharvest", "wellposed", "--out", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
