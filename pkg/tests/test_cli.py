import json
import math

import pytest

from bpint.cli import ConfigError, GridSpec, SweepConfig, main, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check(capsys):
    code, out, _ = run(capsys, "check", "--alpha", "2", "--nu", "0,0,0,0,0", "--c", "1,1,1,1,5")
    assert code == 0 and "predicted_zero: true" in out
    code, out, _ = run(capsys, "check", "--alpha", "1", "--nu", "0,0", "--c", "1,2")
    assert code == 0 and "CNC: none" in out


def test_check_length_mismatch(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "--alpha", "2", "--nu", "0", "--c", "1,1,1"])
    assert exc.value.code == 2


def test_check_tied_maximum(capsys):
    code, _, err = run(capsys, "check", "--alpha", "2", "--nu", "0,0,0", "--c", "1,1,1")
    assert code == 3 and err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "2", "--nu", "0,0,0,0,0", "--c", "1,1,1,1,5", "--method", "auto")
    value, err, method = [s.strip() for s in out.split(",")]
    assert code == 0 and float(value) == 0.0 and float(err) <= 1e-9 and method.startswith("exton")
    code, out, _ = run(capsys, "eval", "--alpha", "1", "--nu", "0,1", "--c", "1,2", "--method", "quad", "--tol", "1e-8")
    assert code == 0 and abs(float(out.split(",")[0]) - 0.5) <= 1e-8


def test_eval_exton_out_of_domain(capsys):
    code, _, err = run(capsys, "eval", "--alpha", "2", "--nu", "0,0,0,0,0", "--c", "1,1,1,1,3", "--method", "exton")
    assert code == 3 and err


def test_eval_oracle(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "2", "--nu", "0,0,0,0,0", "--c", "1,1,1,1,3", "--method", "oracle")
    assert code == 0 and out.strip().endswith("angular-grid")


def test_dos_and_conductivity(capsys):
    code, out, _ = run(capsys, "dos", "--t", "1,1", "--E", "3")
    assert code == 0 and float(out.split(",")[0]) == 0.0
    code, out, _ = run(capsys, "dos", "--t", "1,1", "--E", "0")
    assert code == 0 and "divergent" in out
    code, out, _ = run(capsys, "conductivity", "--t", "1", "--E-F", "0")
    assert code == 0 and float(out.split(",")[0]) == pytest.approx(2 / math.pi, rel=1e-9)


def test_scatter(capsys):
    code, out, _ = run(capsys, "scatter", "--radii", "1,1", "--g", "1")
    assert code == 0 and float(out.split(",")[0]) == pytest.approx(2 / (math.pi * math.sqrt(3)))
    code, out, _ = run(capsys, "scatter", "--dim", "3", "--radii", "1,1", "--g", "1")
    assert code == 0 and "monte-carlo check" in out


def write_config(tmp_path, **over):
    cfg = {
        "schema": 1,
        "subject": "integral",
        "grid": {"param": "c", "start": 1.0, "stop": 7.0, "step": 0.5},
        "parameters": {"alpha": 4, "nu": [0] * 7, "c": [1] * 7},
        "tol": 1e-8,
        "seed": 7,
    }
    cfg.update(over)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def test_sweep_deterministic(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "-o", str(out1)]) == 0
    assert main(["sweep", "--config", str(cfg), "-o", str(out2)]) == 0
    a, b = out1.read_bytes(), out2.read_bytes()
    assert a == b
    lines = a.decode().splitlines()
    assert lines[0].startswith("# bpint-version=") and "seed=7" in lines[0]
    assert lines[1] == "param,value,error_bound,method,seed"
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 13
    by_c = {float(r[0]): float(r[1]) for r in rows}
    assert math.isinf(by_c[2.0]) and math.isinf(by_c[6.0])
    assert by_c[6.5] == 0.0 and by_c[7.0] == 0.0
    assert abs(by_c[1.0]) > 1e-3


def test_sweep_threads_identical(tmp_path, monkeypatch):
    cfg = SweepConfig.from_dict(json.loads(write_config(tmp_path).read_text()))
    monkeypatch.setenv("BPINT_THREADS", "1")
    serial = run_sweep(cfg)
    monkeypatch.setenv("BPINT_THREADS", "2")
    assert run_sweep(cfg) == serial


def test_sweep_flags_without_config(capsys):
    code, out, _ = run(capsys, "sweep", "--subject", "dos", "--param", "E", "--start", "2.5", "--stop", "3",
                       "--step", "0.25", "--set", "t=[1,1]")
    assert code == 0
    assert [line.split(",")[1] for line in out.splitlines()[2:]] == ["0", "0", "0"]


def test_sweep_threshold_footer(tmp_path, capsys):
    cfg = write_config(
        tmp_path, subject="threshold",
        grid={"param": "epsilon", "start": -3, "stop": -1, "step": 0.25, "scale": "log10"},
        parameters={"N": 2, "radii": [1, 1, 1, 1]},
    )
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    footer = out.splitlines()[-1]
    assert footer.startswith("exponent,")
    assert float(footer.split(",")[1].split("±")[0]) == pytest.approx(0.5, abs=0.05)


def test_sweep_config_errors(tmp_path, capsys):
    assert main(["sweep", "--config", str(write_config(tmp_path, bogus=1))]) == 2
    assert main(["sweep", "--config", str(write_config(tmp_path, schema=2))]) == 2
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 4
    bad_out = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["sweep", "--config", str(write_config(tmp_path)), "-o", str(bad_out)]) == 4


def test_kinks_command(tmp_path, capsys):
    cfg = write_config(
        tmp_path, subject="umklapp_f",
        grid={"param": "c", "start": 3.5, "stop": 4.5, "step": 0.01}, parameters={},
    )
    out = tmp_path / "f.csv"
    assert main(["sweep", "--config", str(cfg), "-o", str(out)]) == 0
    code, text, _ = run(capsys, "kinks", "--input", str(out))
    assert code == 0
    assert "kink at 4" in text


def test_grid_and_config_validation():
    assert GridSpec("c", 0.0, 0.3, 0.1).points() == [0.0, 0.1, 0.2, 0.3]
    with pytest.raises(ConfigError):
        GridSpec("c", 1.0, 0.0, 0.1)
    with pytest.raises(ConfigError):
        SweepConfig("nope", GridSpec("c", 0, 1, 0.5))
    with pytest.raises(ConfigError):
        SweepConfig("dos", GridSpec("c", 0, 1, 0.5))
    a = SweepConfig("dos", GridSpec("E", 0, 1, 0.5), {"t": [1, 1]}, seed=1)
    b = SweepConfig("dos", GridSpec("E", 0, 1, 0.5), {"t": [1, 1]}, seed=2)
    assert a.digest() != b.digest()
