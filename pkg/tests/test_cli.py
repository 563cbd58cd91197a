import csv
import io

import pytest

from coolbound.cli import main
from coolbound.config import parse_config
from coolbound.errors import ConfigError
from coolbound.protocols import Protocol


def _run(tmp_path, capsys, text, command, *extra):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    code = main([command, "--config", str(path), *extra])
    out, err = capsys.readouterr()
    return code, out, err


QUBIT = """\
# qubit target, qubit machine
target_spectrum = 0, 1
machine_spectrum = 0, 2
beta_R = 1.0
beta_H = inf-temp
"""


def test_parse_config_keys_and_comments():
    cfg = parse_config(QUBIT + "protocol = optimal  # trailing\n")
    assert cfg.target_spectrum == (0.0, 1.0)
    assert cfg.beta_h == 0.0 and cfg.protocol is Protocol.OPTIMAL
    assert cfg.line_of("beta_r") == 4


@pytest.mark.parametrize("text,line", [
    ("beta_r = 1\nbogus = 2\n", 2),
    ("beta_r = 1\nbeta_R = 2\n", 2),
    ("\n\nbeta_r = -1\n", 3),
    ("target_spectrum\n", 1),
    ("protocol = fastest\n", 1),
    ("beta_r =\n", 1),
])
def test_parse_config_errors_name_line(text, line):
    with pytest.raises(ConfigError, match=f"^line {line}: "):
        parse_config(text)


def test_bound_command(tmp_path, capsys):
    code, out, _ = _run(tmp_path, capsys, QUBIT, "bound")
    rows = dict(csv.reader(io.StringIO(out)))
    assert code == 0
    assert float(rows["p0_star"]) == pytest.approx(1 / (1 + 2.718281828459045**-2), rel=1e-15)
    assert rows["beta_star"] == "2" and rows["beta_star_inc"] == "2"


def test_simulate_command(tmp_path, capsys):
    code, out, _ = _run(tmp_path, capsys,
                        "target_spectrum = 0 0.5 1\nmachine_spectrum = 0 1 2\nbeta_r = 1\n",
                        "simulate")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[-1]["row_type"] == "summary" and rows[-1]["converged"] == "true"
    assert all(r["bound_ok"] == "true" for r in rows)
    assert int(rows[-1]["cycle"]) == len(rows) - 1


def test_simulate_output_is_deterministic(tmp_path, capsys):
    text = QUBIT + "protocol = three-qubit-incoherent\n"
    a = _run(tmp_path, capsys, text, "simulate")[1]
    b = _run(tmp_path, capsys, text, "simulate")[1]
    assert a == b and "\r" not in a


def test_simulate_writes_file(tmp_path, capsys):
    out_file = tmp_path / "out.csv"
    code, out, _ = _run(tmp_path, capsys, QUBIT, "simulate", "--out", str(out_file))
    assert code == 0 and out == "" and out_file.read_text().startswith("row_type,cycle")


def test_simulate_wrong_initial_length(tmp_path, capsys):
    code, _, err = _run(tmp_path, capsys, QUBIT + "initial = 0.5 0.3 0.2\n", "simulate")
    assert code == 2 and "line 6" in err


def test_unphysical_hot_bath_is_usage_error(tmp_path, capsys):
    text = "target_spectrum = 0 1\nmachine_spectrum = 0 3\nbeta_r = 0.1\nbeta_h = 5\n"
    code, _, err = _run(tmp_path, capsys, text, "bound")
    assert code == 2 and "line 4" in err


def test_rate_command(tmp_path, capsys):
    code, out, _ = _run(tmp_path, capsys, "beta_r = 1\ne_max = 1\nn_max = 3\n", "rate")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["n"] for r in rows] == ["1", "2", "3"]
    assert float(rows[0]["N_n"]) == pytest.approx(1.0, rel=1e-15)


def test_oracle_command(tmp_path, capsys):
    code, out, _ = _run(tmp_path, capsys, "trials = 20\nseed = 5\n", "oracle")
    assert code == 0 and out.startswith("PASS seed=5 trials=20")


def test_oracle_budget_error_names_line(tmp_path, capsys):
    code, _, err = _run(tmp_path, capsys, "trials = 5\nmax_target_dim = 99\n", "oracle")
    assert code == 2 and "line 2" in err


def test_missing_config_file(tmp_path, capsys):
    assert main(["bound", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_sweep_command(tmp_path, capsys):
    text = QUBIT.replace("beta_H = inf-temp\n", "") + "sweep_key = beta_r\nsweep_values = 0.5 1 2\n"
    outdir = tmp_path / "sweep"
    code, out, _ = _run(tmp_path, capsys, text, "sweep", "--out", str(outdir))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert sorted(p.name for p in outdir.iterdir()) == ["run_000.csv", "run_001.csv", "run_002.csv"]


def test_sweep_bad_value_names_line(tmp_path, capsys):
    text = QUBIT + "sweep_key = beta_r\nsweep_values = 1 -2\n"
    code, _, err = _run(tmp_path, capsys, text, "sweep", "--out", str(tmp_path / "o"))
    assert code == 2 and "line 7" in err
