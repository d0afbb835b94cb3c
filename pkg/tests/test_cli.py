import csv
import math
import subprocess
import sys

import numpy as np
import pytest

from lambdatunnel import cli, config


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def summary(text):
    out = {}
    for line in text.splitlines():
        key, _, value = line.partition(": ")
        out[key] = value
    return out


def test_scenarios_listed(capsys):
    assert cli.main(["scenarios"]) == 0
    listed = capsys.readouterr().out
    for name in ("kilin-suppression", "free-tunneling", "ratio-sweep", "wells-biased"):
        assert name in listed


@pytest.mark.parametrize("name", config.scenario_names())
def test_every_scenario_runs(name, tmp_path):
    command = config.command_of(config.load_parser(scenario=name))
    assert cli.main([command, "--scenario", name, "--out", str(tmp_path / "o.csv"), "--quiet"]) == 0


def test_kilin_suppression(tmp_path, capsys):
    out = tmp_path / "kilin.csv"
    assert cli.main(["simulate", "--scenario", "kilin-suppression", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == cli.TRAJECTORY_HEADER
    assert data[-1, header.index("p_right")] == pytest.approx(1.0, abs=1e-8)
    assert data[-1, header.index("t")] == pytest.approx(20 * math.pi, abs=1e-12)
    info = summary(capsys.readouterr().out)
    assert float(info["p_right_analytic"]) == pytest.approx(1.0, abs=1e-15)
    assert float(info["p_right_deviation"]) <= 1e-8


def test_free_tunneling_column(tmp_path):
    out = tmp_path / "free.csv"
    assert cli.main(["simulate", "--scenario", "free-tunneling", "--out", str(out), "--quiet"]) == 0
    header, data = read_csv(out)
    t = data[:, header.index("t")]
    assert np.max(np.abs(data[:, header.index("p_left")] - np.cos(t / 2) ** 2)) <= 1e-8
    assert np.all(np.isnan(data[:, header.index("p_dark")]))


def test_empty_config_names_first_field(tmp_path, capsys):
    cfg = tmp_path / "empty.ini"
    cfg.write_text("")
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2
    err = capsys.readouterr().err.strip()
    assert len(err.splitlines()) == 1
    assert "system.omega1" in err
    assert not (tmp_path / "x.csv").exists()


def test_bad_values_are_config_errors(tmp_path, capsys):
    base = ["simulate", "--scenario", "kilin-suppression", "--out", str(tmp_path / "x.csv")]
    assert cli.main(base + ["--override", "system.gamma=-1"]) == 2
    assert cli.main(base + ["--override", "integration.dt=1"]) == 2
    assert cli.main(base + ["--override", "initial.state=bare", "--override", "initial.c1=1",
                            "--override", "initial.c2=1"]) == 2
    assert cli.main(base + ["--override", "system.omega1=abc"]) == 2
    assert cli.main(base + ["--override", "nonsense"]) == 2
    err = capsys.readouterr().err
    assert "step-too-large" not in err or "config" in err


def test_numerical_failure_exit_code(tmp_path, capsys):
    code = cli.main(["simulate", "--scenario", "left-start-decay", "--out", str(tmp_path / "x.csv"),
                     "--override", "integration.t_max=1"])
    assert code == 3
    assert "not-settled" in capsys.readouterr().err


def test_override_changes_run(tmp_path, capsys):
    cli.main(["simulate", "--scenario", "dark-start", "--out", str(tmp_path / "a.csv"),
              "--override", "system.omega2=-1"])
    info = summary(capsys.readouterr().out)
    assert float(info["p_right"]) == pytest.approx(1.0, abs=1e-12)


def test_output_is_deterministic(tmp_path):
    for name in ("a", "b"):
        cli.main(["simulate", "--scenario", "left-start-decay", "--out", str(tmp_path / f"{name}.csv"),
                  "--quiet"])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_csv_is_lossless(tmp_path):
    out = tmp_path / "k.csv"
    cli.main(["simulate", "--scenario", "kilin-left", "--out", str(out), "--quiet"])
    line = out.read_text().splitlines()[5].split(",")
    for field in line:
        assert format(float(field), ".17g") == field


def test_stdout_csv(capsys):
    assert cli.main(["simulate", "--scenario", "free-tunneling", "--out", "-"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith(",".join(cli.TRAJECTORY_HEADER))
    assert "prediction: free tunneling" in captured.err


def test_sweep_ratio(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--scenario", "ratio-sweep", "--out", str(out)]) == 0
    header, data = read_csv(out)
    ratio = data[:, 0]
    assert np.array_equal(ratio, np.linspace(-1, 1, 21))
    o1 = data[:, header.index("omega1")]
    o2 = data[:, header.index("omega2")]
    expected = (o1 + o2) ** 4 / (4 * (o1 ** 2 + o2 ** 2) ** 2)
    assert np.max(np.abs(data[:, header.index("p_left_analytic")] - expected)) <= 1e-14
    dev = np.abs(data[:, header.index("p_left_numeric")] - data[:, header.index("p_left_analytic")])
    reported = float(summary(capsys.readouterr().out)["max_abs_deviation"])
    assert reported <= 1e-4
    assert np.max(dev) <= reported


def test_single_point_sweep_equals_simulate(tmp_path, capsys):
    cli.main(["simulate", "--scenario", "left-start-decay", "--out", str(tmp_path / "s.csv")])
    info = summary(capsys.readouterr().out)
    cli.main(["sweep", "--scenario", "ratio-sweep", "--out", str(tmp_path / "w.csv"), "--quiet",
              "--override", "sweep.ratio=0.5,0.5,1"])
    header, data = read_csv(tmp_path / "w.csv")
    assert data.shape[0] == 1
    assert data[0, header.index("p_left_numeric")] == float(info["p_left"])
    assert data[0, header.index("p_right_numeric")] == float(info["p_right"])


def test_two_parameter_sweep_order_and_parallelism(tmp_path, monkeypatch):
    args = ["sweep", "--scenario", "ratio-sweep", "--quiet",
            "--override", "sweep.parameters=gamma, ratio",
            "--override", "sweep.gamma=0.3, 0.9, 3", "--override", "sweep.ratio=-0.5, 0.5, 3"]
    monkeypatch.setenv(cli.WORKERS_ENV, "1")
    cli.main(args + ["--out", str(tmp_path / "serial.csv")])
    monkeypatch.setenv(cli.WORKERS_ENV, "4")
    cli.main(args + ["--out", str(tmp_path / "parallel.csv")])
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()
    header, data = read_csv(tmp_path / "serial.csv")
    assert header[:2] == ["gamma", "ratio"]
    expected = [(g, r) for g in np.linspace(0.3, 0.9, 3) for r in np.linspace(-0.5, 0.5, 3)]
    assert [tuple(r) for r in data[:, :2]] == expected


def test_sweep_validation(tmp_path, capsys):
    base = ["sweep", "--scenario", "ratio-sweep", "--out", str(tmp_path / "x.csv")]
    assert cli.main(base + ["--override", "sweep.parameters=mass"]) == 2
    assert cli.main(base + ["--override", "sweep.ratio=0,1,1001", "--override", "sweep.parameters=ratio,gamma",
                            "--override", "sweep.gamma=0.1,1,1000"]) == 2
    assert cli.main(base + ["--override", "sweep.parameters=gamma", "--override", "sweep.gamma=0,1,3"]) == 2
    assert "gamma" in capsys.readouterr().err


def test_wells_harmonic(tmp_path, capsys):
    out = tmp_path / "h.csv"
    assert cli.main(["wells", "--scenario", "wells-harmonic", "--out", str(out)]) == 0
    info = summary(capsys.readouterr().out)
    assert float(info["delta"]) == pytest.approx(1.0, abs=1e-4)
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["parity"] for r in rows] == ["S", "A", "S", "A"]


def test_wells_biased(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert cli.main(["wells", "--scenario", "wells-biased", "--out", str(out),
                     "--override", "wells.eigenfunctions=yes"]) == 0
    info = summary(capsys.readouterr().out)
    assert info["ground_parity"].split()[:2] == ["S", "A"]
    assert float(info["ratio_deviation"]) <= 0.05
    with open(tmp_path / "w_summary.csv", newline="") as fh:
        values = {r["quantity"]: float(r["value"]) for r in csv.DictReader(fh)}
    assert values["ratio"] == pytest.approx(-1, abs=0.05)
    header, data = read_csv(tmp_path / "w_eigenfunctions.csv")
    assert header[:3] == ["x", "v_ground", "psi_ground_0"]
    assert data.shape == (2000, len(header))


def test_wells_custom_table(tmp_path, capsys):
    x = np.linspace(-12, 12, 4801)
    table = tmp_path / "pot.dat"
    np.savetxt(table, np.column_stack([x, 0.5 * x ** 2]), header="x V")
    cfg = tmp_path / "w.ini"
    cfg.write_text("[ground]\nkind = custom\ntable = pot.dat\nx_min = -10\nx_max = 10\n")
    assert cli.main(["wells", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == 0
    assert float(summary(capsys.readouterr().out)["delta"]) == pytest.approx(1.0, abs=1e-3)


def test_wells_errors(tmp_path, capsys):
    assert cli.main(["wells", "--scenario", "wells-harmonic", "--out", str(tmp_path / "x.csv"),
                     "--override", "ground.x_min=-2", "--override", "ground.x_max=2"]) == 3
    assert "not-confined" in capsys.readouterr().err
    assert cli.main(["wells", "--scenario", "wells-harmonic", "--out", str(tmp_path / "x.csv"),
                     "--override", "ground.kind=triangle"]) == 2


def test_console_entry_point(tmp_path):
    out = tmp_path / "k.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "lambdatunnel.cli", "simulate", "--scenario", "kilin-suppression",
         "--out", str(out)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert "p_right: " in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "lambdatunnel.cli", "simulate"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
