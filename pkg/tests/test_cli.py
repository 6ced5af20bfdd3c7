import json
import math
from pathlib import Path

import numpy as np
import pytest

from zenosim.cli import main

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"


def write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def run_config(tmp_path, **overrides) -> Path:
    keys = dict(rabi1=1.0, rabi2=1.2, alpha1=0.5, alpha2=0.5, dt=1e-3,
                t_final=5.0, stride=10, init="00")
    keys.update(overrides)
    body = "[run]\n" + "\n".join(f"{k} = {v}" for k, v in keys.items()) + "\n"
    return write(tmp_path / "run.cfg", body)


def read_csv(path: Path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    data = np.array([[float(tok) for tok in line.split(",")] for line in lines[1:]])
    return header, data


class TestSimulate:
    def test_trajectory_csv_schema(self, tmp_path):
        cfg = run_config(tmp_path)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        header, data = read_csv(out / "trajectory.csv")
        assert header == ["time", "x1", "y1", "z1", "x2", "y2", "z2",
                          "e11", "e12", "e13", "e21", "e22", "e23",
                          "e31", "e32", "e33"]
        assert data.shape[1] == 16
        assert data[0, 0] == 0.0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "simulate"
        assert manifest["outputs"] == ["trajectory.csv"]
        assert manifest["config"]["rabi1"] == 1.0

    def test_free_rotation_matches_cosine(self, tmp_path):
        cfg = run_config(tmp_path, alpha1=0.0, alpha2=0.0, dt=1e-4, t_final=6.0)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        _, data = read_csv(out / "trajectory.csv")
        np.testing.assert_allclose(data[:, 3], np.cos(1.0 * data[:, 0]), atol=1e-8)

    def test_entropy_column_opt_in(self, tmp_path):
        cfg = run_config(tmp_path, entropy="true")
        out = tmp_path / "out"
        main(["simulate", "--config", str(cfg), "--out", str(out)])
        header, data = read_csv(out / "trajectory.csv")
        assert header[-1] == "S"
        assert data.shape[1] == 17

    def test_weak_monitoring_keeps_oscillating(self, tmp_path):
        cfg = write(tmp_path / "f.cfg",
                    (CONFIG_DIR / "fig1a.cfg").read_text().replace("dt = 1e-4", "dt = 1e-3"))
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        _, data = read_csv(out / "trajectory.csv")
        z1 = data[:, 3]
        sign_changes = int(np.sum(np.abs(np.diff(np.sign(z1))) > 0))
        assert sign_changes >= 4

    def test_strong_monitoring_freezes_trailing_coordinates(self, tmp_path):
        cfg = write(tmp_path / "f.cfg",
                    (CONFIG_DIR / "fig1c.cfg").read_text().replace("dt = 1e-4", "dt = 1e-3"))
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        _, data = read_csv(out / "trajectory.csv")
        tail = data[data[:, 0] >= 25.0]
        spread = tail[:, 1:7].max(axis=0) - tail[:, 1:7].min(axis=0)
        assert np.max(spread) < 1e-3

    def test_config_error_exit_code(self, tmp_path):
        bad = write(tmp_path / "bad.cfg", "[run]\nrabi1 = 1.0\n")  # missing keys
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2
        bad2 = write(tmp_path / "bad2.cfg",
                     run_config(tmp_path).read_text().replace("init = 00", "init = 0"))
        assert main(["simulate", "--config", str(bad2), "--out", str(tmp_path / "o2")]) == 2

    def test_seventeen_significant_digits(self, tmp_path):
        cfg = run_config(tmp_path, t_final=0.01, dt=1e-3, stride=1)
        out = tmp_path / "out"
        main(["simulate", "--config", str(cfg), "--out", str(out)])
        line = (out / "trajectory.csv").read_text().splitlines()[3]
        z1_text = line.split(",")[3]
        assert float(z1_text) != 1.0  # has moved, and survives round-trip
        assert len(z1_text.replace("-", "").replace(".", "").split("e")[0]) >= 16

    def test_replay_is_bit_identical(self, tmp_path):
        cfg = run_config(tmp_path, alpha1=1.3, t_final=2.0)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg), "--out", str(out1)]) == 0
        manifest = json.loads((out1 / "manifest.json").read_text())
        replay_cfg = write(tmp_path / "replay.cfg", "[run]\n" + "\n".join(
            f"{k} = {v}" for k, v in manifest["config"].items()) + "\n")
        assert main(["simulate", "--config", str(replay_cfg), "--out", str(out2)]) == 0
        assert (out1 / "trajectory.csv").read_bytes() == (out2 / "trajectory.csv").read_bytes()


class TestEntropyCommand:
    def test_frozen_state_zero_entropy(self, tmp_path):
        cfg = run_config(tmp_path, rabi1=0.0, rabi2=0.0, alpha1=1.0, alpha2=1.0)
        out = tmp_path / "out"
        assert main(["entropy", "--config", str(cfg), "--out", str(out)]) == 0
        header, data = read_csv(out / "entropy.csv")
        assert header == ["time", "S"]
        np.testing.assert_array_equal(data[:, 1], 0.0)

    def test_summary_fields_for_plateau_run(self, tmp_path):
        cfg = write(tmp_path / "f.cfg",
                    (CONFIG_DIR / "fig3c.cfg").read_text().replace("dt = 1e-4", "dt = 1e-3"))
        out = tmp_path / "out"
        assert main(["entropy", "--config", str(cfg), "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["saturation"] == pytest.approx(0.0377, abs=2e-3)
        assert summary["period_min_to_min"] is None
        assert summary["ln2"] == pytest.approx(math.log(2))

    def test_summary_period_for_intermediate_run(self, tmp_path):
        cfg = write(tmp_path / "f.cfg",
                    (CONFIG_DIR / "fig3b.cfg").read_text().replace("dt = 1e-4", "dt = 1e-3"))
        out = tmp_path / "out"
        assert main(["entropy", "--config", str(cfg), "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["period_min_to_min"] == pytest.approx(5.77, abs=0.1)
        assert summary["saturation"] is None


class TestSweepCommand:
    def test_three_value_entropy_sweep(self, tmp_path):
        body = """[sweep]
axis = alpha_both
values = 0.1, 1.5, 3.0
observables = entropy, saturation, period
[run]
rabi1 = 1.0
rabi2 = 1.0
alpha1 = 0
alpha2 = 0
dt = 1e-3
t_final = 20.0
stride = 10
init = 00
"""
        cfg = write(tmp_path / "plan.cfg", body)
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        agg = json.loads((out / "aggregate.json").read_text())
        assert len(agg) == 3
        by_value = {row["value"]: row for row in agg}
        assert by_value[3.0]["saturation"] == pytest.approx(0.0377, abs=2e-3)
        assert by_value[3.0]["period_min_to_min"] is None
        assert by_value[0.1]["saturation"] is None
        for row in agg:
            assert row["status"] == "ok"
            assert (out / row["csv"]).exists()

    def test_trajectory_sweep_writes_per_value_csvs(self, tmp_path):
        body = """[sweep]
axis = alpha_both
values = 0.1 0.3 0.6
observables = trajectory
[run]
rabi1 = 1.0
rabi2 = 1.0
alpha1 = 0
alpha2 = 0
dt = 1e-3
t_final = 5.0
stride = 10
init = 00
"""
        cfg = write(tmp_path / "plan.cfg", body)
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        names = sorted(p.name for p in out.glob("alpha_both_*.csv"))
        assert names == ["alpha_both_0p1.csv", "alpha_both_0p3.csv",
                         "alpha_both_0p6.csv"]

    def test_empty_values_exit_two(self, tmp_path):
        body = "[sweep]\naxis = alpha_both\nvalues =\n[run]\nrabi1 = 1\nrabi2 = 1\nalpha1 = 0\nalpha2 = 0\nt_final = 1\n"
        cfg = write(tmp_path / "plan.cfg", body)
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


class TestTargetCommand:
    def test_single_qubit_design_report(self, tmp_path):
        cfg = write(tmp_path / "t.cfg",
                    "[target]\nmode = single_qubit\na = 0\nb = 0\nc = 1\nd = 0\nlambda = 3\n")
        out = tmp_path / "out"
        assert main(["target", "--config", str(cfg), "--out", str(out)]) == 0
        report = json.loads((out / "design.json").read_text())
        assert report["feasible"] is True
        points = [fp["bloch"] for fp in report["fixed_points"]]
        target = (0.0, -1 / 3, math.sqrt(8) / 3)
        assert any(np.allclose(p, target, atol=1e-9) for p in points)
        assert all(fp["residual"] < 1e-12 for fp in report["fixed_points"])

    def test_degenerate_design_exit_four(self, tmp_path):
        cfg = write(tmp_path / "t.cfg",
                    "[target]\nmode = single_qubit\na = 1\nb = 0\nc = 1\nd = 0\nlambda = 2\n")
        out = tmp_path / "out"
        assert main(["target", "--config", str(cfg), "--out", str(out)]) == 4
        report = json.loads((out / "design.json").read_text())
        assert report["error"]["type"] == "DegenerateInteraction"

    def test_infeasible_ratio_exit_four(self, tmp_path):
        cfg = write(tmp_path / "t.cfg",
                    "[target]\nmode = single_qubit\na = 0\nb = 0\nc = 1\nd = 0\nlambda = 0.5\n")
        assert main(["target", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 4

    def test_two_qubit_report(self, tmp_path):
        cfg = write(tmp_path / "t.cfg", "[target]\nmode = two_qubit\nalpha = 1.0\n")
        out = tmp_path / "out"
        assert main(["target", "--config", str(cfg), "--out", str(out)]) == 0
        report = json.loads((out / "design.json").read_text())
        st = report["stationarity"]
        assert st["00"]["stationary"] and st["11"]["stationary"]
        assert st["00"]["residual"] < 1e-12
        assert not st["01"]["stationary"]
        assert st["01"]["residual"] > 0.1
        h = np.array(report["interaction_hamiltonian"])
        assert h.shape == (8, 8)
        np.testing.assert_allclose(h, h.T, atol=1e-14)


class TestVerifyCommand:
    def test_clean_dynamics_pass(self, tmp_path):
        cfg = write(tmp_path / "v.cfg", """[verify]
dts = 1e-3, 5e-4
tolerance = 5e-3
[run]
rabi1 = 1.0
rabi2 = 1.2
alpha1 = 0.5
alpha2 = 0.5
t_final = 4.0
init = 00
""")
        out = tmp_path / "out"
        assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
        report = json.loads((out / "verify.json").read_text())
        assert report["passed"] is True
        devs = [row["max_deviation"] for row in report["rows"]]
        assert devs[0] <= 5e-3 and devs[1] <= devs[0] / 2

    def test_no_measurement_both_paths_agree_tightly(self, tmp_path):
        cfg = write(tmp_path / "v.cfg", """[verify]
dts = 1e-3
tolerance = 1e-8
[run]
rabi1 = 1.0
rabi2 = 1.2
alpha1 = 0.0
alpha2 = 0.0
t_final = 4.0
init = 00
""")
        assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0

    def test_corrupted_rhs_exit_five(self, tmp_path):
        cfg = write(tmp_path / "v.cfg", """[verify]
dts = 1e-3, 5e-4
tolerance = 5e-3
rhs_offset = 0.05
[run]
rabi1 = 1.0
rabi2 = 1.2
alpha1 = 0.5
alpha2 = 0.5
t_final = 4.0
init = 00
""")
        out = tmp_path / "out"
        assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 5
        report = json.loads((out / "verify.json").read_text())
        assert report["passed"] is False and report["failures"]


class TestShippedConfigs:
    def test_all_figure_configs_present_and_parse(self):
        from zenosim.config import build_run_config, read_flat_config
        names = [f"fig1{p}" for p in "abcd"] + [f"fig2{p}" for p in "abc"] \
            + [f"fig3{p}" for p in "abc"]
        for name in names:
            path = CONFIG_DIR / f"{name}.cfg"
            assert path.exists(), name
            cfg, stride, _ = build_run_config(read_flat_config(path))
            assert stride >= 1 and cfg.t_final > 0

    def test_fig_configs_match_quoted_parameters(self):
        from zenosim.config import build_run_config, read_flat_config
        cfg, _, _ = build_run_config(read_flat_config(CONFIG_DIR / "fig1a.cfg"))
        assert (2 * cfg.omega1, 2 * cfg.omega2) == (1.0, 1.2)
        assert cfg.alpha1 == cfg.alpha2 == 0.5
        cfg3, _, entropy = build_run_config(read_flat_config(CONFIG_DIR / "fig3c.cfg"))
        assert entropy and cfg3.alpha1 == 3.0
