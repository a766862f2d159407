"""Config parsing, harness behavior and CLI subcommand tests."""

import csv
import subprocess
import sys

import numpy as np
import pytest

from afpg.config import ConfigError, parse_config, serialize_config
from afpg.harness import (
    convergence_study,
    max_workers_from_env,
    run_simulation,
)
from afpg.cli import main

BASE_CFG = """
dimension=1
k=2
grid.n=24
model.name=advection
model.a=1.0
ic.name=sine
ic.mean=1.0
ic.amplitude=0.5
time.t_end=0.5
"""


class TestConfig:
    def test_defaults_and_overrides(self):
        cfg = parse_config(BASE_CFG)
        assert cfg.grid_n == 24
        assert cfg.time_scheme == "ssprk3"
        assert cfg.time_cfl == 0.2

    def test_comments_and_blanks(self):
        cfg = parse_config("# a comment\n\nk=3  # trailing\n")
        assert cfg.degree == 3

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config("bogus=1")

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            parse_config("dimension 2")

    @pytest.mark.parametrize(
        "line",
        [
            "grid.n=2",
            "k=1",
            "k=9",
            "upwind.alpha=1.5",
            "upwind.beta=0.9",
            "ic.name=step",
            "model.name=euler",
            "time.scheme=ab3",
            "time.t_end=-1",
            "model.point_update=exact",  # not burgers
            "upwind.node_alphas=1,2,3",
        ],
    )
    def test_validation_errors(self, line):
        with pytest.raises(ConfigError):
            parse_config(BASE_CFG + line)

    def test_matrix_parsing(self):
        cfg = parse_config("model.name=linear_system\nmodel.matrix=0,1;1,0")
        assert cfg.model_matrix == ((0.0, 1.0), (1.0, 0.0))
        with pytest.raises(ConfigError):
            parse_config("model.name=linear_system\nmodel.matrix=0,1,2;1,0")

    def test_roundtrip(self):
        cfg = parse_config(BASE_CFG + "upwind.node_alphas=0.1,0,0,0,0,0,0,-0.2\n")
        text = serialize_config(cfg)
        assert parse_config(text) == cfg
        # serialization is idempotent (normalized form)
        assert serialize_config(parse_config(text)) == text


class TestHarness:
    def test_constant_run_is_exact(self, tmp_path):
        cfg = parse_config("ic.name=constant\nic.value=2.0\ntime.t_end=0.25\ngrid.n=12")
        result = run_simulation(cfg)
        l1, l2, linf = result.norms
        assert linf <= 1e-13

    def test_zero_time_returns_projection(self):
        from afpg.element1d import build_element
        from afpg.grid import project_initial
        from afpg.harness import build_grid, build_ic

        cfg = parse_config(BASE_CFG + "time.t_end=0\n")
        result = run_simulation(cfg)
        assert result.steps == 0
        projected = project_initial(build_grid(cfg), build_ic(cfg), build_element(2))
        assert np.array_equal(result.state.points, projected.points)
        assert np.array_equal(result.state.moments, projected.moments)

    def test_outputs_written_and_deterministic(self, tmp_path):
        cfg = parse_config(BASE_CFG + "output.snapshot_every=10\n")
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        run_simulation(cfg, output_dir=str(d1))
        run_simulation(cfg, output_dir=str(d2))
        for name in ("final_state.csv", "conservation.csv", "summary.txt"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()
        snapshots = sorted(p.name for p in d1.glob("state_*.csv"))
        assert snapshots  # cadence produced intermediate dumps

    def test_convergence_study_orders(self):
        cfg = parse_config(BASE_CFG + "time.t_end=1.0\n")
        rows = convergence_study(cfg, [16, 32])
        assert rows[1]["eoc_l1"] == pytest.approx(3.0, abs=0.3)

    def test_convergence_needs_two_grids(self):
        cfg = parse_config(BASE_CFG)
        with pytest.raises(ConfigError):
            convergence_study(cfg, [16])

    def test_linear_system_run(self):
        cfg = parse_config(
            "model.name=linear_system\nmodel.matrix=0,1;1,0\n"
            "grid.n=16\ntime.t_end=0.25\nic.name=sine"
        )
        result = run_simulation(cfg)
        assert result.norms is not None
        assert result.norms[2] < 0.05

    def test_burgers_exact_variant_run(self):
        cfg = parse_config(
            "model.name=burgers\nmodel.point_update=exact\n"
            "grid.n=24\ntime.t_end=0.2\nic.name=sine\nic.mean=0.5\nic.amplitude=0.25"
        )
        result = run_simulation(cfg)
        assert result.norms[0] < 1e-3

    def test_threads_env(self, monkeypatch):
        monkeypatch.delenv("AFPG_THREADS", raising=False)
        assert max_workers_from_env() == 1
        monkeypatch.setenv("AFPG_THREADS", "4")
        assert max_workers_from_env() == 4
        monkeypatch.setenv("AFPG_THREADS", "zero")
        with pytest.raises(ConfigError):
            max_workers_from_env()
        monkeypatch.setenv("AFPG_THREADS", "0")
        with pytest.raises(ConfigError):
            max_workers_from_env()

    def test_parallel_study_matches_serial(self):
        cfg = parse_config(BASE_CFG)
        serial = convergence_study(cfg, [12, 24], max_workers=1)
        parallel = convergence_study(cfg, [12, 24], max_workers=2)
        assert serial == parallel


class TestCli:
    def write(self, tmp_path, text, name="run.cfg"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    def test_run_exit_zero(self, tmp_path, capsys):
        cfg = self.write(tmp_path, BASE_CFG)
        out = tmp_path / "out"
        assert main(["run", cfg, "--output-dir", str(out)]) == 0
        captured = capsys.readouterr().out
        assert "error_l1=" in captured
        assert (out / "final_state.csv").exists()

    def test_config_error_exit_two(self, tmp_path, capsys):
        cfg = self.write(tmp_path, "nonsense=1\n")
        assert main(["run", cfg]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_file_exit_two(self, capsys):
        assert main(["run", "/does/not/exist.cfg"]) == 2

    def test_blowup_exit_three(self, tmp_path, capsys):
        cfg = self.write(
            tmp_path, BASE_CFG + "time.scheme=euler\ntime.cfl=1000\ntime.t_end=20000\n"
        )
        with np.errstate(over="ignore", invalid="ignore"):
            assert main(["run", cfg, "--output-dir", str(tmp_path / "o")]) == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_converge_writes_table(self, tmp_path, capsys):
        cfg = self.write(tmp_path, BASE_CFG + "time.t_end=1.0\n")
        out = tmp_path / "conv.csv"
        assert main(["converge", cfg, "--grids", "12,24", "--output", str(out)]) == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["N", "L1", "L2", "Linf", "EOC_L1", "EOC_L2", "EOC_Linf"]
        assert len(rows) == 3
        assert float(rows[2][4]) == pytest.approx(3.0, abs=0.4)

    def test_converge_rejects_single_grid(self, tmp_path):
        cfg = self.write(tmp_path, BASE_CFG)
        assert main(["converge", cfg, "--grids", "16"]) == 2

    def test_dump_element_golden_rows(self, tmp_path):
        out = tmp_path / "el.csv"
        assert main(["dump-element", "--k", "2", "--alpha", "0", "--output", str(out)]) == 0
        with open(out) as fh:
            rows = {r[0]: r[1:] for r in csv.reader(fh)}
        assert rows["basis_moment_0"] == ["3/2", "0", "-6"]
        assert rows["test_left_cell"] == ["-3/4", "3", "15"]
        assert rows["basis_left_point"] == ["-1/4", "-1", "3"]

    def test_dump_element_rejects_bad_degree(self, tmp_path):
        assert main(["dump-element", "--k", "1"]) == 2

    def test_dump_element_2d_coefficients(self, tmp_path):
        out = tmp_path / "el2.csv"
        assert main(["dump-element-2d", "--output", str(out)]) == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        header, table = rows[0], {r[0]: r[1:] for r in rows[1:]}
        idx = header.index("xi^2*eta^2") - 1
        assert table["basis_avg"][idx] == "36"

    def test_dump_element_2d_with_tests(self, tmp_path):
        out = tmp_path / "el2t.csv"
        alphas = ",".join(["0"] * 14)
        assert main(["dump-element-2d", "--alphas", alphas, "--output", str(out)]) == 0
        with open(out) as fh:
            names = [r[0] for r in csv.reader(fh)]
        assert "edge_test_left_cell" in names
        assert "node_test_ll" in names

    def test_console_script_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "afpg.cli", "dump-element", "--k", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "basis_moment_0,3/2,0,-6" in proc.stdout
