"""End-to-end command-line tests through the installed module entry point."""

import shlex
import subprocess
import sys

import pytest


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "ncbroadcast", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )


class TestSolve:
    def test_prints_origin_value(self, tmp_path):
        proc = run_cli(["solve", "--file-size", "1", "--window", "1", "--p", "0.5"], tmp_path)
        assert proc.returncode == 0
        assert "V(0,0) = 2.666667" in proc.stdout

    def test_table_has_closed_form_edge_row(self, tmp_path):
        proc = run_cli(
            ["solve", "--file-size", "12", "--window", "4", "--p", "0.5", "--out", "t.csv"],
            tmp_path,
        )
        assert proc.returncode == 0
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == "x0,x1,value,action"
        assert "10,12,4.0,0" in lines
        assert (tmp_path / "t.csv.manifest").exists()

    def test_divisibility_error_exits_2(self, tmp_path):
        proc = run_cli(["solve", "--file-size", "10", "--window", "3", "--p", "0.5"], tmp_path)
        assert proc.returncode == 2
        assert "multiple" in proc.stderr


class TestCheckLr:
    def test_grid_passes(self, tmp_path):
        proc = run_cli(
            ["check-lr", "--file-sizes", "8,12", "--windows", "2,4", "--ps", "0.1,0.9",
             "--out", "report.csv"],
            tmp_path,
        )
        assert proc.returncode == 0
        assert proc.stdout.count("PASS") == 8
        header = (tmp_path / "report.csv").read_text().splitlines()[0]
        assert header == "F,K,p,check,examined,violations,worst_margin,status"

    def test_invalid_cell_reported_not_fatal(self, tmp_path):
        proc = run_cli(
            ["check-lr", "--file-sizes", "8", "--windows", "3,4", "--ps", "0.5"], tmp_path
        )
        assert proc.returncode == 0
        assert "invalid" in proc.stdout
        assert "F=8 K=4 p=0.5: PASS" in proc.stdout


class TestOracle:
    def test_small_instance(self, tmp_path):
        proc = run_cli(["oracle", "--file-size", "4", "--window", "2", "--p", "0.5"], tmp_path)
        assert proc.returncode == 0
        assert "256 policies; LR optimal" in proc.stdout

    def test_tiny_instance(self, tmp_path):
        proc = run_cli(["oracle", "--file-size", "2", "--window", "1", "--p", "0.5"], tmp_path)
        assert proc.returncode == 0
        assert "4 policies; LR optimal" in proc.stdout

    def test_capacity_refusal(self, tmp_path):
        proc = run_cli(["oracle", "--file-size", "100", "--window", "2", "--p", "0.5"], tmp_path)
        assert proc.returncode == 2
        assert "decision states" in proc.stderr and "cap" in proc.stderr


class TestSimulate:
    def test_stats_row_and_manifest_replay(self, tmp_path):
        args = [
            "simulate", "--policy", "lr", "--receivers", "2", "--file-size", "12",
            "--window", "4", "--p", "0.5", "--trials", "300", "--seed", "42",
            "--out", "stats.csv",
        ]
        proc = run_cli(args, tmp_path)
        assert proc.returncode == 0
        first = (tmp_path / "stats.csv").read_bytes()
        lines = first.decode().splitlines()
        assert lines[0] == "policy,N,F,K,p,n_trials,mean_slots,stddev,ci95_half_width"
        assert lines[1].startswith("lr,2,12,4,0.5,300,")

        manifest = dict(
            line.split("=", 1) for line in (tmp_path / "stats.csv.manifest").read_text().splitlines()
        )
        assert manifest["command"] == "simulate"
        replay = run_cli(shlex.split(manifest["argv"]), tmp_path)
        assert replay.returncode == 0
        assert (tmp_path / "stats.csv").read_bytes() == first

    def test_codec_mode_runs(self, tmp_path):
        proc = run_cli(
            ["simulate", "--policy", "rs", "--receivers", "2", "--file-size", "8",
             "--window", "4", "--p", "0.7", "--trials", "40", "--seed", "1",
             "--mode", "codec", "--packet-len", "8"],
            tmp_path,
        )
        assert proc.returncode == 0
        assert "mean=" in proc.stdout


class TestSweep:
    def test_whole_file_window_rows_agree_across_policies(self, tmp_path):
        proc = run_cli(
            ["sweep", "--policies", "lr,rrnc,rs", "--receivers", "3", "--file-size", "6",
             "--windows", "2,6", "--p", "0.6", "--trials", "80", "--seed", "9",
             "--out", "sweep.csv"],
            tmp_path,
        )
        assert proc.returncode == 0
        rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
        assert len(rows) == 6
        whole_file = {row.split(",", 1)[0]: row.split(",", 6)[6] for row in rows if ",6,0.6," in row}
        assert whole_file["lr"] == whole_file["rrnc"] == whole_file["rs"]

    def test_bad_window_skipped_per_row(self, tmp_path):
        proc = run_cli(
            ["sweep", "--policies", "lr", "--receivers", "2", "--file-size", "6",
             "--windows", "2,4,6", "--p", "0.6", "--trials", "40", "--seed", "2",
             "--out", "s.csv"],
            tmp_path,
        )
        assert proc.returncode == 0
        assert "skipping window 4" in proc.stderr
        rows = (tmp_path / "s.csv").read_text().splitlines()[1:]
        assert [row.split(",")[3] for row in rows] == ["2", "6"]

    def test_unknown_policy_is_usage_error(self, tmp_path):
        proc = run_cli(
            ["sweep", "--policies", "lru", "--file-size", "6", "--windows", "2", "--p", "0.5"],
            tmp_path,
        )
        assert proc.returncode == 2


class TestCodecValidate:
    def test_report_lines(self, tmp_path):
        proc = run_cli(
            ["codec-validate", "--window", "4", "--packet-len", "8", "--batches", "200",
             "--seed", "1"],
            tmp_path,
        )
        assert proc.returncode == 0
        assert "round-trip success: 100.0000%" in proc.stdout
        assert "mean extra packets" in proc.stdout

    def test_zero_batches(self, tmp_path):
        proc = run_cli(["codec-validate", "--batches", "0"], tmp_path)
        assert proc.returncode == 0
        assert "nothing to validate" in proc.stdout


def test_version_flag(tmp_path):
    proc = run_cli(["--version"], tmp_path)
    assert proc.returncode == 0
    assert "ncbroadcast" in proc.stdout


def test_missing_subcommand_is_usage_error(tmp_path):
    proc = run_cli([], tmp_path)
    assert proc.returncode == 2
