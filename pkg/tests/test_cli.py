"""Command-line contract: CSV schema, determinism, exit codes, figure files."""
import argparse
import json
import subprocess
import sys

import numpy as np
import pytest

from qcausal import MAX_ENTROPY, MIN_ENTROPY, VON_NEUMANN, WitnessReport
from qcausal.cli import (
    CSV_COLUMNS,
    csv_text,
    main,
    parse_entropy,
    sweep_reports,
)

VERDICTS = {"BeyondFixedOrder", "ExcludesOnlyAB", "ExcludesOnlyBA", "Inconclusive"}


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    return header, rows


class TestParseEntropy:
    def test_tokens(self):
        assert parse_entropy("vn") is VON_NEUMANN
        assert parse_entropy("min") is MIN_ENTROPY
        assert parse_entropy("max") is MAX_ENTROPY
        assert parse_entropy("renyi:2").alpha == 2.0
        assert parse_entropy("renyi:inf") is MIN_ENTROPY

    @pytest.mark.parametrize("bad", ["renyi", "renyi:x", "renyi:-1", "shannon"])
    def test_rejects(self, bad):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_entropy(bad)


class TestCsvFormat:
    def test_none_serializes_empty(self):
        r = WitnessReport(tag="t", family=MIN_ENTROPY, dp_ab=0.5, bound_ab=0.0,
                          dp_ba=-1.0, bound_ba=0.0, violated_ab=False,
                          violated_ba=True, verdict="ExcludesOnlyBA")
        text = csv_text([(0.5, r)])
        line = text.splitlines()[1]
        assert line == "0.5,0.5,0,-1,0,0,1,,,,,ExcludesOnlyBA"

    def test_header(self):
        assert csv_text([]).splitlines()[0] == ",".join(CSV_COLUMNS)


class TestSweep:
    def test_csv_contract(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep", "--process", "upsilon1", "--lambda-steps", "11",
                   "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == list(CSV_COLUMNS)
        assert len(rows) == 11
        for row in rows:
            assert row["violated_ab"] in ("0", "1")
            assert row["verdict"] in VERDICTS
            float(row["dp_ab"])  # parses

    def test_byte_identical_reruns(self, tmp_path):
        args = ["sweep", "--process", "upsilon2", "--lambda-steps", "7"]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(f1)]) == 0
        assert main(args + ["--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_order_swap_symmetry(self, tmp_path):
        out = tmp_path / "sym.csv"
        main(["sweep", "--process", "switch_full", "--lambda-steps", "21",
              "--out", str(out)])
        _, rows = read_csv(out)
        for i, row in enumerate(rows):
            mirror = rows[len(rows) - 1 - i]
            assert abs(float(row["dp_ab"]) - float(mirror["dp_ba"])) < 1e-9
            assert abs(float(row["i1_ab"]) - float(mirror["i1_ba"])) < 1e-9

    def test_both_backends_agree(self, tmp_path):
        out = tmp_path / "both.csv"
        rc = main(["sweep", "--process", "upsilon1", "--lambda-steps", "5",
                   "--backend", "both", "--out", str(out)])
        assert rc == 0

    def test_entropy_flag_changes_values(self, tmp_path):
        f1, f2 = tmp_path / "vn.csv", tmp_path / "r2.csv"
        main(["sweep", "--process", "upsilon1", "--lambda-steps", "3",
              "--out", str(f1)])
        main(["sweep", "--process", "upsilon1", "--lambda-steps", "3",
              "--entropy", "renyi:2", "--out", str(f2)])
        _, r1 = read_csv(f1)
        _, r2 = read_csv(f2)
        assert float(r1[1]["dp_ab"]) != float(r2[1]["dp_ab"])
        # marginal columns stay von Neumann regardless of the DP family
        assert r1[1]["i1_ab"] == r2[1]["i1_ab"]

    def test_bad_range_exits_2(self, capsys):
        rc = main(["sweep", "--process", "upsilon1", "--lambda-min", "0.8",
                   "--lambda-max", "0.2"])
        assert rc == 2
        assert "lambda" in capsys.readouterr().err

    def test_bad_steps_exits_2(self):
        assert main(["sweep", "--process", "upsilon1", "--lambda-steps", "1"]) == 2

    def test_unknown_process_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--process", "bogus"])
        assert exc.value.code == 2

    def test_unknown_entropy_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--process", "upsilon1", "--entropy", "shannon"])
        assert exc.value.code == 2


class TestVerify:
    def test_clean_run_exit_0(self, tmp_path):
        out = tmp_path / "s.json"
        rc = main(["verify", "lemma3", "--trials", "3", "--out", str(out)])
        assert rc == 0
        summary = json.loads(out.read_text())
        assert summary["campaign"] == "lemma3"
        assert summary["failures"] == 0

    def test_failure_exit_1(self, monkeypatch, capsys, tmp_path):
        import qcausal.campaigns as camp
        fake = dict(camp.RUNNERS)
        fake["thm1"] = lambda trials, seed: {
            "campaign": "thm1", "trials": trials, "failures": 2,
            "worst_slack": -1.0, "tolerance": 1e-9, "seed": seed,
            "elapsed_s": 0.0}
        monkeypatch.setattr(camp, "RUNNERS", fake)
        rc = main(["verify", "thm1", "--trials", "1",
                   "--out", str(tmp_path / "f.json")])
        assert rc == 1
        assert "failures" in capsys.readouterr().err

    def test_trials_floor(self):
        assert main(["verify", "ssa", "--trials", "0"]) == 2

    def test_unknown_campaign_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "everything"])
        assert exc.value.code == 2


class TestReproduce:
    def test_figure_4(self, tmp_path):
        rc = main(["reproduce", "4", "--out", str(tmp_path)])
        assert rc == 0
        header, rows = read_csv(tmp_path / "fig4.csv")
        assert header == list(CSV_COLUMNS)
        assert len(rows) == 101
        assert rows[0]["lambda"] == "0" and rows[-1]["lambda"] == "1"

    def test_unknown_figure_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["reproduce", "9z"])
        assert exc.value.code == 2


class TestConsoleScript:
    def test_entry_point_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qcausal.cli"], capture_output=True, text=True)
        assert proc.returncode == 2  # no subcommand is a usage error

    def test_stdout_emission(self):
        proc = subprocess.run(
            ["qcausal", "sweep", "--process", "upsilon1", "--lambda-steps", "3"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_sweep_reports_rejects_unknown_process():
    with pytest.raises(ValueError):
        sweep_reports("sampler", np.array([0.5]), VON_NEUMANN)
