"""Command-line interface, exercised in-process through main()."""

import csv
import os

import numpy as np

from semcom import harness, scenegen
from semcom.cli import main


class TestPrototypes:
    def test_prints_table(self, capsys):
        assert main(["prototypes"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("label,r,h,s,b\n")
        assert "yellow-square,1.414214" in out

    def test_writes_file(self, tmp_path, capsys):
        path = str(tmp_path / "protos.csv")
        assert main(["prototypes", "--out", path]) == 0
        assert os.path.exists(path)


class TestSimulate:
    def test_noiseless_smoke(self, capsys):
        code = main(["simulate", "--trials", "10", "--seed", "3",
                     "--snr-db", "30", "--workers", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "p_semantic=" in out and "trials=10" in out


class TestSweeps:
    def test_sweep_snr_csv(self, tmp_path, capsys):
        path = str(tmp_path / "sweep.csv")
        code = main(["sweep-snr", "--trials", "8", "--seed", "1",
                     "--snr-db", "0,30", "--out", path])
        assert code == 0
        with open(path) as f:
            lines = f.read().strip().split("\n")
        assert lines[0] == harness.SNR_SWEEP_HEADER
        assert len(lines) == 3
        assert os.path.exists(path + ".manifest.json")

    def test_sweep_snr_stdout(self, capsys):
        code = main(["sweep-snr", "--trials", "5", "--seed", "1",
                     "--snr-db", "30"])
        assert code == 0
        assert capsys.readouterr().out.startswith(harness.SNR_SWEEP_HEADER)

    def test_sweep_rate_reports_reduction(self, tmp_path, capsys):
        path = str(tmp_path / "rate.csv")
        code = main(["sweep-rate", "--trials", "3", "--seed", "1",
                     "--out", path])
        assert code == 0
        assert "99.79%" in capsys.readouterr().out
        with open(path) as f:
            assert f.readline().strip() == harness.RATE_SWEEP_HEADER


class TestInspect:
    def test_roundtrip_via_ppm(self, tmp_path, capsys, rng):
        spec = scenegen.sample_spec("red-triangle", rng)
        img = scenegen.render(spec, rng)
        path = str(tmp_path / "scene.ppm")
        scenegen.write_ppm(img, path)
        assert main(["inspect", path]) == 0
        out = capsys.readouterr().out
        assert "decoded concept: red-triangle" in out

    def test_missing_file_fails(self, tmp_path, capsys):
        code = main(["inspect", str(tmp_path / "nope.ppm")])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestRenderDataset:
    def test_writes_dataset(self, tmp_path, capsys):
        out = str(tmp_path / "ds")
        code = main(["render-dataset", "--per-concept", "1", "--out", out])
        assert code == 0
        assert os.path.exists(os.path.join(out, "labels.csv"))


class TestFuncomp:
    def test_classes_mod2(self, tmp_path, capsys):
        spec = tmp_path / "fn.csv"
        with open(spec, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["element", "output", "probability"])
            for x in range(4):
                writer.writerow([x, x % 2, ""])
        assert main(["funcomp", "classes", "--spec", str(spec)]) == 0
        out = capsys.readouterr().out
        assert "{0,2}" in out and "{1,3}" in out
        assert "min_bits=1" in out

    def test_rate_search_noiseless(self, capsys):
        code = main(["funcomp", "rate-search", "--tau", "10.0", "--noiseless",
                     "--trials", "10"])
        assert code == 0
        assert "minimal_nb=1" in capsys.readouterr().out

    def test_rate_search_rejects_bad_tau(self, capsys):
        code = main(["funcomp", "rate-search", "--tau", "-1", "--noiseless",
                     "--trials", "5"])
        assert code == 1
