"""Experiment harness: trials, aggregation, sweeps, CSV/manifest output."""

import json
import math
import os

import numpy as np
import pytest

from semcom import cspace, harness, phy
from semcom.errors import InvalidParameterError


class TestTrialRng:
    def test_deterministic(self):
        a = harness.trial_rng(3, 17).integers(0, 1 << 30, size=8)
        b = harness.trial_rng(3, 17).integers(0, 1 << 30, size=8)
        assert np.array_equal(a, b)

    def test_streams_distinct(self):
        draws = {tuple(harness.trial_rng(0, i).integers(0, 1 << 30, size=4))
                 for i in range(64)}
        assert len(draws) == 64


class TestRunTrial:
    def test_noiseless_pipeline_identity(self):
        rec = harness.run_trial("yellow-square", 8, None, harness.trial_rng(0, 0))
        assert not rec.syntactic_error
        assert np.array_equal(rec.bits, rec.received_bits)
        # the received point is exactly the quantized-dequantized encoder point
        spec = phy.QuantizerSpec(8)
        expected = phy.dequantize(phy.quantize(rec.point, spec), spec)
        assert rec.received_point == expected

    def test_noiseless_decodes_correctly(self):
        for i, concept in enumerate(harness.CONCEPT_LABELS):
            rec = harness.run_trial(concept, 10, None, harness.trial_rng(5, i))
            assert rec.decoded == concept
            assert not rec.semantic_error
            assert rec.distortion >= 0.0

    def test_distortion_is_prototype_distance(self):
        rec = harness.run_trial("red-triangle", 8, None, harness.trial_rng(2, 0))
        proto = cspace.concept_by_label("red-triangle").prototype
        assert rec.distortion == pytest.approx(
            cspace.semantic_loss(proto, rec.received_point))

    def test_reproducible(self):
        a = harness.run_trial("blue-circle", 6, 10.0, harness.trial_rng(9, 4))
        b = harness.run_trial("blue-circle", 6, 10.0, harness.trial_rng(9, 4))
        assert a.point == b.point
        assert np.array_equal(a.bits, b.bits)
        assert np.array_equal(a.received_bits, b.received_bits)
        assert a.received_point == b.received_point
        assert a.decoded == b.decoded
        assert a.distortion == b.distortion


class TestTraditionalTrial:
    def test_noiseless_decodes_correctly(self):
        rec = harness.run_traditional_trial("yellow-square", 8, None,
                                            harness.trial_rng(1, 0))
        assert rec.decoded == "yellow-square"
        assert not rec.semantic_error
        assert not rec.degenerate

    def test_packet_size(self):
        rec = harness.run_traditional_trial("red-circle", 2, None,
                                            harness.trial_rng(1, 1))
        assert rec.bits.size == 1875 * 2


class TestAggregate:
    def test_counts_and_rates(self):
        agg = harness.Aggregate()
        agg.add_outcome(True, False, False, 0.5)
        agg.add_outcome(False, True, False, 0.1)
        agg.add_outcome(False, False, True, math.nan)
        assert agg.trials == 3
        assert agg.p_syntactic == pytest.approx(1.0 / 3.0)
        assert agg.p_semantic == pytest.approx(1.0 / 3.0)
        assert agg.degenerate == 1
        assert agg.distortion_count == 2
        assert agg.mean_distortion == pytest.approx(0.3)

    def test_merge_matches_sequential(self):
        a, b, c = harness.Aggregate(), harness.Aggregate(), harness.Aggregate()
        outcomes = [(True, True, False, 0.2), (False, False, False, 0.4),
                    (False, True, False, 0.6), (True, False, False, 0.8)]
        for o in outcomes:
            c.add_outcome(*o)
        for o in outcomes[:2]:
            a.add_outcome(*o)
        for o in outcomes[2:]:
            b.add_outcome(*o)
        a.merge(b)
        assert a.trials == c.trials
        assert a.syntactic_errors == c.syntactic_errors
        assert a.semantic_errors == c.semantic_errors
        assert a.distortion_count == c.distortion_count
        assert a.distortion_sum == pytest.approx(c.distortion_sum)
        assert a.distortion_sq_sum == pytest.approx(c.distortion_sq_sum)

    def test_proportion_se(self):
        agg = harness.Aggregate(trials=400)
        assert agg.proportion_se(0.5) == pytest.approx(0.025)


class TestRunTrials:
    def test_worker_count_invariance(self):
        one = harness.run_trials("semantic", 8, None, 30, 7, workers=1)
        three = harness.run_trials("semantic", 8, None, 30, 7, workers=3)
        assert one == three

    def test_rerun_identical(self):
        a = harness.run_trials("semantic", 4, 10.0, 20, 11, workers=1)
        b = harness.run_trials("semantic", 4, 10.0, 20, 11, workers=1)
        assert a == b

    def test_config_validation(self):
        with pytest.raises(InvalidParameterError):
            harness.ExperimentConfig(system="quantum")
        with pytest.raises(InvalidParameterError):
            harness.ExperimentConfig(trials=0)
        with pytest.raises(InvalidParameterError):
            harness.ExperimentConfig(n_b=0)


class TestSweeps:
    def test_snr_sweep_rows(self):
        cfg = harness.ExperimentConfig(trials=15, snr_db_list=(0.0, 30.0),
                                       base_seed=1)
        rows = harness.sweep_snr(cfg)
        assert len(rows) == 2
        assert list(rows[0]) == harness.SNR_SWEEP_HEADER.split(",")
        assert rows[0]["p_syntactic"] >= rows[1]["p_syntactic"]

    def test_rate_sweep_rows(self):
        cfg = harness.ExperimentConfig(trials=5, base_seed=1)
        rows = harness.sweep_rate(cfg, n_b_values=(2, 8), snr_db=None)
        assert len(rows) == 4
        rates = {(r["system"], r["nb"]): r["rate_bits"] for r in rows}
        assert rates[("semantic", 2)] == 8
        assert rates[("semantic", 8)] == 32
        assert rates[("traditional", 2)] == 3750
        assert rates[("traditional", 8)] == 15000


class TestEmit:
    def rows(self):
        return [{"snr_db": 0.0, "p_syntactic": 0.25, "p_syntactic_se": 0.01,
                 "p_semantic": 0.125, "p_semantic_se": 0.02,
                 "mean_distortion": 0.001234567, "distortion_se": 1e-05}]

    def test_csv_layout_and_manifest(self, tmp_path):
        path = str(tmp_path / "out.csv")
        harness.emit_csv(self.rows(), path, harness.SNR_SWEEP_HEADER,
                         {"trials": 1})
        with open(path) as f:
            lines = f.read().strip().split("\n")
        assert lines[0] == harness.SNR_SWEEP_HEADER
        assert lines[1] == "0,0.25,0.01,0.125,0.02,0.00123457,1e-05"
        with open(path + ".manifest.json") as f:
            manifest = json.load(f)
        assert manifest["config"] == {"trials": 1}
        assert manifest["version"] == harness.VERSION

    def test_plot_data_layout(self, tmp_path):
        path = str(tmp_path / "out.dat")
        harness.emit_plot_data(self.rows(), path, harness.SNR_SWEEP_HEADER)
        with open(path) as f:
            lines = f.read().strip().split("\n")
        assert lines[0] == "# " + harness.SNR_SWEEP_HEADER.replace(",", " ")
        assert lines[1].split(" ")[1] == "0.25"

    def test_refuses_empty_rows(self, tmp_path):
        path = str(tmp_path / "empty.csv")
        with pytest.raises(InvalidParameterError):
            harness.emit_csv([], path, harness.SNR_SWEEP_HEADER)
        assert not os.path.exists(path)

    def test_unwritable_path_raises_ioerror(self):
        with pytest.raises(IOError):
            harness.emit_csv(self.rows(), "/nonexistent-dir/x.csv",
                             harness.SNR_SWEEP_HEADER)
