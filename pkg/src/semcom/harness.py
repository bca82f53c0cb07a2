"""Experiment orchestration: end-to-end trials, SNR and rate sweeps.

Every trial is sealed with its own random stream derived from the base
seed and trial index, so results are identical regardless of worker count
and reruns are byte-for-byte reproducible.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import baseline, cspace, encoder, phy, scenegen
from .errors import InvalidParameterError, SemcomError

VERSION = "0.1.0"

CONCEPT_LABELS = tuple(c.label for c in cspace.default_concepts())

SNR_SWEEP_HEADER = ("snr_db,p_syntactic,p_syntactic_se,p_semantic,p_semantic_se,"
                    "mean_distortion,distortion_se")
RATE_SWEEP_HEADER = "system,nb,rate_bits,p_semantic,p_semantic_se"


@dataclass
class TrialRecord:
    """Outcome of one end-to-end transmission."""

    concept: str
    point: cspace.SemanticPoint | None
    bits: np.ndarray | None
    received_bits: np.ndarray | None
    received_point: cspace.SemanticPoint | None
    decoded: str
    syntactic_error: bool
    semantic_error: bool
    distortion: float
    degenerate: bool = False


@dataclass
class ExperimentConfig:
    system: str = "semantic"
    n_b: int = 8
    snr_db_list: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials: int = 10_000
    base_seed: int = 0
    workers: int = 1
    out_path: str | None = None

    def __post_init__(self):
        if self.system not in ("semantic", "traditional"):
            raise InvalidParameterError(f"unknown system {self.system!r}")
        if self.trials < 1:
            raise InvalidParameterError("trials must be >= 1")
        if not 1 <= self.n_b <= 16:
            raise InvalidParameterError("n_b must be in [1, 16]")


def trial_rng(base_seed: int, index: int) -> np.random.Generator:
    """Independent stream for one trial: hash of (base_seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(index,)))


def run_trial(concept: str, n_b: int, snr_db: float | None,
              rng: np.random.Generator) -> TrialRecord:
    """Scene -> encode -> quantize/pack -> channel -> decode, fully recorded."""
    prototype = cspace.concept_by_label(concept).prototype
    spec = scenegen.sample_spec(concept, rng)
    img = scenegen.render(spec, rng)
    try:
        point = encoder.encode(img)
    except SemcomError:
        # counted, never aborts a sweep
        decoded = CONCEPT_LABELS[0]
        return TrialRecord(concept, None, None, None, None, decoded,
                           syntactic_error=False,
                           semantic_error=decoded != concept,
                           distortion=math.nan, degenerate=True)
    qspec = phy.QuantizerSpec(n_b)
    bits = phy.pack(phy.quantize(point, qspec), n_b)
    received = phy.transmit_packet(bits, phy.ChannelParams(snr_db, rng))
    received_point = phy.dequantize(phy.unpack(received, n_b), qspec)
    decoded = cspace.decode_concept(received_point, cspace.default_concepts()).label
    return TrialRecord(
        concept, point, bits, received, received_point, decoded,
        syntactic_error=bool((bits != received).any()),
        semantic_error=decoded != concept,
        distortion=cspace.semantic_loss(prototype, received_point))


def run_traditional_trial(concept: str, n_b: int, snr_db: float | None,
                          rng: np.random.Generator) -> TrialRecord:
    """Pixel-transmission trial with the shared perception stack at the RX."""
    prototype = cspace.concept_by_label(concept).prototype
    spec = scenegen.sample_spec(concept, rng)
    img = scenegen.render(spec, rng)
    bits = baseline.pixel_quantize(img, n_b)
    received = phy.transmit_packet(bits, phy.ChannelParams(snr_db, rng))
    rx_img = baseline.pixel_dequantize(received, n_b)
    try:
        point = encoder.encode(rx_img)
    except SemcomError:
        point = None
        decoded = CONCEPT_LABELS[0]
        failure = True
        distortion = math.nan
    else:
        decoded = cspace.decode_concept(point, cspace.default_concepts()).label
        failure = False
        distortion = cspace.semantic_loss(prototype, point)
    return TrialRecord(
        concept, None, bits, received, point, decoded,
        syntactic_error=bool((bits != received).any()),
        semantic_error=decoded != concept,
        distortion=distortion, degenerate=failure)


@dataclass
class Aggregate:
    """Order-independent sums over a batch of trials."""

    trials: int = 0
    syntactic_errors: int = 0
    semantic_errors: int = 0
    degenerate: int = 0
    distortion_sum: float = 0.0
    distortion_sq_sum: float = 0.0
    distortion_count: int = 0

    def add(self, rec: TrialRecord) -> None:
        self.add_outcome(rec.syntactic_error, rec.semantic_error,
                         rec.degenerate, rec.distortion)

    def add_outcome(self, syntactic: bool, semantic: bool, degenerate: bool,
                    distortion: float) -> None:
        self.trials += 1
        self.syntactic_errors += syntactic
        self.semantic_errors += semantic
        self.degenerate += degenerate
        if not math.isnan(distortion):
            self.distortion_sum += distortion
            self.distortion_sq_sum += distortion ** 2
            self.distortion_count += 1

    def merge(self, other: "Aggregate") -> None:
        for f in dataclasses.fields(Aggregate):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    @property
    def p_syntactic(self) -> float:
        return self.syntactic_errors / self.trials

    @property
    def p_semantic(self) -> float:
        return self.semantic_errors / self.trials

    def proportion_se(self, p: float) -> float:
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def mean_distortion(self) -> float:
        return self.distortion_sum / self.distortion_count

    @property
    def distortion_se(self) -> float:
        n = self.distortion_count
        var = max(self.distortion_sq_sum / n - self.mean_distortion ** 2, 0.0)
        return math.sqrt(var / n)


def _run_range(system: str, n_b: int, snr_db: float | None,
               base_seed: int, indices: range) -> list[tuple]:
    trial_fn = run_trial if system == "semantic" else run_traditional_trial
    out = []
    for i in indices:
        rng = trial_rng(base_seed, i)
        concept = CONCEPT_LABELS[rng.integers(len(CONCEPT_LABELS))]
        rec = trial_fn(concept, n_b, snr_db, rng)
        out.append((rec.syntactic_error, rec.semantic_error,
                    rec.degenerate, rec.distortion))
    return out


def run_trials(system: str, n_b: int, snr_db: float | None, trials: int,
               base_seed: int, workers: int = 1) -> Aggregate:
    """Run a batch of trials with uniformly drawn concepts.

    Per-trial streams plus accumulation in trial-index order make the
    result bit-identical for every worker count; workers are separate
    processes since the trial loop is CPU-bound.
    """
    if workers <= 1:
        outcomes = _run_range(system, n_b, snr_db, base_seed, range(trials))
    else:
        chunks = [range(w, trials, workers) for w in range(workers)]
        outcomes = [None] * trials
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_range, system, n_b, snr_db, base_seed, c)
                       for c in chunks]
            for chunk, fut in zip(chunks, futures):
                for i, rec in zip(chunk, fut.result()):
                    outcomes[i] = rec
    agg = Aggregate()
    for outcome in outcomes:
        agg.add_outcome(*outcome)
    return agg


def sweep_snr(cfg: ExperimentConfig) -> list[dict]:
    """Error probabilities and mean distortion per SNR point."""
    rows = []
    for snr_db in cfg.snr_db_list:
        agg = run_trials(cfg.system, cfg.n_b, snr_db, cfg.trials,
                         cfg.base_seed, cfg.workers)
        rows.append({
            "snr_db": snr_db,
            "p_syntactic": agg.p_syntactic,
            "p_syntactic_se": agg.proportion_se(agg.p_syntactic),
            "p_semantic": agg.p_semantic,
            "p_semantic_se": agg.proportion_se(agg.p_semantic),
            "mean_distortion": agg.mean_distortion,
            "distortion_se": agg.distortion_se,
        })
    return rows


def sweep_rate(cfg: ExperimentConfig, n_b_values=(2, 5, 8),
               snr_db: float = 15.0) -> list[dict]:
    """Rate-vs-semantic-error table rows for both systems at one SNR."""
    rows = []
    for system in ("semantic", "traditional"):
        rate_fn = (baseline.semantic_rate_bits if system == "semantic"
                   else baseline.traditional_rate_bits)
        for n_b in n_b_values:
            agg = run_trials(system, n_b, snr_db, cfg.trials,
                             cfg.base_seed, cfg.workers)
            rows.append({
                "system": system,
                "nb": n_b,
                "rate_bits": rate_fn(n_b),
                "p_semantic": agg.p_semantic,
                "p_semantic_se": agg.proportion_se(agg.p_semantic),
            })
    return rows


def _format_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _write_manifest(path: str, config: dict) -> None:
    manifest = {"config": config, "version": VERSION}
    with open(path + ".manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def emit_csv(rows: list[dict], path: str, header: str,
             config: dict | None = None) -> None:
    """Write sweep rows as CSV with the normative header, plus a manifest."""
    if not rows:
        raise InvalidParameterError("refusing to write CSV with no rows")
    columns = header.split(",")
    try:
        with open(path, "w", newline="") as f:
            f.write(header + "\n")
            for row in rows:
                f.write(",".join(_format_value(row[c]) for c in columns) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write CSV to {path}: {exc}") from exc
    _write_manifest(path, config or {})


def emit_plot_data(rows: list[dict], path: str, header: str,
                   config: dict | None = None) -> None:
    """Whitespace-delimited variant of the same columns, for gnuplot."""
    if not rows:
        raise InvalidParameterError("refusing to write plot data with no rows")
    columns = header.split(",")
    try:
        with open(path, "w", newline="") as f:
            f.write("# " + " ".join(columns) + "\n")
            for row in rows:
                f.write(" ".join(_format_value(row[c]) for c in columns) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write plot data to {path}: {exc}") from exc
    _write_manifest(path, config or {})
