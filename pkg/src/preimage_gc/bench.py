"""ROC-AUC scoring and the generators x methods x T x seeds sweep harness."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata

from .causality import PipelineConfig, infer_graph
from .errors import ConfigError, ShapeError, UndefinedAucError
from .synthgen import GENERATOR_IDS, generate


def roc_auc(scores, labels) -> float:
    """Probability a random positive outranks a random negative, ties 1/2.

    Computed from rank sums (the Mann-Whitney statistic with average
    ranks), so it is exact under ties.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.ndim != 1 or labels.ndim != 1:
        raise ShapeError("scores and labels must be 1-d")
    if scores.shape != labels.shape:
        raise ShapeError(
            f"length mismatch: {scores.shape[0]} scores, {labels.shape[0]} labels"
        )
    if not np.all(np.isin(labels, (0, 1))):
        raise ValueError("labels must be 0/1")
    positive = labels == 1
    n_pos = int(positive.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAucError(
            f"need both classes, got {n_pos} positives and {n_neg} negatives"
        )
    ranks = rankdata(scores)
    auc = (ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    return float(auc)


def off_diagonal(matrix) -> np.ndarray:
    """The N(N-1) off-diagonal entries in row-major order."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {matrix.shape}")
    mask = ~np.eye(matrix.shape[0], dtype=bool)
    return matrix[mask]


@dataclass(frozen=True)
class CellRecord:
    """One (generator, method, T, seed) outcome; failed cells carry the reason."""

    generator_id: str
    method_id: str
    T: int
    seed: int
    auc: float | None
    error: str | None = None

    def __post_init__(self):
        if self.auc is not None and not 0.0 <= self.auc <= 1.0:
            raise ValueError(f"auc must lie in [0, 1], got {self.auc}")


@dataclass(frozen=True)
class CellSummary:
    """Seed-aggregated statistics for one (generator, method, T) cell.

    Cells with fewer than 2 successful records keep ``note`` set and any
    uncomputable statistics as None.
    """

    generator_id: str
    method_id: str
    T: int
    n: int
    mean: float | None
    median: float | None
    q25: float | None
    q75: float | None
    ci95_half_width: float | None
    note: str | None = None


@dataclass(frozen=True)
class BenchmarkReport:
    records: tuple
    summaries: tuple

    def to_records_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["generator_id", "method_id", "T", "seed", "auc", "error"])
        for r in self.records:
            writer.writerow(
                [
                    r.generator_id,
                    r.method_id,
                    r.T,
                    r.seed,
                    "" if r.auc is None else repr(r.auc),
                    "" if r.error is None else r.error,
                ]
            )
        return buf.getvalue()

    def to_summaries_json(self) -> str:
        return json.dumps([asdict(s) for s in self.summaries], indent=2) + "\n"


def _run_cell(task):
    generator_id, method_id, config, T, seed = task
    try:
        dataset = generate(generator_id, T, seed)
        graph = infer_graph(dataset.panel, config)
        auc = roc_auc(off_diagonal(graph.delta), off_diagonal(dataset.ground_truth))
        return CellRecord(generator_id, method_id, T, seed, auc=auc)
    except Exception as err:
        # failures are data: record and keep sweeping
        return CellRecord(
            generator_id,
            method_id,
            T,
            seed,
            auc=None,
            error=f"{type(err).__name__}: {err}",
        )


def run_benchmark(
    generators,
    methods,
    T_grid,
    seeds,
    jobs: int = 1,
    progress=None,
) -> BenchmarkReport:
    """Score every (generator, method, T, seed) cell and summarize.

    methods is a list of (method_id, PipelineConfig) pairs; seeds is a
    count (0..seeds-1) or an explicit list. Cells are independent, so
    jobs > 1 runs them in worker processes; records always come back in
    grid order, so the report is identical regardless of jobs.
    ``progress`` (if given) is called with each completed CellRecord.
    """
    generators = list(generators)
    if not generators:
        raise ConfigError("no generators given")
    for g in generators:
        if g not in GENERATOR_IDS:
            raise ConfigError(f"unknown generator {g!r}; choose from {GENERATOR_IDS}")
    methods = list(methods)
    if not methods:
        raise ConfigError("no methods given")
    for method_id, config in methods:
        if not isinstance(config, PipelineConfig):
            raise ConfigError(f"method {method_id!r} has no PipelineConfig")
    T_grid = [int(T) for T in T_grid]
    if not T_grid:
        raise ConfigError("empty T grid")
    for T in T_grid:
        if T < 50:
            raise ConfigError(f"T values must be >= 50, got {T}")
    if isinstance(seeds, (int, np.integer)):
        seed_list = list(range(int(seeds)))
    else:
        seed_list = [int(s) for s in seeds]
    if not seed_list:
        raise ConfigError("no seeds given")
    jobs = int(jobs)
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")

    tasks = [
        (g, method_id, config, T, s)
        for g in generators
        for method_id, config in methods
        for T in T_grid
        for s in seed_list
    ]

    records = []
    if jobs == 1:
        for task in tasks:
            record = _run_cell(task)
            records.append(record)
            if progress is not None:
                progress(record)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map preserves task order, keeping assembly deterministic
            for record in pool.map(_run_cell, tasks):
                records.append(record)
                if progress is not None:
                    progress(record)

    return BenchmarkReport(
        records=tuple(records), summaries=tuple(summarize(records))
    )


def summarize(records):
    """Aggregate records into per-(generator, method, T) summaries.

    Quartiles use linear interpolation between order statistics; the CI
    half-width is 1.96 * sd / sqrt(n) with the n-1 divisor.
    """
    groups = {}
    for r in records:
        groups.setdefault((r.generator_id, r.method_id, r.T), []).append(r)
    summaries = []
    for (generator_id, method_id, T), cell in groups.items():
        values = np.array([r.auc for r in cell if r.auc is not None])
        n = int(values.size)
        if n == 0:
            summaries.append(
                CellSummary(
                    generator_id, method_id, T, n=0,
                    mean=None, median=None, q25=None, q75=None,
                    ci95_half_width=None, note="no successful records",
                )
            )
            continue
        q25, median, q75 = np.percentile(values, [25, 50, 75])
        if n == 1:
            ci = None
            note = "single record; dispersion undefined"
        else:
            ci = float(1.96 * values.std(ddof=1) / math.sqrt(n))
            note = None
        summaries.append(
            CellSummary(
                generator_id,
                method_id,
                T,
                n=n,
                mean=float(values.mean()),
                median=float(median),
                q25=float(q25),
                q75=float(q75),
                ci95_half_width=ci,
                note=note,
            )
        )
    return summaries
