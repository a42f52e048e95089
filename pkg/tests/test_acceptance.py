"""Release gate: eleven numbered end-to-end checks at frozen tolerances.

Each check prints one PASS/FAIL line directly to the terminal (bypassing
capture), so a plain ``pytest -v`` log doubles as the acceptance record.
Check 10 needs the river dataset described in the README and reports SKIP
when the file is absent. The full sweep behind checks 2-4 runs once per
session (about a minute on one core).
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from preimage_gc import (
    IDENTITY,
    PipelineConfig,
    causality_index,
    fit_kernel_pca,
    fit_var,
    generate,
    infer_graph,
    learn_preimage,
    linear_gc_baseline,
    median_bandwidth,
    normalize_columns,
    off_diagonal,
    project,
    reconstruct,
    roc_auc,
    run_benchmark,
    KernelSpec,
    TimeSeriesPanel,
)
from preimage_gc.cli import main as cli_main

RIVER_CSV = Path(__file__).resolve().parent.parent / "data" / "river.csv"
RIVER_INI = Path(__file__).resolve().parent.parent / "configs" / "river.ini"

SWEEP_GENERATORS = ("logistic2", "fanout3", "fanin3", "linear5", "nonlinear5")
SWEEP_T_GRID = (50, 100, 200, 500)
SWEEP_SEEDS = 50
SWEEP_METHODS = [
    ("kernel", PipelineConfig()),
    ("linear-gc", PipelineConfig(kernel=IDENTITY, ridge_var=0.0, ridge_preimage=0.0)),
]


def report(capsys, number, name, ok, detail):
    """One visible line per check, even under pytest's output capture."""
    verdict = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"[check {number:>2}] {name}: {verdict} ({detail})")
    assert ok, f"check {number} {name}: {detail}"


def skip_line(capsys, number, name, reason):
    with capsys.disabled():
        print(f"[check {number:>2}] {name}: SKIP ({reason})")
    pytest.skip(reason)


@pytest.fixture(scope="session")
def sweep():
    """Full benchmark grid used by checks 2, 3, and 4."""
    start = time.perf_counter()
    rep = run_benchmark(SWEEP_GENERATORS, SWEEP_METHODS, SWEEP_T_GRID, SWEEP_SEEDS)
    elapsed = time.perf_counter() - start
    return rep, elapsed


def mean_auc(rep, generator_id, method_id, T):
    for s in rep.summaries:
        if (s.generator_id, s.method_id, s.T) == (generator_id, method_id, T):
            assert s.n == SWEEP_SEEDS, f"{s.n} of {SWEEP_SEEDS} cells succeeded"
            return s.mean
    raise AssertionError(f"no summary for {(generator_id, method_id, T)}")


def test_check_01_degenerate_config_matches_linear_gc(capsys):
    config = PipelineConfig(kernel=IDENTITY, ridge_var=0.0, ridge_preimage=0.0)
    start = time.perf_counter()
    worst = 0.0
    for seed in range(10):
        panel = generate("linear5", 500, seed).panel
        via_pipeline = infer_graph(panel, config)
        via_baseline = linear_gc_baseline(panel)
        worst = max(worst, float(np.abs(via_pipeline.delta - via_baseline.delta).max()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 5.0
    report(capsys, 1, "degenerate config equals linear GC", ok,
           f"max |diff| {worst:.2e}, {elapsed:.2f} s")


def test_check_02_linear_gc_near_ceiling_on_linear_data(capsys, sweep):
    rep, _ = sweep
    auc = mean_auc(rep, "linear5", "linear-gc", 500)
    report(capsys, 2, "linear GC sanity on linear5", auc > 0.9,
           f"mean AUC {auc:.3f} > 0.9")


def test_check_03_kernel_beats_linear_on_nonlinear_data(capsys, sweep):
    rep, _ = sweep
    details = []
    ok = True
    for gen in ("nonlinear5", "fanout3"):
        kernel = mean_auc(rep, gen, "kernel", 500)
        base = mean_auc(rep, gen, "linear-gc", 500)
        ok = ok and kernel >= base and kernel > 0.8
        details.append(f"{gen} {kernel:.3f} vs {base:.3f}")
    report(capsys, 3, "kernel advantage on nonlinear data", ok, "; ".join(details))


def test_check_04_auc_improves_with_sample_size(capsys, sweep):
    rep, elapsed = sweep
    slack = 0.03
    monotone_ok = True
    short_wins = 0
    details = []
    for gen in SWEEP_GENERATORS:
        means = [mean_auc(rep, gen, "kernel", T) for T in SWEEP_T_GRID]
        steps_ok = all(b >= a - slack for a, b in zip(means, means[1:]))
        monotone_ok = monotone_ok and steps_ok
        short_wins += means[0] > 0.6
        details.append(f"{gen} " + "/".join(f"{m:.2f}" for m in means))
    ok = monotone_ok and short_wins >= 4 and elapsed < 1800.0
    report(capsys, 4, "sample-size trend across the grid", ok,
           f"{'; '.join(details)}; T=50 wins {short_wins}/5; sweep {elapsed:.0f} s")


def test_check_05_null_calibration_on_white_noise(capsys):
    # White noise has no true edges, so a single-class labeling would make
    # AUC undefined; score the deltas against the fixed edge set of the
    # 5-node linear generator instead. Exchangeable null scores make any
    # fixed labeling a coin flip, which is what this check calibrates.
    labels = off_diagonal(generate("linear5", 50, 0).ground_truth)
    aucs = []
    raw_magnitudes = []
    for seed in range(50):
        rng = np.random.default_rng(10_000 + seed)
        values = rng.standard_normal((500, 5))
        graph = infer_graph(TimeSeriesPanel(values, tuple(f"y{j}" for j in range(1, 6))))
        aucs.append(roc_auc(off_diagonal(graph.delta), labels))
        raw_magnitudes.extend(np.abs(off_diagonal(graph.raw_log_ratios)))
    mean = float(np.mean(aucs))
    median_raw = float(np.median(raw_magnitudes))
    ok = 0.4 <= mean <= 0.6 and median_raw < 0.05
    report(capsys, 5, "null calibration on white noise", ok,
           f"mean AUC {mean:.3f} in [0.4, 0.6]; median |log ratio| {median_raw:.4f} < 0.05")


def test_check_06_causality_index_branches(capsys):
    equal = causality_index(1.0, 1.0)
    e_ratio = causality_index(math.e, 1.0)
    clamped = causality_index(1.0, math.e)
    ok = equal == 0.0 and e_ratio == 1.0 and clamped == 0.0
    report(capsys, 6, "causality index branch values", ok,
           f"{equal!r}, {e_ratio!r}, {clamped!r}")


def test_check_07_linear_kernel_pca_matches_classical_pca(capsys):
    worst = 0.0
    for trial in range(5):
        rng = np.random.default_rng(7_000 + trial)
        X = rng.standard_normal((50, 4))
        Xc = X - X.mean(axis=0)
        U, S, _ = np.linalg.svd(Xc, full_matrices=False)
        classical = U * S
        model = fit_kernel_pca(KernelSpec("linear"), X, p_select=4)
        scores = project(model, X)
        for p in range(4):
            col = scores[:, p]
            ref = classical[:, p]
            if np.dot(col, ref) < 0:
                ref = -ref
            worst = max(worst, float(np.abs(col - ref).max() / np.abs(ref).max()))
    report(capsys, 7, "linear-kernel PCA equals classical PCA", worst < 1e-8,
           f"worst relative error {worst:.2e}")


def test_check_08_preimage_round_trip(capsys):
    rng = np.random.default_rng(88)
    X = normalize_columns(rng.standard_normal((40, 3)))
    model = fit_kernel_pca(KernelSpec("linear"), X, p_select=1.0)
    H = project(model, X)
    linear_mse = float(np.mean((X - reconstruct(learn_preimage(X, H, 0.0), H)) ** 2))

    t = np.arange(200.0)
    smooth = np.column_stack(
        [np.sin(2 * np.pi * t / 40), np.cos(2 * np.pi * t / 25), np.sin(2 * np.pi * t / 60 + 0.5)]
    )
    smooth = normalize_columns(smooth)
    spec = KernelSpec("rbf", bandwidth=median_bandwidth(smooth))
    model = fit_kernel_pca(spec, smooth, p_select=0.99)
    H = project(model, smooth)
    recon = reconstruct(learn_preimage(smooth, H), H)
    rbf_ratio = float(np.mean((smooth - recon) ** 2) / smooth.var())
    ok = linear_mse < 1e-10 and rbf_ratio < 0.05
    report(capsys, 8, "pre-image round trip", ok,
           f"linear MSE {linear_mse:.2e}; rbf MSE/var {rbf_ratio:.4f}")


def test_check_09_var_recovery_from_noiseless_data(capsys):
    A = np.array([[0.5, 0.2], [0.0, 0.4]])
    series = np.empty((200, 2))
    x = np.array([1.0, -1.0])
    for tick in range(200):
        x = A @ x
        series[tick] = x
    fit = fit_var(series, lag=1, ridge_lambda=0.0)
    worst = float(np.abs(fit.coefficients[0] - A).max())
    report(capsys, 9, "VAR coefficient recovery", worst < 1e-6,
           f"max |error| {worst:.2e}")


def test_check_10_river_case_study(capsys):
    if not RIVER_CSV.is_file():
        skip_line(capsys, 10, "river case study",
                  f"{RIVER_CSV} not present; see README for the download steps")
    from preimage_gc import ingest_csv
    from preimage_gc.cli import _pipeline_config_from_file

    panel = ingest_csv(RIVER_CSV)
    config = _pipeline_config_from_file(RIVER_INI) if RIVER_INI.is_file() else None
    graph = infer_graph(panel, config)
    rows = graph.edge_rows()
    top_cause, top_effect, _ = rows[0]
    rank = {(c, e): k for k, (c, e, _) in enumerate(rows)}
    ok = (
        (top_cause, top_effect) == ("IK", "DD")
        and rank[("IL", "IK")] > 0
        and rank[("IL", "DD")] > 0
    )
    report(capsys, 10, "river case study", ok,
           f"top edge {top_cause}->{top_effect}; IL->IK rank {rank.get(('IL', 'IK'))}, "
           f"IL->DD rank {rank.get(('IL', 'DD'))}")


def test_check_11_cli_outputs_are_deterministic(capsys, tmp_path):
    bench_ini = tmp_path / "bench.ini"
    bench_ini.write_text(
        "[bench]\ngenerators = logistic2\nT_grid = 50\nseeds = 2\n\n"
        "[method kernel]\nkernel = rbf\n\n"
        "[method base]\nkernel = linear-identity\nridge_var = 0\nridge_preimage = 0\n"
    )
    digests = []
    for run, jobs in (("a", "1"), ("b", "1"), ("c", "2")):
        out = tmp_path / run
        assert cli_main(["synth", "fanout3", "--T", "70", "--seed", "1", "--out", str(out)]) == 0
        data = out / "fanout3_T70_seed1.csv"
        assert cli_main(["infer", str(data), "--out", str(out)]) == 0
        assert cli_main(
            ["bench", "--config", str(bench_ini), "--out", str(out), "--jobs", jobs]
        ) == 0
        digests.append(
            tuple(
                (out / name).read_bytes()
                for name in (
                    "fanout3_T70_seed1.csv",
                    "fanout3_T70_seed1.json",
                    "graph.json",
                    "edges.csv",
                    "records.csv",
                    "summaries.json",
                )
            )
        )
    ok = digests[0] == digests[1] == digests[2]
    report(capsys, 11, "deterministic CLI outputs", ok,
           "synth/infer/bench byte-identical across reruns and jobs=2")
