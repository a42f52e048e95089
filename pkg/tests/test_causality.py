"""End-to-end causal pipeline: index formula, graphs, invariances."""

import math

import numpy as np
import pytest

import preimage_gc.causality as causality_module
from preimage_gc import (
    IDENTITY,
    CausalGraph,
    DegenerateInputError,
    DegenerateModelError,
    InsufficientSamplesError,
    KernelSpec,
    PipelineConfig,
    RankError,
    TimeSeriesPanel,
    causality_index,
    fit_var,
    infer_graph,
    linear_gc_baseline,
    normalize,
    run_full_model,
)


def random_panel(T, N, seed, names=None):
    rng = np.random.default_rng(seed)
    if names is None:
        names = tuple(f"n{j}" for j in range(N))
    return TimeSeriesPanel(rng.normal(size=(T, N)), names)


def chain_panel(T, seed):
    """a -> b, with c independent; linear dynamics, noise 0.1."""
    rng = np.random.default_rng(seed)
    total = T + 200
    e = rng.normal(0.0, 0.1, size=(total, 3))
    y = np.zeros((total, 3))
    for t in range(1, total):
        y[t, 0] = 0.5 * y[t - 1, 0] + e[t, 0]
        y[t, 1] = 0.6 * y[t - 1, 0] + 0.3 * y[t - 1, 1] + e[t, 1]
        y[t, 2] = 0.5 * y[t - 1, 2] + e[t, 2]
    return TimeSeriesPanel(y[200:], ("a", "b", "c"))


class TestCausalityIndex:
    def test_equal_variances_give_zero(self):
        assert causality_index(1.0, 1.0) == 0.0

    def test_e_ratio_gives_one(self):
        assert causality_index(math.e, 1.0) == 1.0

    def test_smaller_reduced_clamps_to_zero(self):
        assert causality_index(0.5, 1.0) == 0.0

    def test_nonpositive_variance_rejected(self):
        with pytest.raises(DegenerateModelError, match="ridge"):
            causality_index(0.0, 1.0)
        with pytest.raises(DegenerateModelError):
            causality_index(1.0, -2.0)
        with pytest.raises(DegenerateModelError):
            causality_index(float("nan"), 1.0)


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig()
        assert config.kernel == "rbf"
        assert config.p_select == 0.95
        assert config.lag == 1
        assert config.ridge_var == 1e-3
        assert config.ridge_preimage == 1e-3
        assert config.normalize_input is True

    def test_rejects_unknown_kernel_string(self):
        with pytest.raises(ValueError, match="kernel"):
            PipelineConfig(kernel="quadratic")

    def test_rejects_bad_p_select(self):
        with pytest.raises(ValueError):
            PipelineConfig(p_select=0)
        with pytest.raises(ValueError):
            PipelineConfig(p_select=1.2)

    def test_rejects_negative_ridge(self):
        with pytest.raises(ValueError, match="ridge"):
            PipelineConfig(ridge_var=-1.0)


class TestRunFullModel:
    def test_identity_pipeline_matches_plain_var(self):
        panel = random_panel(120, 3, seed=0)
        config = PipelineConfig(kernel=IDENTITY, ridge_var=0.0, ridge_preimage=0.0)
        result = run_full_model(panel, config)
        direct = fit_var(normalize(panel).values, lag=1, ridge_lambda=0.0)
        np.testing.assert_allclose(
            result.residual_variance, direct.residual_variance, rtol=1e-8
        )

    def test_reconstruction_alignment(self):
        panel = random_panel(80, 3, seed=1)
        result = run_full_model(panel, PipelineConfig(lag=2))
        assert result.reconstruction.shape == (78, 3)
        assert result.residual_variance.shape == (3,)

    def test_stage_tag_on_normalize_failure(self):
        values = np.column_stack([np.arange(20.0), np.full(20, 3.0)])
        panel = TimeSeriesPanel(values, ("ok", "flat"))
        with pytest.raises(DegenerateInputError, match=r"\[normalize\].*flat"):
            run_full_model(panel)

    def test_too_short_panel(self):
        panel = random_panel(4, 2, seed=2)
        with pytest.raises(InsufficientSamplesError):
            run_full_model(panel, PipelineConfig(lag=3))

    def test_explicit_kernel_spec_is_used(self):
        panel = random_panel(60, 2, seed=3)
        config = PipelineConfig(kernel=KernelSpec("rbf", bandwidth=0.7), p_select=10)
        result = run_full_model(panel, config)
        assert result.kpca.spec.bandwidth == 0.7
        assert result.features.shape == (60, 10)


class TestInferGraph:
    def test_degenerate_config_equals_baseline_exactly(self):
        panel = random_panel(150, 4, seed=4)
        config = PipelineConfig(
            kernel=IDENTITY, p_select=4, ridge_var=0.0, ridge_preimage=0.0
        )
        a = infer_graph(panel, config)
        b = linear_gc_baseline(panel)
        assert np.array_equal(a.delta, b.delta)
        assert np.array_equal(a.raw_log_ratios, b.raw_log_ratios)

    def test_linear_kernel_approximates_baseline(self):
        # a genuine linear-kernel feature space is a rotation of the
        # inputs, which the VAR and pre-image stages absorb
        panel = random_panel(150, 3, seed=5)
        config = PipelineConfig(
            kernel=KernelSpec("linear"), p_select=3, ridge_var=0.0, ridge_preimage=0.0
        )
        a = infer_graph(panel, config)
        b = linear_gc_baseline(panel)
        np.testing.assert_allclose(a.delta, b.delta, atol=1e-6)

    def test_delta_is_clamped_raw(self):
        panel = random_panel(100, 3, seed=6)
        graph = infer_graph(panel)
        np.testing.assert_allclose(
            graph.delta, np.maximum(graph.raw_log_ratios, 0.0), atol=0
        )

    def test_detects_chain_edge(self):
        hits = 0
        for seed in range(20):
            graph = infer_graph(chain_panel(300, seed))
            flat = graph.delta.copy()
            np.fill_diagonal(flat, -np.inf)
            hits += np.unravel_index(np.argmax(flat), flat.shape) == (0, 1)
        assert hits >= 15

    def test_deterministic(self):
        panel = chain_panel(200, 3)
        a = infer_graph(panel)
        b = infer_graph(panel)
        assert np.array_equal(a.delta, b.delta)

    def test_column_permutation_equivariance(self):
        panel = chain_panel(200, 7)
        perm = [2, 0, 1]
        permuted = TimeSeriesPanel(
            panel.values[:, perm], tuple(panel.node_names[p] for p in perm)
        )
        a = infer_graph(panel)
        b = infer_graph(permuted)
        np.testing.assert_allclose(
            b.delta, a.delta[np.ix_(perm, perm)], atol=1e-8
        )

    def test_per_column_scale_invariance(self):
        panel = chain_panel(200, 8)
        scaled = TimeSeriesPanel(
            panel.values * np.array([5.0, 0.25, 40.0]), panel.node_names
        )
        a = infer_graph(panel)
        b = infer_graph(scaled)
        np.testing.assert_allclose(b.delta, a.delta, atol=1e-8)

    def test_two_node_panel(self):
        # master-slave chaos: strong forward edge, weak reverse
        from preimage_gc import generate

        dataset = generate("logistic2", 300, 1)
        graph = infer_graph(dataset.panel)
        assert graph.delta.shape == (2, 2)
        assert graph.delta[0, 1] > graph.delta[1, 0]

    def test_integer_p_select_capped_on_reduced_panel(self):
        # linear kernel rank equals the column count, so P=3 only fits
        # the full panel; the leave-one-out refits must cap, not fail
        panel = random_panel(100, 3, seed=9)
        config = PipelineConfig(kernel=KernelSpec("linear"), p_select=3)
        graph = infer_graph(panel, config)
        assert np.all(np.isfinite(graph.delta))

    def test_overrequested_p_select_still_fails_on_full_panel(self):
        panel = random_panel(100, 3, seed=10)
        config = PipelineConfig(kernel=KernelSpec("linear"), p_select=30)
        with pytest.raises(RankError, match=r"\[pca\]"):
            infer_graph(panel, config)

    def test_reduced_model_failure_names_node(self, monkeypatch):
        real = causality_module._fit_pipeline

        def flaky(values, config, cap_rank=False, node_names=None):
            if values.shape[1] == 2:
                raise RankError("synthetic failure", achievable_rank=1)
            return real(values, config, cap_rank, node_names)

        monkeypatch.setattr(causality_module, "_fit_pipeline", flaky)
        panel = random_panel(80, 3, seed=11)
        with pytest.raises(RankError, match="excluding node 'n0'"):
            infer_graph(panel)

    def test_strengthening_an_edge_does_not_weaken_its_delta(self):
        from preimage_gc import generate

        medians = []
        for gain in (0.4, 0.8):
            deltas = [
                infer_graph(
                    generate("fanout3", 300, seed, params={"tanh_gain": gain}).panel
                ).delta[0, 1]
                for seed in range(20)
            ]
            medians.append(np.median(deltas))
        assert medians[1] >= medians[0]


class TestCausalGraph:
    def make_graph(self):
        delta = np.array([[0.0, 0.5, 0.1], [0.0, 0.0, 0.9], [0.2, 0.0, 0.0]])
        raw = np.array([[0.0, 0.5, 0.1], [-0.3, 0.0, 0.9], [0.2, -0.1, 0.0]])
        return CausalGraph(delta=delta, node_names=("a", "b", "c"), raw_log_ratios=raw)

    def test_edge_rows_sorted_by_strength(self):
        rows = self.make_graph().edge_rows()
        assert rows[0] == ("b", "c", 0.9)
        assert rows[1] == ("a", "b", 0.5)
        values = [r[2] for r in rows]
        assert values == sorted(values, reverse=True)
        assert len(rows) == 6

    def test_edge_ties_break_by_index(self):
        delta = np.zeros((3, 3))
        graph = CausalGraph(
            delta=delta, node_names=("a", "b", "c"), raw_log_ratios=delta
        )
        pairs = [(r[0], r[1]) for r in graph.edge_rows()]
        assert pairs == [
            ("a", "b"), ("a", "c"), ("b", "a"), ("b", "c"), ("c", "a"), ("c", "b"),
        ]

    def test_edge_csv_header(self):
        text = self.make_graph().to_edge_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "cause,effect,delta"
        assert lines[1].startswith("b,c,")

    def test_dict_round_trip(self):
        graph = self.make_graph()
        again = CausalGraph.from_dict(graph.to_dict())
        assert np.array_equal(again.delta, graph.delta)
        assert np.array_equal(again.raw_log_ratios, graph.raw_log_ratios)
        assert again.node_names == graph.node_names

    def test_rejects_negative_delta(self):
        with pytest.raises(ValueError, match="nonnegative"):
            CausalGraph(
                delta=np.array([[0.0, -0.1], [0.0, 0.0]]),
                node_names=("a", "b"),
                raw_log_ratios=np.zeros((2, 2)),
            )

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValueError, match="diagonal"):
            CausalGraph(
                delta=np.eye(2),
                node_names=("a", "b"),
                raw_log_ratios=np.zeros((2, 2)),
            )

    def test_from_dict_missing_key(self):
        with pytest.raises(ValueError, match="missing"):
            CausalGraph.from_dict({"delta": [[0.0]]})
