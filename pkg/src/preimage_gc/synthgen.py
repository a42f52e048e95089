"""Seeded synthetic benchmark systems with known causal graphs.

Five generators: a chaotic 2-node master-slave logistic map, 3-node
fan-out and fan-in motifs with tanh/square couplings, a 5-node stable
linear VAR, and its nonlinear twin. Every generator draws from one
independent substream per node (a SeedSequence spawn), so trajectories
are reproducible bit for bit given (generator_id, T, seed, params).

The default parameters below are the definitions of record for these
benchmarks; tests and shipped configs rely on them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import TimeSeriesPanel
from .errors import InstabilityError

GENERATOR_IDS = ("logistic2", "fanout3", "fanin3", "linear5", "nonlinear5")

# Magnitudes at or above this abort generation as divergence.
MAGNITUDE_BOUND = 1e6

DEFAULT_BURN_IN = 1000

# Row = effect, column = cause; diagonal entries are self couplings.
# Chain/branch topology y1 -> y2 -> {y3, y4}, y4 -> y5, upper-triangular
# free so the spectral radius is the largest self term (0.6).
LINEAR5_COEFFICIENTS = np.array(
    [
        [0.50, 0.00, 0.00, 0.00, 0.00],
        [0.50, 0.60, 0.00, 0.00, 0.00],
        [0.00, 0.45, 0.50, 0.00, 0.00],
        [0.00, -0.40, 0.00, 0.40, 0.00],
        [0.00, 0.00, 0.00, 0.50, 0.35],
    ]
)
LINEAR5_COEFFICIENTS.setflags(write=False)

# Cross couplings of nonlinear5 pass through tanh, except these
# (effect, cause) pairs, which use the square of the cause instead.
NONLINEAR5_SQUARED = frozenset({(3, 1)})

_DEFAULTS = {
    "logistic2": {"c": 0.4, "obs_noise": 0.01, "burn_in": DEFAULT_BURN_IN},
    "fanout3": {
        "a_hub": 0.5,
        "tanh_gain": 0.7,
        "tanh_self": 0.3,
        "square_gain": 0.7,
        "square_self": -0.3,
        "noise": 0.1,
        "burn_in": DEFAULT_BURN_IN,
    },
    "fanin3": {
        "a_root": 0.5,
        "tanh_gain": 0.5,
        "square_gain": 0.5,
        "sink_self": 0.2,
        "noise": 0.1,
        "burn_in": DEFAULT_BURN_IN,
    },
    "linear5": {
        "coefficients": LINEAR5_COEFFICIENTS,
        "noise": 0.1,
        "burn_in": DEFAULT_BURN_IN,
    },
    "nonlinear5": {
        "coefficients": LINEAR5_COEFFICIENTS,
        "noise": 0.1,
        "burn_in": DEFAULT_BURN_IN,
    },
}


@dataclass(frozen=True)
class SyntheticDataset:
    """A generated panel together with the graph that produced it."""

    panel: TimeSeriesPanel
    ground_truth: np.ndarray
    generator_id: str
    seed: int
    params: dict

    def __post_init__(self):
        gt = np.array(self.ground_truth, dtype=int)
        if gt.ndim != 2 or gt.shape[0] != gt.shape[1]:
            raise ValueError(f"ground_truth must be square, got shape {gt.shape}")
        if np.any(np.diag(gt) != 0):
            raise ValueError("ground_truth diagonal must be zero")
        if not np.all((gt == 0) | (gt == 1)):
            raise ValueError("ground_truth must be binary")
        gt.setflags(write=False)
        object.__setattr__(self, "ground_truth", gt)


def ground_truth_edges(dataset: SyntheticDataset):
    """All (cause, effect) index pairs of the true graph, row-major."""
    gt = dataset.ground_truth
    N = gt.shape[0]
    return [(i, j) for i in range(N) for j in range(N) if gt[i, j] == 1]


def _resolve_params(generator_id, overrides):
    defaults = _DEFAULTS[generator_id]
    unknown = set(overrides) - set(defaults)
    if unknown:
        raise ValueError(
            f"unknown parameter(s) for {generator_id}: {sorted(unknown)}; "
            f"valid keys are {sorted(defaults)}"
        )
    params = dict(defaults)
    params.update(overrides)
    burn = params["burn_in"]
    if int(burn) != burn or burn < 0:
        raise ValueError(f"burn_in must be a nonnegative integer, got {burn}")
    params["burn_in"] = int(burn)
    return params


def _node_streams(seed, n_nodes):
    children = np.random.SeedSequence(seed).spawn(n_nodes)
    return [np.random.Generator(np.random.PCG64(ss)) for ss in children]


def _guard(state, step, params):
    if np.max(np.abs(state)) >= MAGNITUDE_BOUND:
        raise InstabilityError(
            f"trajectory diverged at step {step} (|y| >= {MAGNITUDE_BOUND:g})",
            step=step,
            params=params,
        )


def _gen_logistic2(T, seed, params):
    c = params["c"]
    burn = params["burn_in"]
    streams = _node_streams(seed, 2)
    lo, hi = 1e-12, 1.0 - 1e-12
    x = min(max(streams[0].uniform(), lo), hi)
    y = min(max(streams[1].uniform(), lo), hi)
    out = np.empty((T, 2))
    for t in range(burn + T):
        x_new = 4.0 * x * (1.0 - x)
        mix = c * x + (1.0 - c) * y
        y_new = 4.0 * mix * (1.0 - mix)
        x = min(max(x_new, lo), hi)
        y = min(max(y_new, lo), hi)
        if t >= burn:
            out[t - burn, 0] = x
            out[t - burn, 1] = y
    # chaos drives the dynamics; noise is observational only
    out[:, 0] += params["obs_noise"] * streams[0].normal(size=T)
    out[:, 1] += params["obs_noise"] * streams[1].normal(size=T)
    gt = np.array([[0, 1], [0, 0]])
    return out, gt


def _gen_fanout3(T, seed, params):
    burn = params["burn_in"]
    total = burn + T
    streams = _node_streams(seed, 3)
    noise = np.column_stack(
        [streams[j].normal(0.0, params["noise"], size=total) for j in range(3)]
    )
    y = np.zeros(3)
    out = np.empty((T, 3))
    for t in range(total):
        y = np.array(
            [
                params["a_hub"] * y[0] + noise[t, 0],
                params["tanh_gain"] * np.tanh(y[0])
                + params["tanh_self"] * y[1]
                + noise[t, 1],
                params["square_gain"] * y[0] ** 2
                + params["square_self"] * y[2]
                + noise[t, 2],
            ]
        )
        _guard(y, t, params)
        if t >= burn:
            out[t - burn] = y
    gt = np.array([[0, 1, 1], [0, 0, 0], [0, 0, 0]])
    return out, gt


def _gen_fanin3(T, seed, params):
    burn = params["burn_in"]
    total = burn + T
    streams = _node_streams(seed, 3)
    noise = np.column_stack(
        [streams[j].normal(0.0, params["noise"], size=total) for j in range(3)]
    )
    y = np.zeros(3)
    out = np.empty((T, 3))
    for t in range(total):
        y = np.array(
            [
                params["a_root"] * y[0] + noise[t, 0],
                params["a_root"] * y[1] + noise[t, 1],
                params["tanh_gain"] * np.tanh(y[0])
                + params["square_gain"] * y[1] ** 2
                + params["sink_self"] * y[2]
                + noise[t, 2],
            ]
        )
        _guard(y, t, params)
        if t >= burn:
            out[t - burn] = y
    gt = np.array([[0, 0, 1], [0, 0, 1], [0, 0, 0]])
    return out, gt


def _coefficients_matrix(params):
    A = np.asarray(params["coefficients"], dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"coefficients must be square, got shape {A.shape}")
    return A


def _gt_from_coefficients(A):
    gt = (A != 0).astype(int)
    np.fill_diagonal(gt, 0)
    return gt.T  # A is effect-by-cause; ground truth is cause-by-effect


def _gen_linear5(T, seed, params):
    A = _coefficients_matrix(params)
    N = A.shape[0]
    burn = params["burn_in"]
    total = burn + T
    streams = _node_streams(seed, N)
    noise = np.column_stack(
        [streams[j].normal(0.0, params["noise"], size=total) for j in range(N)]
    )
    y = np.zeros(N)
    out = np.empty((T, N))
    for t in range(total):
        y = A @ y + noise[t]
        _guard(y, t, params)
        if t >= burn:
            out[t - burn] = y
    return out, _gt_from_coefficients(A)


def _gen_nonlinear5(T, seed, params):
    A = _coefficients_matrix(params)
    N = A.shape[0]
    burn = params["burn_in"]
    total = burn + T
    streams = _node_streams(seed, N)
    noise = np.column_stack(
        [streams[j].normal(0.0, params["noise"], size=total) for j in range(N)]
    )
    y = np.zeros(N)
    out = np.empty((T, N))
    for t in range(total):
        tanh_y = np.tanh(y)
        new = noise[t].copy()
        for j in range(N):
            for i in range(N):
                a = A[j, i]
                if a == 0.0:
                    continue
                if i == j:
                    new[j] += a * y[i]
                elif (j, i) in NONLINEAR5_SQUARED:
                    new[j] += a * y[i] ** 2
                else:
                    new[j] += a * tanh_y[i]
        y = new
        _guard(y, t, params)
        if t >= burn:
            out[t - burn] = y
    return out, _gt_from_coefficients(A)


_BUILDERS = {
    "logistic2": _gen_logistic2,
    "fanout3": _gen_fanout3,
    "fanin3": _gen_fanin3,
    "linear5": _gen_linear5,
    "nonlinear5": _gen_nonlinear5,
}


def generate(generator_id, T, seed, params=None) -> SyntheticDataset:
    """Simulate a benchmark system and return the panel plus its graph.

    Runs burn_in + T steps and keeps the last T. ``params`` may override
    any default of the chosen generator (unknown keys are rejected).
    Negative seeds are folded into the unsigned 64-bit range.
    """
    if generator_id not in _BUILDERS:
        raise ValueError(
            f"unknown generator {generator_id!r}; choose from {GENERATOR_IDS}"
        )
    T = int(T)
    if T < 50:
        raise ValueError(f"T must be >= 50, got {T}")
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    resolved = _resolve_params(generator_id, dict(params or {}))
    values, gt = _BUILDERS[generator_id](T, seed, resolved)
    names = tuple(f"y{j + 1}" for j in range(values.shape[1]))
    return SyntheticDataset(
        panel=TimeSeriesPanel(values=values, node_names=names),
        ground_truth=gt,
        generator_id=generator_id,
        seed=seed,
        params=resolved,
    )
