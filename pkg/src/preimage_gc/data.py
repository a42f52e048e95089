"""Panel container, CSV ingestion, normalization, and lag embedding."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    CsvFormatError,
    CsvParseError,
    CsvSchemaError,
    DegenerateInputError,
    InsufficientSamplesError,
    PanelUnderflowError,
    ShapeError,
)


def _frozen_array(values, dtype=float):
    out = np.array(values, dtype=dtype, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TimeSeriesPanel:
    """A multivariate series: ``values`` is T x N, column j belongs to ``node_names[j]``.

    The array is stored as a read-only float64 copy, so a panel can be
    shared freely without defensive copies downstream.
    """

    values: np.ndarray
    node_names: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"panel values must be 2-d, got ndim={values.ndim}")
        T, N = values.shape
        if T < 2:
            raise ValueError(f"panel needs at least 2 rows, got {T}")
        if N < 2:
            raise ValueError(f"panel needs at least 2 nodes, got {N}")
        if not np.all(np.isfinite(values)):
            raise ValueError("panel values must be finite")
        names = tuple(str(n) for n in self.node_names)
        if len(names) != N:
            raise ValueError(
                f"got {len(names)} node names for {N} columns"
            )
        if any(not n for n in names):
            raise ValueError("node names must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("node names must be unique")
        object.__setattr__(self, "values", _frozen_array(values))
        object.__setattr__(self, "node_names", names)

    @property
    def n_samples(self):
        return self.values.shape[0]

    @property
    def n_nodes(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class LaggedDesign:
    """Lag-embedded regression problem: ``targets[t] ~ design[t]``.

    ``design`` rows hold the lag-1 block first, then lag-2, ..., lag-L,
    each block in original column order.
    """

    design: np.ndarray
    targets: np.ndarray
    lag: int

    def __post_init__(self):
        object.__setattr__(self, "design", _frozen_array(self.design))
        object.__setattr__(self, "targets", _frozen_array(self.targets))


def ingest_csv(source) -> TimeSeriesPanel:
    """Parse a header + float-rows CSV into a panel.

    ``source`` may be CSV text, a path (str paths are treated as text, so
    pass ``pathlib.Path`` for files), or an open file object. Every row
    must have exactly as many cells as the header, and every cell must be
    a finite float; violations name the offending row/column.
    """
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, os.PathLike):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    if text.startswith("﻿"):
        text = text[1:]
    lines = [line for line in text.splitlines() if line.strip() != ""]
    if len(lines) < 2:
        raise CsvFormatError("need a header line and at least one data row")
    header = [cell.strip() for cell in lines[0].split(",")]
    if any(not name for name in header):
        raise CsvSchemaError("header contains an empty column name")
    if len(set(header)) != len(header):
        dupes = sorted({n for n in header if header.count(n) > 1})
        raise CsvSchemaError(f"duplicate column names: {', '.join(dupes)}")
    n_cols = len(header)
    rows = np.empty((len(lines) - 1, n_cols))
    for r, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != n_cols:
            raise CsvFormatError(
                f"row {r} has {len(cells)} cells, expected {n_cols}"
            )
        for c, cell in enumerate(cells):
            try:
                value = float(cell)
            except ValueError:
                value = np.nan
            if not np.isfinite(value):
                raise CsvParseError(
                    f"row {r}, column {header[c]!r}: "
                    f"cannot parse {cell.strip()!r} as a finite number"
                )
            rows[r - 2, c] = value
    return TimeSeriesPanel(values=rows, node_names=tuple(header))


def panel_to_csv(panel: TimeSeriesPanel) -> str:
    """Serialize a panel so ``ingest_csv`` reproduces it bit-exactly."""
    lines = [",".join(panel.node_names)]
    for row in panel.values:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def normalize_columns(values, node_names=None) -> np.ndarray:
    """Center each column and scale to unit population variance.

    Raises DegenerateInputError on a zero-variance column, naming the node
    when names are given.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got ndim={values.ndim}")
    means = values.mean(axis=0)
    stds = values.std(axis=0)  # population convention, ddof=0
    flat = np.flatnonzero(stds == 0.0)
    if flat.size:
        j = int(flat[0])
        label = node_names[j] if node_names is not None else f"column {j}"
        raise DegenerateInputError(
            f"{label} has zero variance and cannot be normalized"
        )
    return (values - means) / stds


def normalize(panel: TimeSeriesPanel) -> TimeSeriesPanel:
    """Return a panel whose columns have mean 0 and population variance 1."""
    out = normalize_columns(panel.values, panel.node_names)
    return TimeSeriesPanel(values=out, node_names=panel.node_names)


def exclude_node(panel: TimeSeriesPanel, index: int) -> TimeSeriesPanel:
    """Drop one node's column, keeping the others in order.

    A 2-node panel cannot lose a node (the remainder would have no
    conditioning set), so that raises PanelUnderflowError.
    """
    N = panel.n_nodes
    if not 0 <= index < N:
        raise IndexError(f"node index {index} out of range for {N} nodes")
    if N == 2:
        raise PanelUnderflowError(
            "cannot exclude a node from a 2-node panel; "
            "the remainder would be univariate"
        )
    keep = [j for j in range(N) if j != index]
    return TimeSeriesPanel(
        values=panel.values[:, keep],
        node_names=tuple(panel.node_names[j] for j in keep),
    )


def lag_embed(values, lag: int) -> LaggedDesign:
    """Stack ``lag`` past rows next to each target row.

    For row t of ``targets`` (original time L+t), ``design[t]`` is the
    concatenation ``[y_{L+t-1}, y_{L+t-2}, ..., y_{L+t-lag}]``.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got ndim={values.ndim}")
    if lag < 1:
        raise ValueError(f"lag must be >= 1, got {lag}")
    T = values.shape[0]
    if T <= lag:
        raise InsufficientSamplesError(
            f"need more than lag={lag} rows to embed, got {T}"
        )
    blocks = [values[lag - ell : T - ell] for ell in range(1, lag + 1)]
    return LaggedDesign(
        design=np.hstack(blocks), targets=values[lag:], lag=lag
    )
