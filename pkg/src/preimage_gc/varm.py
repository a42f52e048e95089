"""Vector autoregression on (feature) coordinates, with optional ridge."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InsufficientSamplesError, RankError, ShapeError
from .data import lag_embed

DEFAULT_RIDGE = 1e-3


@dataclass(frozen=True)
class VarModelFit:
    """Interceptless VAR(L) fit.

    coefficients[ell - 1] is the D x D matrix A_ell in
    y_t = sum_ell A_ell y_{t-ell} + e_t, acting on column vectors.
    residuals are in-sample (targets minus one-step predictions) and
    residual_variance their per-column population variance.
    """

    coefficients: tuple
    lag: int
    ridge_lambda: float
    residuals: np.ndarray
    residual_variance: np.ndarray

    def __post_init__(self):
        coeffs = []
        for A in self.coefficients:
            A = np.array(A, dtype=float)
            A.setflags(write=False)
            coeffs.append(A)
        object.__setattr__(self, "coefficients", tuple(coeffs))
        for name in ("residuals", "residual_variance"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_dims(self):
        return self.coefficients[0].shape[0]

    def stacked(self) -> np.ndarray:
        """The (D*L) x D matrix B with predictions = design @ B."""
        return np.vstack([A.T for A in self.coefficients])


def fit_var(series, lag: int = 1, ridge_lambda: float = DEFAULT_RIDGE) -> VarModelFit:
    """Least-squares (ridge_lambda > 0: ridge) fit of an interceptless VAR.

    With ridge_lambda = 0 a rank-deficient design is refused outright;
    the RankError suggests the fix instead of silently picking one of the
    infinitely many minimizers.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 2:
        raise ShapeError(f"series must be 2-d, got ndim={series.ndim}")
    if ridge_lambda < 0:
        raise ValueError(f"ridge_lambda must be >= 0, got {ridge_lambda}")
    T, D = series.shape
    emb = lag_embed(series, lag)
    recommended = lag + D * lag + 1
    if T < recommended:
        warnings.warn(
            f"fitting a VAR({lag}) in {D} dims on {T} samples; "
            f"at least {recommended} are recommended",
            stacklevel=2,
        )
    Z, Y = emb.design, emb.targets
    if ridge_lambda == 0.0:
        rank = np.linalg.matrix_rank(Z)
        if rank < Z.shape[1]:
            raise RankError(
                f"design has rank {rank} < {Z.shape[1]}; "
                "use a positive ridge_lambda",
                achievable_rank=int(rank),
            )
        B, *_ = np.linalg.lstsq(Z, Y, rcond=None)
    else:
        G = Z.T @ Z + ridge_lambda * np.eye(Z.shape[1])
        B = scipy.linalg.solve(G, Z.T @ Y, assume_a="pos")
    residuals = Y - Z @ B
    coefficients = tuple(B[ell * D : (ell + 1) * D, :].T for ell in range(lag))
    return VarModelFit(
        coefficients=coefficients,
        lag=lag,
        ridge_lambda=float(ridge_lambda),
        residuals=residuals,
        residual_variance=residuals.var(axis=0),
    )


def predict(fit: VarModelFit, series) -> np.ndarray:
    """One-step predictions for rows lag..T-1 of ``series``."""
    series = np.asarray(series, dtype=float)
    if series.ndim != 2 or series.shape[1] != fit.n_dims:
        raise ShapeError(
            f"series must be 2-d with {fit.n_dims} columns, got shape {series.shape}"
        )
    emb = lag_embed(series, fit.lag)
    return emb.design @ fit.stacked()


def residual_variance_about(Y, Yhat) -> np.ndarray:
    """Per-column population variance of Y - Yhat about its mean."""
    Y = np.asarray(Y, dtype=float)
    Yhat = np.asarray(Yhat, dtype=float)
    if Y.shape != Yhat.shape:
        raise ShapeError(f"shape mismatch: {Y.shape} vs {Yhat.shape}")
    if Y.ndim != 2:
        raise ShapeError(f"expected 2-d arrays, got ndim={Y.ndim}")
    if Y.shape[0] < 2:
        raise InsufficientSamplesError(
            "variance needs at least 2 rows"
        )
    return (Y - Yhat).var(axis=0)
