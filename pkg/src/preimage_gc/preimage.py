"""Learned linear pre-image map from feature coordinates back to inputs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import RankError, ShapeError

DEFAULT_RIDGE = 1e-3


@dataclass(frozen=True)
class PreimageMap:
    """gamma (D x P) maps a feature coordinate row h to the input row gamma @ h.

    training_fit_error is the mean squared reconstruction error over the
    training pairs the map was learned from.
    """

    gamma: np.ndarray
    ridge_lambda: float
    training_fit_error: float

    def __post_init__(self):
        arr = np.array(self.gamma, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "gamma", arr)


def learn_preimage(Y, H, ridge_lambda: float = DEFAULT_RIDGE) -> PreimageMap:
    """Ridge-regress each input dimension on the feature coordinates.

    Y is T x D (inputs), H is T x P (their feature coordinates), rows
    paired. Minimizes ||Y - H gamma^T||^2 + ridge_lambda ||gamma||^2.
    """
    Y = np.asarray(Y, dtype=float)
    H = np.asarray(H, dtype=float)
    if Y.ndim != 2 or H.ndim != 2:
        raise ShapeError("Y and H must be 2-d")
    if Y.shape[0] != H.shape[0]:
        raise ShapeError(
            f"row mismatch: Y has {Y.shape[0]} rows, H has {H.shape[0]}"
        )
    if ridge_lambda < 0:
        raise ValueError(f"ridge_lambda must be >= 0, got {ridge_lambda}")
    T, P = H.shape
    if T < P:
        warnings.warn(
            f"learning a pre-image from {T} samples in {P} feature dims; "
            "the fit is underdetermined",
            stacklevel=2,
        )
    if ridge_lambda == 0.0:
        rank = np.linalg.matrix_rank(H)
        if rank < P:
            raise RankError(
                f"feature matrix has rank {rank} < {P}; "
                "use a positive ridge_lambda",
                achievable_rank=int(rank),
            )
        Gt, *_ = np.linalg.lstsq(H, Y, rcond=None)
    else:
        G = H.T @ H + ridge_lambda * np.eye(P)
        Gt = scipy.linalg.solve(G, H.T @ Y, assume_a="pos")
    fit_error = float(np.mean((Y - H @ Gt) ** 2))
    return PreimageMap(
        gamma=Gt.T, ridge_lambda=float(ridge_lambda), training_fit_error=fit_error
    )


def reconstruct(pmap: PreimageMap, H) -> np.ndarray:
    """Map feature-coordinate rows back to input space."""
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[1] != pmap.gamma.shape[1]:
        raise ShapeError(
            f"H must be 2-d with {pmap.gamma.shape[1]} columns, got shape {H.shape}"
        )
    return H @ pmap.gamma.T
