"""Standardization and ridge regression with an unpenalized intercept.

The intercept is handled by centering: ``b0 = mean(y)`` and the weights
solve ``(Z'Z + lambda I) b = Z'(y - b0)`` through a symmetric
positive-definite (Cholesky) factorization; no matrix inverse is ever
formed.  A residual check guards against a factorization that silently
lost accuracy: if the normal equations are not satisfied to 1e-8 relative,
the fit raises instead of returning garbage.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    ColumnMismatch,
    DroppedColumnWarning,
    EmptyInput,
    InsufficientData,
    NonFiniteInput,
    SingularSystem,
)

__all__ = [
    "DEFAULT_LAMBDA",
    "DEFAULT_LAMBDA_GRID",
    "StandardizationParams",
    "RidgeModel",
    "standardize_fit",
    "standardize_apply",
    "identity_standardization",
    "ridge_fit",
    "ridge_predict",
    "fit_standardized",
    "select_lambda",
    "gram_matrix",
    "classify",
    "model_to_dict",
    "model_from_dict",
]

#: Ridge strength used when selection is not requested.
DEFAULT_LAMBDA: float = 1e-3

#: Ten logarithmically spaced candidates for validation-based selection.
DEFAULT_LAMBDA_GRID: tuple[float, ...] = tuple(
    float(x) for x in np.logspace(-6.0, 2.0, 10)
)

# A column counts as constant when its population standard deviation is
# zero to within this relative tolerance of the mean magnitude.
_ZERO_SCALE_RTOL = 1e-12


@dataclass(frozen=True)
class StandardizationParams:
    """Per-column means and scales for the columns that were kept."""

    means: np.ndarray
    scales: np.ndarray
    kept: tuple[int, ...]
    dropped: tuple[int, ...] = ()

    @property
    def n_input_columns(self) -> int:
        return len(self.kept) + len(self.dropped)


def _check_matrix(X: np.ndarray, name: str = "X") -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise NonFiniteInput(f"{name} contains non-finite values")
    return X


def standardize_fit(X: np.ndarray) -> tuple[np.ndarray, StandardizationParams]:
    """Center and scale columns to zero mean and unit population variance.

    Columns whose standard deviation is zero (to 1e-12 relative of the
    mean magnitude) carry no information at this scale; they are dropped
    with a :class:`~pifmap.errors.DroppedColumnWarning` and recorded in
    ``params.dropped`` so later matrices can be sliced consistently.
    """
    X = _check_matrix(X)
    n = X.shape[0]
    if n < 2:
        raise InsufficientData(f"standardization needs at least 2 rows, got {n}")
    means = X.mean(axis=0)
    scales = X.std(axis=0)  # population (1/n) convention
    constant = scales <= _ZERO_SCALE_RTOL * np.abs(means)
    kept = tuple(int(j) for j in np.flatnonzero(~constant))
    dropped = tuple(int(j) for j in np.flatnonzero(constant))
    if dropped:
        warnings.warn(
            f"dropping constant columns {list(dropped)} (zero variance)",
            DroppedColumnWarning,
            stacklevel=2,
        )
    params = StandardizationParams(
        means=means[list(kept)],
        scales=scales[list(kept)],
        kept=kept,
        dropped=dropped,
    )
    Z = (X[:, list(kept)] - params.means) / params.scales
    return Z, params


def standardize_apply(X: np.ndarray, params: StandardizationParams) -> np.ndarray:
    """Apply previously fitted means/scales (e.g. to a test split)."""
    X = _check_matrix(X)
    if X.shape[1] != params.n_input_columns:
        raise ColumnMismatch(
            f"matrix has {X.shape[1]} columns, parameters expect "
            f"{params.n_input_columns}"
        )
    return (X[:, list(params.kept)] - params.means) / params.scales


def identity_standardization(p: int) -> StandardizationParams:
    """Parameters that leave a ``p``-column matrix unchanged."""
    return StandardizationParams(
        means=np.zeros(p), scales=np.ones(p), kept=tuple(range(p))
    )


@dataclass(frozen=True)
class RidgeModel:
    """Fitted ridge weights plus everything needed to replay the pipeline."""

    lam: float
    weights: np.ndarray
    intercept: float
    standardization: StandardizationParams
    feature_names: tuple[str, ...]
    threshold: float | None = None

    def __post_init__(self) -> None:
        if len(self.feature_names) != len(self.weights):
            raise ColumnMismatch(
                f"{len(self.feature_names)} names for {len(self.weights)} weights"
            )


def ridge_fit(
    Z: np.ndarray,
    y: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
    *,
    feature_names: Sequence[str] | None = None,
    standardization: StandardizationParams | None = None,
) -> RidgeModel:
    """Solve ``(Z'Z + lam*I) b = Z'(y - mean(y))`` by Cholesky.

    ``lam`` may be zero, in which case the design must have full column
    rank; a rank-deficient or numerically unreliable system raises
    :class:`~pifmap.errors.SingularSystem`.
    """
    Z = _check_matrix(Z, "Z")
    y = np.asarray(y, dtype=float)
    if y.shape != (Z.shape[0],):
        raise ValueError(f"y shape {y.shape} does not match {Z.shape[0]} rows")
    if not np.isfinite(y).all():
        raise NonFiniteInput("y contains non-finite values")
    if Z.shape[0] == 0:
        raise EmptyInput("cannot fit on zero rows")
    if lam < 0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    n, p = Z.shape
    intercept = float(np.mean(y))
    if p == 0:
        weights = np.zeros(0)
    else:
        gram = Z.T @ Z + lam * np.eye(p)
        rhs = Z.T @ (y - intercept)
        try:
            factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
            weights = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
        except scipy.linalg.LinAlgError as exc:
            raise SingularSystem(f"normal equations are singular: {exc}") from exc
        if not np.isfinite(weights).all():
            raise SingularSystem("solver produced non-finite weights")
        residual = gram @ weights - rhs
        limit = 1e-8 * max(float(np.linalg.norm(rhs)), np.finfo(float).tiny)
        if float(np.linalg.norm(residual)) > limit:
            raise SingularSystem(
                "normal-equation residual exceeds 1e-8 relative; the system "
                "is too ill-conditioned to trust"
            )
    names = (
        tuple(feature_names)
        if feature_names is not None
        else tuple(f"z{j}" for j in range(p))
    )
    params = standardization if standardization is not None else identity_standardization(p)
    return RidgeModel(
        lam=float(lam),
        weights=weights,
        intercept=intercept,
        standardization=params,
        feature_names=names,
    )


def ridge_predict(model: RidgeModel, Z: np.ndarray) -> np.ndarray:
    Z = _check_matrix(Z, "Z")
    if Z.shape[1] != len(model.weights):
        raise ColumnMismatch(
            f"matrix has {Z.shape[1]} columns, model has {len(model.weights)} weights"
        )
    return Z @ model.weights + model.intercept


def fit_standardized(
    X: np.ndarray,
    y: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
    *,
    feature_names: Sequence[str] | None = None,
) -> tuple[RidgeModel, np.ndarray]:
    """Standardize ``X`` and fit in one step; the model keeps the params.

    Returns the model and the standardized design so callers can reuse it.
    Column names follow the kept columns when any were dropped.
    """
    Z, params = standardize_fit(X)
    if feature_names is not None:
        if len(feature_names) != params.n_input_columns:
            raise ColumnMismatch(
                f"{len(feature_names)} names for {params.n_input_columns} columns"
            )
        names = tuple(feature_names[j] for j in params.kept)
    else:
        names = tuple(f"z{j}" for j in params.kept)
    model = ridge_fit(
        Z, y, lam, feature_names=names, standardization=params
    )
    return model, Z


def select_lambda(
    Z: np.ndarray,
    y: np.ndarray,
    grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    val_fraction: float = 0.3,
) -> float:
    """Pick the ridge strength by a single chronological tail split.

    The last ``ceil(n * val_fraction)`` rows are the validation set; the
    winner minimizes validation MSE with ties resolved toward the larger
    (more regularized) candidate.
    """
    Z = _check_matrix(Z, "Z")
    y = np.asarray(y, dtype=float)
    if not 0.0 < val_fraction < 1.0:
        raise ValueError(f"val_fraction must be in (0, 1), got {val_fraction}")
    if not grid:
        raise ValueError("lambda grid is empty")
    n = Z.shape[0]
    n_val = int(np.ceil(n * val_fraction))
    n_train = n - n_val
    if n_train < 2 or n_val < 1:
        raise InsufficientData(
            f"cannot split {n} rows into a usable train/validation pair"
        )
    Z_train, Z_val = Z[:n_train], Z[n_train:]
    y_train, y_val = y[:n_train], y[n_train:]
    best_lam = None
    best_mse = None
    for lam in grid:
        model = ridge_fit(Z_train, y_train, float(lam))
        errors = ridge_predict(model, Z_val) - y_val
        mse = float(np.mean(errors ** 2))
        if best_mse is None or mse < best_mse or (mse == best_mse and lam > best_lam):
            best_mse, best_lam = mse, float(lam)
    return best_lam


def gram_matrix(Phi: np.ndarray) -> np.ndarray:
    """Inner-product (Gram) matrix ``Phi @ Phi.T``, exactly symmetric.

    The strict upper triangle is computed once and mirrored, so
    ``K == K.T`` holds bitwise.
    """
    Phi = _check_matrix(Phi, "Phi")
    K = Phi @ Phi.T
    i_lower = np.tril_indices(K.shape[0], k=-1)
    K[i_lower] = K.T[i_lower]
    return K


def classify(scores: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Map regression scores to {0, 1}: label 1 iff score >= threshold."""
    scores = np.asarray(scores, dtype=float)
    if not np.isfinite(scores).all():
        raise NonFiniteInput("scores contain non-finite values")
    return (scores >= threshold).astype(int)


def model_to_dict(model: RidgeModel) -> dict:
    document = {
        "lambda": model.lam,
        "weights": [float(w) for w in model.weights],
        "intercept": model.intercept,
        "means": [float(v) for v in model.standardization.means],
        "scales": [float(v) for v in model.standardization.scales],
        "kept_columns": list(model.standardization.kept),
        "dropped_columns": list(model.standardization.dropped),
        "feature_names": list(model.feature_names),
    }
    if model.threshold is not None:
        document["threshold"] = model.threshold
    return document


def model_from_dict(document: dict) -> RidgeModel:
    params = StandardizationParams(
        means=np.asarray(document["means"], dtype=float),
        scales=np.asarray(document["scales"], dtype=float),
        kept=tuple(int(j) for j in document["kept_columns"]),
        dropped=tuple(int(j) for j in document.get("dropped_columns", ())),
    )
    return RidgeModel(
        lam=float(document["lambda"]),
        weights=np.asarray(document["weights"], dtype=float),
        intercept=float(document["intercept"]),
        standardization=params,
        feature_names=tuple(document["feature_names"]),
        threshold=document.get("threshold"),
    )
