"""Linear regressors with a uniform fit/predict contract.

Ridge is solved in closed form on centered data; Lasso and Elastic-Net share
a cyclic coordinate-descent skeleton with soft-thresholding. Intercepts are
never penalized. All routines are deterministic: fixed iteration order, no
randomized starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, SingularSystemError

DEFAULT_MAX_ITER = 1000
DEFAULT_TOL = 1e-4


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    intercept: float
    converged: bool = True

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.weights.shape[0]:
            raise DimensionMismatchError(
                f"model has {self.weights.shape[0]} features, input has "
                f"{X.shape[1]}")
        return X @ self.weights + self.intercept


def _validate(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatchError("X must be 2-dimensional")
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite entries in training data")
    return X, y


def _center(X, y):
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    return X - x_mean, y - y_mean, x_mean, y_mean


def fit_ridge(X, y, lam: float = 1.0) -> LinearModel:
    """Minimize ||y - Xw - b||^2 + lam * ||w||^2, intercept unpenalized."""
    X, y = _validate(X, y)
    Xc, yc, x_mean, y_mean = _center(X, y)
    p = X.shape[1]
    gram = Xc.T @ Xc + lam * np.eye(p)
    rhs = Xc.T @ yc
    try:
        w = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        # lam = 0 with collinear columns: fall back to the pseudo-inverse
        w = np.linalg.pinv(gram) @ rhs
    return LinearModel(weights=w, intercept=float(y_mean - x_mean @ w))


def soft_threshold(z: float, threshold: float) -> float:
    if z > threshold:
        return z - threshold
    if z < -threshold:
        return z + threshold
    return 0.0


def _coordinate_descent(X, y, l1: float, l2: float, tol: float,
                        max_iter: int) -> LinearModel:
    """Cyclic coordinate descent on (1/2n)||y - Xw - b||^2 + l1||w||_1
    + (l2/2)||w||^2. Cyclic order breaks ties between equal minimizers."""
    X, y = _validate(X, y)
    n, p = X.shape
    Xc, yc, x_mean, y_mean = _center(X, y)
    col_sq = (Xc * Xc).sum(axis=0) / n
    w = np.zeros(p)
    resid = yc.copy()          # yc - Xc @ w
    converged = False
    for _ in range(max_iter):
        max_delta = 0.0
        for j in range(p):
            denom = col_sq[j] + l2
            if denom == 0.0:   # constant column vanished under centering
                continue
            old = w[j]
            rho = (Xc[:, j] @ resid) / n + col_sq[j] * old
            new = soft_threshold(rho, l1) / denom
            if new != old:
                resid += Xc[:, j] * (old - new)
                w[j] = new
                max_delta = max(max_delta, abs(new - old))
        if max_delta < tol:
            converged = True
            break
    return LinearModel(weights=w, intercept=float(y_mean - x_mean @ w),
                       converged=converged)


def fit_lasso(X, y, lam: float = 1.0, tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER) -> LinearModel:
    """Minimize (1/2n)||y - Xw - b||^2 + lam * ||w||_1."""
    return _coordinate_descent(X, y, l1=lam, l2=0.0, tol=tol,
                               max_iter=max_iter)


def fit_elastic_net(X, y, lam: float = 1.0, mix: float = 0.5,
                    tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> LinearModel:
    """Minimize (1/2n)||y - Xw - b||^2 + lam*mix*||w||_1
    + (lam*(1-mix)/2)*||w||^2."""
    if not 0.0 <= mix <= 1.0:
        raise ValueError(f"mix must be in [0, 1], got {mix}")
    return _coordinate_descent(X, y, l1=lam * mix, l2=lam * (1.0 - mix),
                               tol=tol, max_iter=max_iter)


def lasso_kkt_violation(X, y, model: LinearModel, lam: float,
                        mix: float = 1.0) -> float:
    """Largest per-coordinate subgradient-optimality violation (0 = optimal)."""
    X, y = _validate(X, y)
    n = X.shape[0]
    Xc, yc, _, _ = _center(X, y)
    resid = yc - Xc @ model.weights
    grad = -(Xc.T @ resid) / n + lam * (1.0 - mix) * model.weights
    l1 = lam * mix
    worst = 0.0
    for j, w in enumerate(model.weights):
        if w > 0:
            worst = max(worst, abs(grad[j] + l1))
        elif w < 0:
            worst = max(worst, abs(grad[j] - l1))
        else:
            worst = max(worst, max(0.0, abs(grad[j]) - l1))
    return worst


def standardize_fit(X_train: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Z-scoring parameters learned on training rows only; constant columns
    get unit scale so they pass through unchanged."""
    X_train = np.asarray(X_train, dtype=float)
    mean = X_train.mean(axis=0)
    scale = X_train.std(axis=0)
    scale[scale == 0.0] = 1.0
    return mean, scale


def standardize_apply(X, mean, scale) -> np.ndarray:
    return (np.asarray(X, dtype=float) - mean) / scale


# --- model registry ---------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    """One of the five candidate configurations, with its hyperparameters."""
    name: str
    fit: Callable
    params: dict = field(default_factory=dict)

    def fit_model(self, X, y):
        return self.fit(X, y, **self.params)

    def with_params(self, **overrides) -> "ModelSpec":
        return replace(self, params={**self.params, **overrides})


def default_model_specs(overrides: dict[str, dict] | None = None) -> list[ModelSpec]:
    """The five-model registry, in the fixed tie-break order."""
    from .svr import KernelSpec, fit_svr

    overrides = overrides or {}
    specs = [
        ModelSpec("lasso", fit_lasso, {"lam": 1.0}),
        ModelSpec("elastic_net", fit_elastic_net, {"lam": 1.0, "mix": 0.5}),
        ModelSpec("ridge", fit_ridge, {"lam": 1.0}),
        ModelSpec("svr_linear", fit_svr,
                  {"C": 1.0, "epsilon": 0.1, "kernel": KernelSpec("linear")}),
        ModelSpec("svr_rbf", fit_svr,
                  {"C": 1.0, "epsilon": 0.1, "kernel": KernelSpec("rbf")}),
    ]
    return [spec.with_params(**overrides.get(spec.name, {})) for spec in specs]
