"""Small input-validation helpers shared by the estimators."""

import numpy as np

from .errors import ShapeMismatch


def check_matrix(X, name="X", dtype=np.float64):
    """Coerce X to a finite 2-D float array."""
    X = np.asarray(X, dtype=dtype)
    if X.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {X.shape}")
    if X.size and not np.all(np.isfinite(X)):
        raise ShapeMismatch(f"{name} contains non-finite values")
    return X


def check_vector(x, dim=None, name="x", dtype=np.float64):
    """Coerce x to a finite 1-D float array, optionally of length dim."""
    x = np.asarray(x, dtype=dtype)
    if x.ndim != 1:
        raise ShapeMismatch(f"{name} must be 1-D, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise ShapeMismatch(f"{name} has length {x.shape[0]}, expected {dim}")
    if x.size and not np.all(np.isfinite(x)):
        raise ShapeMismatch(f"{name} contains non-finite values")
    return x


def check_fitted(estimator, attribute):
    """Raise if a fitted attribute is missing (fit was never called)."""
    if getattr(estimator, attribute, None) is None:
        raise RuntimeError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )
