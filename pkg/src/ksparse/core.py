"""Clustering criterion in the projected feature space.

The criterion is half the squared Frobenius norm of ``Y @ mu - X @ W``:
rows of ``X`` are samples, ``W`` is the ``d x dbar`` projection matrix,
``labels`` encode the one-hot assignment matrix ``Y`` (one cluster per
sample) and ``mu`` holds one centroid of the projected samples per row.
Labels are kept as an index vector; products with ``Y`` are realized as
row gathers (``mu[labels]``) and per-cluster reductions.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "check_data_matrix",
    "check_labels",
    "objective",
    "gradient",
    "centroids",
    "spectral_norm",
]


def check_data_matrix(X: np.ndarray) -> np.ndarray:
    """Validate a sample matrix: 2-D, finite, not identically zero, m >= 2.

    Returns the input as a float ndarray (copying only if needed).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"data matrix must be 2-D, got shape {X.shape}")
    m, d = X.shape
    if m < 2:
        raise ValueError(f"need at least 2 samples, got m={m}")
    if d < 1:
        raise ValueError("need at least 1 feature")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix contains NaN or Inf entries")
    if not np.any(X):
        raise ValueError("data matrix is identically zero")
    return X


def check_labels(labels: np.ndarray, m: int | None = None, k: int | None = None) -> np.ndarray:
    """Validate a cluster assignment vector.

    Every entry must lie in ``{0, ..., k-1}`` and, when ``k`` is given,
    every cluster must be occupied (no empty clusters).  Returns the
    labels as an int ndarray.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError(f"labels must be 1-D, got shape {labels.shape}")
    if not np.issubdtype(labels.dtype, np.integer):
        as_int = labels.astype(int)
        if labels.dtype.kind == "f" and not np.array_equal(as_int, labels):
            raise ValueError("labels must be integers")
        labels = as_int
    if m is not None and labels.shape[0] != m:
        raise ValueError(f"labels length {labels.shape[0]} does not match sample count m={m}")
    if labels.size and labels.min() < 0:
        raise ValueError(f"negative cluster index {labels.min()}")
    if k is not None:
        if labels.size and labels.max() >= k:
            raise ValueError(f"cluster index {labels.max()} out of range for k={k}")
        counts = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            raise ValueError(f"cluster {empty[0]} is empty")
    return labels.astype(int)


def _check_dims(X, W, labels, mu):
    m, d = X.shape
    if W.shape[0] != d:
        raise ValueError(
            f"feature axis mismatch: X has {d} columns but W has {W.shape[0]} rows"
        )
    if mu.shape[1] != W.shape[1]:
        raise ValueError(
            f"projected axis mismatch: W has {W.shape[1]} columns but mu has {mu.shape[1]}"
        )
    if labels.shape[0] != m:
        raise ValueError(
            f"sample axis mismatch: X has {m} rows but labels has length {labels.shape[0]}"
        )
    if labels.size and labels.max() >= mu.shape[0]:
        raise ValueError(
            f"cluster index {labels.max()} out of range: mu has {mu.shape[0]} rows"
        )


def objective(X: np.ndarray, W: np.ndarray, labels: np.ndarray, mu: np.ndarray) -> float:
    """Half the squared Frobenius norm of the assignment residual Y@mu - X@W."""
    X = np.asarray(X, float)
    W = np.asarray(W, float)
    mu = np.asarray(mu, float)
    labels = check_labels(labels)
    _check_dims(X, W, labels, mu)
    R = mu[labels] - X @ W
    return 0.5 * float(np.vdot(R, R))


def gradient(X: np.ndarray, W: np.ndarray, labels: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Gradient of :func:`objective` with respect to W: ``X.T @ (X@W - Y@mu)``."""
    X = np.asarray(X, float)
    W = np.asarray(W, float)
    mu = np.asarray(mu, float)
    labels = check_labels(labels)
    _check_dims(X, W, labels, mu)
    return X.T @ (X @ W - mu[labels])


def centroids(labels: np.ndarray, Z: np.ndarray, k: int | None = None) -> np.ndarray:
    """Per-cluster means of the rows of Z.

    Row ``j`` of the result is the arithmetic mean of the rows of ``Z``
    assigned to cluster ``j``.  ``k`` defaults to ``labels.max() + 1``;
    passing it explicitly lets trailing empty clusters be detected.
    Raises if any cluster in ``{0, ..., k-1}`` is empty.
    """
    Z = np.asarray(Z, float)
    if Z.ndim != 2:
        raise ValueError(f"Z must be 2-D, got shape {Z.shape}")
    labels = check_labels(labels, m=Z.shape[0])
    if k is None:
        k = int(labels.max()) + 1
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise ValueError(f"cluster {empty[0]} is empty; repair assignments first")
    # bincount with weights gives a deterministic, index-ordered reduction
    out = np.empty((k, Z.shape[1]))
    for j in range(Z.shape[1]):
        out[:, j] = np.bincount(labels, weights=Z[:, j], minlength=k)
    out /= counts[:, None]
    return out


def spectral_norm(
    X: np.ndarray,
    power_iters: int = 200,
    power_tol: float = 1e-8,
    seed: int = 0,
) -> float:
    """Largest singular value of X, estimated by power iteration on the Gram matrix.

    The start vector is a pseudo-random unit vector drawn from ``seed``, so
    the estimate is deterministic.  Iteration stops when successive
    estimates agree to ``power_tol`` relative, or after ``power_iters``
    steps, whichever comes first.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix contains NaN or Inf entries")
    if not np.any(X):
        raise ValueError("spectral norm of an all-zero matrix is undefined here")
    if power_iters < 1:
        raise ValueError("power_iters must be >= 1")
    if power_tol <= 0:
        raise ValueError("power_tol must be positive")

    rng = np.random.default_rng(seed)
    d = X.shape[1]
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)

    sigma = 0.0
    for _ in range(power_iters):
        u = X @ v
        new_sigma = float(np.linalg.norm(u))
        if new_sigma == 0.0:
            # start vector landed in the null space; redraw deterministically
            v = rng.standard_normal(d)
            v /= np.linalg.norm(v)
            continue
        w = X.T @ u
        v = w / np.linalg.norm(w)
        if abs(new_sigma - sigma) <= power_tol * new_sigma:
            return new_sigma
        sigma = new_sigma
    return sigma
