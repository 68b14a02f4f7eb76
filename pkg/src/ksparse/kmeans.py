"""K-means in the projected space: D^2-weighted seeding, Lloyd iterations,
empty-cluster repair, and best-of-replicates selection.

Determinism rules used throughout: assignment ties break toward the lower
cluster index, replicate ties toward the lower replicate index, and every
random draw comes from a generator seeded per replicate, so any replicate
is reproducible in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import centroids, check_labels

__all__ = [
    "KmeansOutcome",
    "kmeanspp_seed",
    "lloyd",
    "repair_empty_clusters",
    "best_of_replicates",
]


@dataclass
class KmeansOutcome:
    """Converged clustering: labels, centers (per-cluster means), half-SSQ, iterations."""

    labels: np.ndarray
    centers: np.ndarray
    wcss: float
    iterations: int


def _squared_distances(Z: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # broadcast rather than the |z|^2 - 2 z.c expansion: exact ties stay exact,
    # and no BLAS reduction order is involved
    diff = Z[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _assign(Z: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return np.argmin(_squared_distances(Z, centers), axis=1)


def _wcss(Z: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> float:
    R = Z - centers[labels]
    return 0.5 * float(np.vdot(R, R))


def kmeanspp_seed(Z: np.ndarray, k: int, rng_seed: int) -> np.ndarray:
    """k-means++ seeding: first center uniform, then D^2-weighted draws.

    Each center is a row of ``Z``.  Raises if ``Z`` has fewer than ``k``
    distinct rows (the weighting would run out of mass).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2:
        raise ValueError(f"Z must be 2-D, got shape {Z.shape}")
    m = Z.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if m < k:
        raise ValueError(f"cannot seed {k} clusters from {m} samples")
    n_distinct = np.unique(Z, axis=0).shape[0]
    if n_distinct < k:
        raise ValueError(f"need at least {k} distinct rows to seed, found {n_distinct}")

    rng = np.random.default_rng(rng_seed)
    centers = np.empty((k, Z.shape[1]))
    centers[0] = Z[rng.integers(m)]
    d2 = np.sum((Z - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        centers[j] = Z[rng.choice(m, p=d2 / d2.sum())]
        d2 = np.minimum(d2, np.sum((Z - centers[j]) ** 2, axis=1))
    return centers


def repair_empty_clusters(
    labels: np.ndarray, Z: np.ndarray, centers: np.ndarray
) -> np.ndarray:
    """Fill empty clusters by moving in the sample farthest from its own center.

    Empty clusters are treated in index order; each receives the sample with
    the largest assignment distance among clusters that can spare one
    (size >= 2).  Returns a repaired copy; input labels are not modified.
    """
    Z = np.asarray(Z, dtype=float)
    centers = np.asarray(centers, dtype=float)
    k = centers.shape[0]
    m = Z.shape[0]
    if m < k:
        raise ValueError(f"cannot fill {k} clusters with {m} samples")
    labels = check_labels(labels, m=m).copy()
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return labels
    dist = np.sum((Z - centers[labels]) ** 2, axis=1)
    for j in empty:
        donors = np.flatnonzero(counts[labels] >= 2)
        # m >= k guarantees a donor: if every cluster had <= 1 sample there
        # could be no empty cluster
        i = donors[np.argmax(dist[donors])]
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        dist[i] = np.sum((Z[i] - centers[j]) ** 2)
    return labels


def lloyd(Z: np.ndarray, init_centers: np.ndarray, max_iter: int = 100) -> KmeansOutcome:
    """Lloyd iterations from the given centers until assignments stabilize.

    Alternates nearest-center assignment (ties to the lower index) with
    center recomputation; empty clusters are repaired before centers are
    recomputed.  The returned centers are the exact per-cluster means of
    the returned labels, and ``wcss`` is half the squared distance sum.
    """
    Z = np.asarray(Z, dtype=float)
    centers = np.array(init_centers, dtype=float, copy=True)
    if Z.ndim != 2 or centers.ndim != 2 or Z.shape[1] != centers.shape[1]:
        raise ValueError(
            f"incompatible shapes: Z {Z.shape} vs init_centers {centers.shape}"
        )
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    k = centers.shape[0]
    if Z.shape[0] < k:
        raise ValueError(f"cannot form {k} clusters from {Z.shape[0]} samples")

    labels = repair_empty_clusters(_assign(Z, centers), Z, centers)
    iterations = 0
    for it in range(1, max_iter + 1):
        centers = centroids(labels, Z, k)
        new_labels = repair_empty_clusters(_assign(Z, centers), Z, centers)
        iterations = it
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    centers = centroids(labels, Z, k)
    return KmeansOutcome(labels, centers, _wcss(Z, labels, centers), iterations)


def best_of_replicates(Z: np.ndarray, k: int, replicates: int, seed: int) -> KmeansOutcome:
    """Best (lowest-wcss) of ``replicates`` seeded k-means++ runs.

    Replicate ``r`` uses seed ``seed + r``; ties keep the lowest replicate
    index.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    best = None
    for r in range(replicates):
        outcome = lloyd(Z, kmeanspp_seed(Z, k, seed + r))
        if best is None or outcome.wcss < best.wcss:
            best = outcome
    return best
