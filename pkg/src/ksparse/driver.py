"""Outer alternating minimization and the l1-budget sweep.

Each outer loop solves the weight subproblem for the current labels
(accelerated projected gradient), then re-clusters the projected samples.
The re-clustering step keeps the best of three candidates: a fresh
best-of-replicates k-means++ run, a Lloyd run warm-started from the
previous labels, and the previous labels themselves.  Together with a
matching guard on the weight step, this makes the reported Frobenius trace
non-increasing loop over loop.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

import numpy as np

from . import metrics as _metrics
from .core import centroids, check_data_matrix, check_labels, spectral_norm
from .kmeans import best_of_replicates, lloyd
from .solver import default_weight_init, solve_weights_fista, sparse_aware_product

__all__ = [
    "SolverConfig",
    "ClusteringResult",
    "SweepRecord",
    "k_sparse",
    "selected_features",
    "sweep_eta",
]

# spacing between per-loop replicate seed blocks; prime and far larger than
# any sensible replicate count, so blocks never collide
_LOOP_SEED_STRIDE = 100003


@dataclass
class SolverConfig:
    """Tuning knobs for :func:`k_sparse`.

    ``dbar`` is the projected-space dimensionality and defaults to ``k + 4``;
    ``selection_tol`` defaults to ``1e-10 * eta``.  ``gamma`` is the constant
    gradient step, valid up to ``1/sigma_max(X)^2`` for the accelerated inner
    solver (equal to 1 after spectral-norm normalization).
    """

    gamma: float = 1.0
    inner_iters: int = 300
    outer_loops: int = 10
    dbar: int | None = None
    replicates: int = 40
    seed: int = 0
    selection_tol: float | None = None
    power_iters: int = 200
    power_tol: float = 1e-8
    normalize: bool = True
    early_exit: bool = False

    def validate(self) -> None:
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.inner_iters < 0 or self.outer_loops < 0:
            raise ValueError("iteration counts must be nonnegative")
        if self.dbar is not None and self.dbar < 1:
            raise ValueError(f"dbar must be >= 1, got {self.dbar}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.selection_tol is not None and self.selection_tol < 0:
            raise ValueError("selection_tol must be nonnegative")
        if self.power_iters < 1 or self.power_tol <= 0:
            raise ValueError("invalid power iteration parameters")


@dataclass
class ClusteringResult:
    """Labels, weights, and bookkeeping from one :func:`k_sparse` run.

    ``objective_trace`` holds the unsquared Frobenius norm of the residual,
    one entry at initialization plus one per completed outer loop; it is
    non-increasing.
    """

    labels: np.ndarray
    k: int
    weights: np.ndarray
    eta: float
    selected_features: np.ndarray
    objective_trace: np.ndarray
    metrics: dict | None = None


@dataclass
class SweepRecord:
    """One row of an l1-budget sweep."""

    eta: float
    selected_count: int
    frobenius_objective: float
    accuracy: float | None = None
    ari: float | None = None
    nmi: float | None = None


def selected_features(W: np.ndarray, tol: float) -> np.ndarray:
    """Indices of features with row norm above tol, ascending."""
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    W = np.asarray(W, dtype=float)
    return np.flatnonzero(np.linalg.norm(W, axis=1) > tol)


def _compute_metrics(labels_true, labels) -> dict:
    return {
        "accuracy": _metrics.accuracy(labels_true, labels),
        "ari": _metrics.ari(labels_true, labels),
        "nmi": _metrics.nmi(labels_true, labels),
    }


def _top_variance_columns(X: np.ndarray, dbar: int) -> np.ndarray:
    var = X.var(axis=0)
    order = np.argsort(-var, kind="stable")
    return order[: min(dbar, X.shape[1])]


def k_sparse(
    X: np.ndarray,
    k: int,
    eta: float,
    cfg: SolverConfig | None = None,
    labels_true: np.ndarray | None = None,
    sigma_max: float | None = None,
) -> ClusteringResult:
    """Cluster X into k groups while selecting a sparse feature subset.

    Expects X spectral-norm-normalized, or ``cfg.normalize`` (the default)
    to request normalization; ``sigma_max`` can pass a precomputed spectral
    norm to skip the estimation.  When ``labels_true`` is given the result
    carries accuracy/ARI/NMI against it.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    cfg.validate()
    X = check_data_matrix(X)
    m, d = X.shape
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if m < k:
        raise ValueError(f"cannot form {k} clusters from {m} samples")
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if cfg.normalize and cfg.gamma > 1.0 + 1e-9:
        raise ValueError(
            f"gamma={cfg.gamma} exceeds the accelerated step bound 1 on "
            "spectral-norm-normalized data"
        )
    if labels_true is not None:
        labels_true = check_labels(labels_true, m=m)

    if sigma_max is None:
        sigma_max = spectral_norm(
            X, power_iters=cfg.power_iters, power_tol=cfg.power_tol, seed=cfg.seed
        )
    if cfg.normalize:
        X = X / sigma_max
        solver_sigma = 1.0
    else:
        solver_sigma = sigma_max

    dbar = cfg.dbar if cfg.dbar is not None else k + 4
    tol = cfg.selection_tol if cfg.selection_tol is not None else 1e-10 * eta

    # initial labels and centroids: replicated k-means++ on the
    # highest-variance columns.  The centroids anchor the first weight solve
    # at data scale; deriving mu0 from X @ W0 instead would make the whole
    # run positively homogeneous in eta, and the budget could never steer
    # the selected-feature count.
    init_cols = _top_variance_columns(X, dbar)
    Z0 = X[:, init_cols]
    if Z0.shape[1] < dbar:
        Z0 = np.hstack([Z0, np.zeros((m, dbar - Z0.shape[1]))])
    init = best_of_replicates(Z0, k, cfg.replicates, cfg.seed)
    labels = init.labels
    mu = init.centers

    W = default_weight_init(d, dbar, eta)
    Z = sparse_aware_product(X, W)
    res0 = mu[labels] - Z
    trace = [np.sqrt(float(np.vdot(res0, res0)))]

    prev_selected = None
    stable_loops = 0
    for loop in range(cfg.outer_loops):
        report = solve_weights_fista(
            X, labels, mu, W, cfg.inner_iters, cfg.gamma, eta, sigma_max=solver_sigma
        )
        # the accelerated solver is not monotone; never accept a worse endpoint
        if report.objective_trace[-1] <= report.objective_trace[0]:
            W = report.final_weights
        Z = sparse_aware_product(X, W)

        fresh = best_of_replicates(
            Z, k, cfg.replicates, cfg.seed + (loop + 1) * _LOOP_SEED_STRIDE
        )
        prev_mu = centroids(labels, Z, k)
        warm = lloyd(Z, prev_mu)
        prev_res = Z - prev_mu[labels]
        prev_wcss = 0.5 * float(np.vdot(prev_res, prev_res))

        candidates = (
            (warm.wcss, warm.labels, warm.centers),
            (fresh.wcss, fresh.labels, fresh.centers),
            (prev_wcss, labels, prev_mu),
        )
        wcss, labels, mu = min(candidates, key=lambda c: c[0])
        trace.append(np.sqrt(2.0 * wcss))

        if cfg.early_exit:
            current = frozenset(selected_features(W, tol).tolist())
            stable_loops = stable_loops + 1 if current == prev_selected else 0
            prev_selected = current
            if stable_loops >= 2:
                break

    selected = selected_features(W, tol)
    result_metrics = (
        _compute_metrics(labels_true, labels) if labels_true is not None else None
    )
    return ClusteringResult(
        labels=labels,
        k=k,
        weights=W,
        eta=float(eta),
        selected_features=selected,
        objective_trace=np.asarray(trace),
        metrics=result_metrics,
    )


_SWEEP_STATE: dict = {}


def _sweep_init(X, k, cfg, labels_true, sigma_max):
    _SWEEP_STATE["args"] = (X, k, cfg, labels_true, sigma_max)


def _sweep_one(eta: float) -> SweepRecord:
    X, k, cfg, labels_true, sigma_max = _SWEEP_STATE["args"]
    res = k_sparse(X, k, eta, cfg, labels_true=labels_true, sigma_max=sigma_max)
    rec = SweepRecord(
        eta=float(eta),
        selected_count=int(res.selected_features.size),
        frobenius_objective=float(res.objective_trace[-1]),
    )
    if res.metrics is not None:
        rec.accuracy = res.metrics["accuracy"]
        rec.ari = res.metrics["ari"]
        rec.nmi = res.metrics["nmi"]
    return rec


def sweep_eta(
    X: np.ndarray,
    k: int,
    etas,
    labels_true: np.ndarray | None = None,
    cfg: SolverConfig | None = None,
    n_jobs: int = 1,
) -> list[SweepRecord]:
    """One independent :func:`k_sparse` run per l1 budget, same seed each time.

    Records are returned in the order of ``etas``.  The spectral norm is
    estimated once and shared.  ``n_jobs > 1`` runs budgets in parallel
    worker processes; results do not depend on the worker count.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    cfg.validate()
    etas = [float(e) for e in np.atleast_1d(np.asarray(etas, dtype=float))]
    if not etas:
        raise ValueError("etas must be nonempty")
    if any(e <= 0 for e in etas):
        raise ValueError("all eta values must be positive")
    X = check_data_matrix(X)
    sigma = spectral_norm(
        X, power_iters=cfg.power_iters, power_tol=cfg.power_tol, seed=cfg.seed
    )

    _sweep_init(X, k, cfg, labels_true, sigma)
    if n_jobs > 1 and len(etas) > 1:
        try:
            ctx = multiprocessing.get_context("fork")
        except ValueError:
            ctx = None
        if ctx is not None:
            with ctx.Pool(
                min(n_jobs, len(etas)),
                initializer=_sweep_init,
                initargs=(X, k, cfg, labels_true, sigma),
            ) as pool:
                return pool.map(_sweep_one, etas)
    return [_sweep_one(eta) for eta in etas]
