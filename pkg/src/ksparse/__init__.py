"""k-sparse: unsupervised clustering with embedded sparse feature selection.

Alternates k-means on a learned low-dimensional projection with an exact
l1-ball projected-gradient solve of the projection weights, so that
clustering and feature selection happen jointly under a hard sparsity
budget.

Submodules are imported lazily so the command-line entry point can
configure BLAS threading before any numerical library loads.
"""

import importlib

__version__ = "0.1.0"

_EXPORTS = {
    # core criterion
    "objective": "core",
    "gradient": "core",
    "centroids": "core",
    "spectral_norm": "core",
    "check_data_matrix": "core",
    "check_labels": "core",
    # projections
    "project_simplex": "projection",
    "project_l1_ball": "projection",
    # inner solvers
    "InnerSolveReport": "solver",
    "default_weight_init": "solver",
    "momentum_schedule": "solver",
    "solve_weights_ista": "solver",
    "solve_weights_fista": "solver",
    # k-means
    "KmeansOutcome": "kmeans",
    "kmeanspp_seed": "kmeans",
    "lloyd": "kmeans",
    "repair_empty_clusters": "kmeans",
    "best_of_replicates": "kmeans",
    # driver
    "SolverConfig": "driver",
    "ClusteringResult": "driver",
    "SweepRecord": "driver",
    "k_sparse": "driver",
    "selected_features": "driver",
    "sweep_eta": "driver",
    # metrics
    "contingency_table": "metrics",
    "accuracy": "metrics",
    "ari": "metrics",
    "nmi": "metrics",
    # data handling
    "Dataset": "dataio",
    "SyntheticSpec": "dataio",
    "ResultDocument": "dataio",
    "load_matrix_csv": "dataio",
    "load_labels": "dataio",
    "save_labels": "dataio",
    "write_matrix_csv": "dataio",
    "filter_low_expressed": "dataio",
    "cpm_normalize": "dataio",
    "scale_by_spectral_norm": "dataio",
    "generate_synthetic": "dataio",
    "write_result": "dataio",
    "read_result": "dataio",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name):
    submodule = _EXPORTS.get(name)
    if submodule is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    value = getattr(importlib.import_module(f".{submodule}", __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))
