"""Command-line surface: cluster, sweep, synth, and eval subcommands.

Numerical libraries are imported lazily so that BLAS threading can be
pinned before they load: all in-process linear algebra runs single-threaded,
which makes outputs byte-identical for any ``--threads`` value.  The
``--threads`` flag instead parallelizes the sweep across worker processes.

Summary lines are stable and tab-separated:

  cluster:  eta  selected  frobenius  [accuracy  ari  nmi]
  sweep:    a table with header eta/selected/frobenius/accuracy/ari/nmi
  eval:     accuracy ari nmi  (space-separated, 6 decimals)

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

_NORMALIZE_STAGES = ("cpm", "spectral", "none")


def _pin_blas_threads() -> None:
    # one BLAS thread per process keeps every floating-point reduction order
    # fixed; already-set variables are respected
    if "numpy" in sys.modules:
        return
    for var in (
        "OPENBLAS_NUM_THREADS",
        "OMP_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ.setdefault(var, "1")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker processes for sweeps; results do not depend on it "
                        "(default: machine parallelism, %(default)s here)")
    p.add_argument("--time", action="store_true",
                   help="print wall-clock time per phase to stderr")


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="delimited matrix, rows are samples")
    p.add_argument("--labels", default=None, help="true labels file, one integer per line")
    p.add_argument("--header", action="store_true", help="input has a feature-name header row")
    p.add_argument("--rownames", action="store_true", help="input has a sample-id first column")
    p.add_argument("--delimiter", choices=("comma", "tab"), default=None,
                   help="field delimiter (default: auto-detect)")
    p.add_argument("--normalize", default="spectral",
                   help="comma-separated stages among cpm/spectral, or none "
                        "(default: %(default)s)")
    p.add_argument("--filter-min-count", type=float, default=None,
                   help="with --filter-min-cells, drop features below this count")
    p.add_argument("--filter-min-cells", type=int, default=None,
                   help="minimum samples reaching --filter-min-count")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True, help="number of clusters (>= 2)")
    p.add_argument("--dbar", type=int, default=None,
                   help="projected-space dimension (default: k+4)")
    p.add_argument("--gamma", type=float, default=1.0,
                   help="gradient step size (default: %(default)s)")
    p.add_argument("--loops", type=int, default=10,
                   help="outer alternating loops (default: %(default)s)")
    p.add_argument("--inner-iters", type=int, default=300,
                   help="projected-gradient iterations per loop (default: %(default)s)")
    p.add_argument("--replicates", type=int, default=40,
                   help="k-means++ replicates per clustering step (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="run seed (default: %(default)s)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksparse",
        description="Clustering with embedded sparse feature selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster one dataset at a fixed l1 budget")
    _add_input_flags(p)
    _add_solver_flags(p)
    p.add_argument("--eta", type=float, required=True, help="l1 budget (> 0)")
    p.add_argument("--out", required=True, help="result document path (JSON)")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("sweep", help="run a sweep over l1 budgets, emit a table")
    _add_input_flags(p)
    _add_solver_flags(p)
    p.add_argument("--eta-list", default=None, help="comma-separated eta values")
    p.add_argument("--eta-range", default=None,
                   help="START:STOP:STEP inclusive range of eta values")
    p.add_argument("--out", default=None, help="table path (default: stdout)")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="generate a synthetic Gaussian-cluster dataset")
    p.add_argument("--m", type=int, default=600, help="samples (default: %(default)s)")
    p.add_argument("--d", type=int, default=5000, help="features (default: %(default)s)")
    p.add_argument("--k", type=int, default=4, help="clusters (default: %(default)s)")
    p.add_argument("--informative", type=int, default=100,
                   help="features carrying cluster structure (default: %(default)s)")
    p.add_argument("--shift", type=float, default=2.0,
                   help="between-cluster mean separation (default: %(default)s)")
    p.add_argument("--noise-sd", type=float, default=1.0,
                   help="noise standard deviation (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default: %(default)s)")
    p.add_argument("--out", required=True, help="output path prefix")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("eval", help="score predicted labels against true labels")
    p.add_argument("--pred", required=True, help="predicted labels file")
    p.add_argument("--truth", required=True, help="true labels file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_eval)

    return parser


class _Phases:
    """Optional per-phase wall-clock reporting to stderr."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self._t0 = time.perf_counter()

    def mark(self, name: str) -> None:
        now = time.perf_counter()
        if self.enabled:
            print(f"[time] {name}: {now - self._t0:.3f}s", file=sys.stderr)
        self._t0 = now


def _parse_normalize(parser, text: str) -> list[str]:
    stages = [s.strip() for s in text.split(",") if s.strip()]
    for s in stages:
        if s not in _NORMALIZE_STAGES:
            parser.error(f"--normalize: unknown stage {s!r} (choose from cpm, spectral, none)")
    if "none" in stages and len(stages) > 1:
        parser.error("--normalize: 'none' cannot be combined with other stages")
    return [] if stages == ["none"] else stages


def _validate_cluster_args(parser, args) -> None:
    if args.k < 2:
        parser.error(f"--k must be >= 2, got {args.k}")
    if getattr(args, "eta", 1.0) <= 0:
        parser.error(f"--eta must be positive, got {args.eta}")
    if args.gamma <= 0:
        parser.error(f"--gamma must be positive, got {args.gamma}")
    if args.loops < 0 or args.inner_iters < 0:
        parser.error("--loops and --inner-iters must be nonnegative")
    if args.replicates < 1:
        parser.error("--replicates must be >= 1")
    if args.dbar is not None and args.dbar < 1:
        parser.error("--dbar must be >= 1")
    if (args.filter_min_count is None) != (args.filter_min_cells is None):
        parser.error("--filter-min-count and --filter-min-cells go together")


def _load_and_preprocess(args, stages, phases):
    from . import dataio

    delim = {"comma": ",", "tab": "\t"}.get(args.delimiter)
    dataset = dataio.load_matrix_csv(
        args.input, has_header=args.header, has_rownames=args.rownames, delimiter=delim
    )
    labels_true = dataio.load_labels(args.labels) if args.labels else None
    phases.mark("load")

    X = dataset.matrix
    names = dataset.feature_names
    if args.filter_min_count is not None:
        X, kept = dataio.filter_low_expressed(
            X, args.filter_min_count, args.filter_min_cells
        )
        names = [names[j] for j in kept]
        phases.mark("filter")
    if "cpm" in stages:
        X = dataio.cpm_normalize(X)
        phases.mark("cpm")
    dataset = dataio.Dataset(X, names, dataset.sample_ids, labels_true)
    return dataset, labels_true


def _make_config(args, normalize_spectral: bool):
    from .driver import SolverConfig

    return SolverConfig(
        gamma=args.gamma,
        inner_iters=args.inner_iters,
        outer_loops=args.loops,
        dbar=args.dbar,
        replicates=args.replicates,
        seed=args.seed,
        normalize=normalize_spectral,
    )


def _cmd_cluster(parser, args) -> int:
    phases = _Phases(args.time)
    stages = _parse_normalize(parser, args.normalize)
    _validate_cluster_args(parser, args)

    from . import dataio
    from .driver import k_sparse

    dataset, labels_true = _load_and_preprocess(args, stages, phases)
    cfg = _make_config(args, normalize_spectral="spectral" in stages)
    result = k_sparse(dataset.matrix, args.k, args.eta, cfg, labels_true=labels_true)
    phases.mark("cluster")

    dataio.write_result(result, dataset, args.out)
    phases.mark("write")

    line = (
        f"{args.eta:g}\t{result.selected_features.size}"
        f"\t{result.objective_trace[-1]:.15g}"
    )
    if result.metrics is not None:
        line += (
            f"\t{result.metrics['accuracy']:.6f}"
            f"\t{result.metrics['ari']:.6f}\t{result.metrics['nmi']:.6f}"
        )
    print(line)
    return 0


def _parse_etas(parser, args) -> list[float]:
    if (args.eta_list is None) == (args.eta_range is None):
        parser.error("give exactly one of --eta-list or --eta-range")
    if args.eta_list is not None:
        try:
            etas = [float(tok) for tok in args.eta_list.split(",") if tok.strip()]
        except ValueError:
            parser.error(f"--eta-list: could not parse {args.eta_list!r}")
        if not etas:
            parser.error("--eta-list is empty")
    else:
        parts = args.eta_range.split(":")
        if len(parts) != 3:
            parser.error("--eta-range must be START:STOP:STEP")
        try:
            start, stop, step = (float(tok) for tok in parts)
        except ValueError:
            parser.error(f"--eta-range: could not parse {args.eta_range!r}")
        if step <= 0 or stop < start:
            parser.error("--eta-range needs STOP >= START and STEP > 0")
        etas = []
        value = start
        while value <= stop * (1 + 1e-12):
            etas.append(value)
            value = start + len(etas) * step
    if any(e <= 0 for e in etas):
        parser.error("all eta values must be positive")
    return sorted(etas)


def _cmd_sweep(parser, args) -> int:
    phases = _Phases(args.time)
    stages = _parse_normalize(parser, args.normalize)
    _validate_cluster_args(parser, args)
    etas = _parse_etas(parser, args)

    from . import dataio
    from .driver import sweep_eta

    dataset, labels_true = _load_and_preprocess(args, stages, phases)
    cfg = _make_config(args, normalize_spectral="spectral" in stages)
    records = sweep_eta(
        dataset.matrix, args.k, etas, labels_true=labels_true, cfg=cfg,
        n_jobs=max(args.threads, 1),
    )
    phases.mark("sweep")

    rows = ["eta\tselected\tfrobenius\taccuracy\tari\tnmi"]
    for rec in records:
        acc = "nan" if rec.accuracy is None else f"{rec.accuracy:.6f}"
        ari = "nan" if rec.ari is None else f"{rec.ari:.6f}"
        nmi = "nan" if rec.nmi is None else f"{rec.nmi:.6f}"
        rows.append(
            f"{rec.eta:g}\t{rec.selected_count}\t{rec.frobenius_objective:.15g}"
            f"\t{acc}\t{ari}\t{nmi}"
        )
    table = "\n".join(rows) + "\n"
    if args.out:
        dataio._atomic_write(args.out, table)
    else:
        sys.stdout.write(table)
    return 0


def _cmd_synth(parser, args) -> int:
    phases = _Phases(args.time)
    from . import dataio

    try:
        spec = dataio.SyntheticSpec(
            m=args.m, d=args.d, k=args.k, n_informative=args.informative,
            shift=args.shift, noise_sd=args.noise_sd, seed=args.seed,
        )
    except ValueError as exc:
        parser.error(str(exc))
    dataset = dataio.generate_synthetic(spec)
    phases.mark("generate")

    dataio.write_matrix_csv(f"{args.out}_matrix.csv", dataset, header=False, rownames=False)
    dataio.save_labels(f"{args.out}_labels.txt", dataset.labels_true)
    dataio._atomic_write(
        f"{args.out}_informative.txt",
        "".join(f"{int(j)}\n" for j in dataset.informative_features),
    )
    phases.mark("write")
    print(f"{args.out}_matrix.csv\t{spec.m}\t{spec.d}\t{spec.k}")
    return 0


def _cmd_eval(parser, args) -> int:
    from . import dataio, metrics

    pred = dataio.load_labels(args.pred)
    truth = dataio.load_labels(args.truth)
    acc = metrics.accuracy(truth, pred)
    ari = metrics.ari(truth, pred)
    nmi = metrics.nmi(truth, pred)
    print(f"{acc:.6f} {ari:.6f} {nmi:.6f}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _pin_blas_threads()
    try:
        return args.func(parser, args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
