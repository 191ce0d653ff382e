"""Command-line interface: ``anchormvc {cluster,synth,bench,metrics}``."""
import argparse
import json
import logging
import os
import platform
import sys
import time

import numpy as np

from . import __version__, bench, export
from ._errors import InvalidInputError, InvalidParameterError, LoadError
from .datasets import SynthSpec, generate_synth, load_dataset, write_dataset
from .metrics import METRIC_KEYS, evaluate
from .solver import SolverConfig, solve

EXIT_USAGE = 2
EXIT_LOAD = 3
EXIT_DEGENERATE = 4

logger = logging.getLogger("anchormvc")


def _p_value(text):
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"p must be a number in (0, 1], got {text!r}")
    if not 0 < p <= 1:
        raise argparse.ArgumentTypeError(f"p must lie in the range (0, 1], got {p}")
    return p


def _anchors_value(text):
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid anchor value {text!r}")
    if a <= 0:
        raise argparse.ArgumentTypeError("anchors must be a ratio in (0, 1] or a count > 1")
    if a > 1:
        if a != int(a):
            raise argparse.ArgumentTypeError("anchor counts must be integers")
        return int(a)
    return a


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {v}")
    return v


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")
    if not sizes or min(sizes) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def parse_sweep(text):
    """``"p=0.1:1.0:0.1"`` -> ``("p", [0.1, 0.2, ..., 1.0])``."""
    try:
        name, rng = text.split("=", 1)
        start, stop, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"sweep must look like p=START:STOP:STEP, got {text!r}")
    name = name.strip()
    if name not in ("p", "anchors"):
        raise argparse.ArgumentTypeError("sweep parameter must be 'p' or 'anchors'")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("sweep needs STEP > 0 and STOP >= START")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    values = [round(start + i * step, 10) for i in range(count)]
    if name == "p" and not all(0 < v <= 1 for v in values):
        raise argparse.ArgumentTypeError("p sweep values must lie in (0, 1]")
    if name == "anchors" and not all(0 < v <= 1 for v in values):
        raise argparse.ArgumentTypeError("anchor sweep values are ratios in (0, 1]")
    return name, values


def _synth_spec(text):
    try:
        return SynthSpec.parse(text)
    except InvalidParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anchormvc",
        description="Multi-view clustering with tensor-coupled anchor graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cluster", help="cluster a dataset")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", metavar="DIR", help="directory with view1.csv ... and labels.csv")
    src.add_argument("--synth", metavar="SPEC", type=_synth_spec,
                     help='synthetic data, e.g. "n=300,k=3,v=3,sep=10"')
    c.add_argument("--clusters", type=_positive_int, required=True)
    c.add_argument("--anchors", type=_anchors_value, default=0.5,
                   help="ratio of N in (0, 1] or an absolute count (default 0.5)")
    c.add_argument("--lambda", dest="lam", type=_nonneg_float, default=1.0)
    c.add_argument("--p", type=_p_value, default=0.4, help="Schatten exponent in (0, 1]")
    c.add_argument("--knn", type=_positive_int, default=None)
    c.add_argument("--max-iter", type=_positive_int, default=500)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--anchor-strategy", choices=("kmeans", "uniform"), default="kmeans")
    c.add_argument("--sweep", type=parse_sweep, default=None,
                   help="p=START:STOP:STEP or anchors=START:STOP:STEP")
    c.add_argument("--out", required=True, metavar="DIR")

    s = sub.add_parser("synth", help="write a synthetic dataset directory")
    s.add_argument("--spec", type=_synth_spec, default=SynthSpec())
    s.add_argument("--out", required=True, metavar="DIR")

    b = sub.add_parser("bench", help="time solver iterations against N")
    b.add_argument("--sizes", type=_sizes, default=[1000, 2000, 4000, 8000])
    b.add_argument("--anchors", type=_positive_int, default=100)
    b.add_argument("--views", type=_positive_int, default=3)
    b.add_argument("--dims", type=_positive_int, default=20)
    b.add_argument("--clusters", type=_positive_int, default=5)
    b.add_argument("--iters", type=_positive_int, default=10)
    b.add_argument("--repeats", type=_positive_int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default=".", metavar="DIR")

    m = sub.add_parser("metrics", help="score predicted labels against the truth")
    m.add_argument("--pred", required=True)
    m.add_argument("--truth", required=True)
    m.add_argument("--out", default=None, help="optional metrics.json path")
    return parser


def _config(args, **overrides):
    fields = dict(n_clusters=args.clusters, n_anchors=args.anchors, lam=args.lam,
                  p=args.p, knn=args.knn, max_iter=args.max_iter, seed=args.seed,
                  anchor_strategy=args.anchor_strategy)
    fields.update(overrides)
    return SolverConfig(**fields)


def _metrics_dict(pred, truth):
    report = evaluate(pred, truth).as_dict()
    return {k: report[k] for k in METRIC_KEYS}


def _manifest(cfg, data, timings, extra=None):
    manifest = {
        "tool": "anchormvc",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "dataset": {
            "n_samples": data.n_samples,
            "n_views": data.n_views,
            "dims": ":".join(str(x.shape[1]) for x in data.views),
            "sha256": data.fingerprint(),
        },
        "seconds": timings,
    }
    if extra:
        manifest.update(extra)
    return manifest


def run_cluster(args):
    t0 = time.perf_counter()
    if args.data is not None:
        data = load_dataset(args.data)
        source = {"source": os.path.abspath(args.data)}
    else:
        data = generate_synth(args.synth)
        source = {"source": "synthetic", "synth": {
            k: (":".join(map(str, v)) if isinstance(v, list) else v)
            for k, v in vars(args.synth).items()}}
    t_load = time.perf_counter() - t0
    os.makedirs(args.out, exist_ok=True)

    if args.sweep is not None:
        return _run_sweep(args, data, source, t_load)

    cfg = _config(args)
    result = solve(data, cfg)
    export.write_labels(os.path.join(args.out, "labels.csv"), result.labels)
    export.write_history(os.path.join(args.out, "history.csv"), result.history)
    export.write_graph(os.path.join(args.out, "graph.csv"), result.shared_graph)
    if data.labels is not None:
        export.write_flat_json(os.path.join(args.out, "metrics.json"),
                               _metrics_dict(result.labels, data.labels))
    timings = {"load": t_load, **result.timings}
    extra = dict(source, status=result.status, exact_k=result.exact_k,
                 n_iter=result.n_iter, n_components=result.n_components)
    export.write_flat_json(os.path.join(args.out, "manifest.json"),
                           _manifest(cfg, data, timings, extra))
    if result.status == "degenerate":
        print("error: degenerate data (all samples coincide); no clustering possible",
              file=sys.stderr)
        return EXIT_DEGENERATE
    if not result.exact_k:
        print(f"warning: learned graph has {result.n_components} connected components, "
              f"expected {cfg.n_clusters}; smallest components were merged",
              file=sys.stderr)
    return 0


SWEEP_COLUMNS = ("param", "value", "exact_k", "n_components", "n_iter", "status") + METRIC_KEYS


def _run_sweep(args, data, source, t_load):
    name, values = args.sweep
    rows = []
    degenerate = False
    t0 = time.perf_counter()
    for value in values:
        override = {"p": value} if name == "p" else {"n_anchors": value}
        cfg = _config(args, **override)
        result = solve(data, cfg)
        degenerate |= result.status == "degenerate"
        row = [name, value, result.exact_k, result.n_components, result.n_iter,
               result.status]
        if data.labels is not None:
            scores = _metrics_dict(result.labels, data.labels)
            row += [scores[k] for k in METRIC_KEYS]
        else:
            row += [""] * len(METRIC_KEYS)
        rows.append(row)
        logger.info("%s=%s exact_k=%s", name, value, result.exact_k)
    export.atomic_write(os.path.join(args.out, "sweep.csv"),
                        export.csv_text(rows, SWEEP_COLUMNS))
    timings = {"load": t_load, "sweep": time.perf_counter() - t0}
    export.write_flat_json(os.path.join(args.out, "manifest.json"),
                           _manifest(_config(args), data, timings,
                                     dict(source, sweep=f"{name}={values}")))
    return EXIT_DEGENERATE if degenerate else 0


def run_synth(args):
    data = generate_synth(args.spec)
    write_dataset(data, args.out)
    return 0


def run_bench(args):
    rows, slope = bench.run(args.sizes, anchors=args.anchors, views=args.views,
                            dims=args.dims, clusters=args.clusters,
                            iters=args.iters, seed=args.seed, repeats=args.repeats)
    os.makedirs(args.out, exist_ok=True)
    export.atomic_write(os.path.join(args.out, "bench.csv"),
                        export.csv_text(rows, export.BENCH_COLUMNS))
    for n, per_iter, total in rows:
        print(f"n={n:>8d}  per_iter={per_iter:.4f}s  total={total:.3f}s")
    print("slope: n/a" if slope is None else f"slope: {slope:.3f}")
    return 0


def run_metrics(args):
    pred = export.read_labels(args.pred)
    truth = export.read_labels(args.truth)
    scores = _metrics_dict(pred, truth)
    if args.out:
        export.write_flat_json(args.out, scores)
    print(json.dumps(scores))
    return 0


COMMANDS = {"cluster": run_cluster, "synth": run_synth, "bench": run_bench,
            "metrics": run_metrics}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except LoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LOAD
    except (InvalidParameterError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
