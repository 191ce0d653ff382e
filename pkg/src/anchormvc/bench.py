"""Timing harness for the per-iteration cost of the solver."""
import time

import numpy as np

from .datasets import SynthSpec, generate_synth
from .solver import SolverConfig, solve


def time_solver(n, anchors=100, views=3, dims=20, clusters=5, iters=10, seed=0):
    """Run a fixed number of solver iterations on synthetic data.

    Anchors are sampled uniformly so that anchor selection cost does not
    leak into the timing.  Returns ``(per_iter_seconds, total_seconds)``.
    """
    data = generate_synth(SynthSpec(n=n, k=clusters, v=views, dims=dims, seed=seed))
    cfg = SolverConfig(n_clusters=clusters, n_anchors=anchors, max_iter=iters,
                       anchor_strategy="uniform", stop_on_convergence=False,
                       seed=seed)
    t0 = time.perf_counter()
    result = solve(data, cfg)
    total = time.perf_counter() - t0
    return result.timings["loop"] / max(result.n_iter, 1), total


def loglog_slope(sizes, seconds):
    """Least-squares slope of ``log(seconds)`` against ``log(sizes)``.

    ``None`` when fewer than two distinct sizes are available.
    """
    sizes = np.asarray(sizes, dtype=float)
    if np.unique(sizes).size < 2:
        return None
    slope, _ = np.polyfit(np.log(sizes), np.log(np.asarray(seconds, dtype=float)), 1)
    return float(slope)


def run(sizes, anchors=100, views=3, dims=20, clusters=5, iters=10, seed=0,
        repeats=1):
    """Time every size; the best of ``repeats`` runs is kept per size."""
    # warm up BLAS/FFT plans so the first size is not penalized
    time_solver(max(2 * anchors, 200), anchors=min(anchors, 100), views=views,
                dims=dims, clusters=clusters, iters=2, seed=seed)
    rows = []
    for n in sizes:
        best = min((time_solver(n, anchors, views, dims, clusters, iters, seed)
                    for _ in range(repeats)), key=lambda r: r[0])
        rows.append((int(n), best[0], best[1]))
    slope = loglog_slope([r[0] for r in rows], [r[1] for r in rows])
    return rows, slope
