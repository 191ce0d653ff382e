"""Anchor selection and initial sample-to-anchor graphs."""
from dataclasses import dataclass

import numpy as np

from ._errors import InvalidInputError, InvalidParameterError

ALPHA_FLOOR = 1e-12


@dataclass
class AnchorSet:
    anchors: list
    strategy: str
    seed: int

    @property
    def m(self):
        return self.anchors[0].shape[0]


def _kmeans_pp(x, m, rng):
    n = x.shape[0]
    centers = np.empty((m, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = pairwise_sq_dists(x, centers[:1])[:, 0]
    for c in range(1, m):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=closest / total)
        centers[c] = x[idx]
        closest = np.minimum(closest, pairwise_sq_dists(x, centers[c:c + 1])[:, 0])
    return centers


def kmeans(x, m, rng, max_iter=50):
    """Lloyd's algorithm from a k-means++ start.

    Empty clusters are re-seeded at the point farthest from its centroid.
    Returns ``(centers, assignment)``.
    """
    centers = _kmeans_pp(x, m, rng)
    assign = None
    for _ in range(max_iter):
        d = pairwise_sq_dists(x, centers)
        new_assign = np.argmin(d, axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        counts = np.bincount(assign, minlength=m)
        sums = np.zeros_like(centers)
        np.add.at(sums, assign, x)
        nonempty = counts > 0
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]
        if not np.all(nonempty):
            err = d[np.arange(x.shape[0]), assign]
            for c in np.flatnonzero(~nonempty):
                far = int(np.argmax(err))
                centers[c] = x[far]
                err[far] = -1.0
    return centers, assign


def select_anchors(data, m, strategy="kmeans", seed=0):
    """Pick ``m`` anchors for every view of ``data``.

    ``"kmeans"`` runs k-means independently per view; ``"uniform"``
    samples one shared set of rows so anchors correspond across views.
    """
    n = data.n_samples
    if not (1 <= m <= n):
        raise InvalidParameterError(f"anchor count must lie in [1, {n}], got {m}")
    rng = np.random.default_rng(seed)
    if strategy in ("uniform", "uniform-sample"):
        idx = rng.choice(n, size=m, replace=False)
        anchors = [np.array(x[idx], dtype=float) for x in data.views]
        return AnchorSet(anchors, "uniform", seed)
    if strategy != "kmeans":
        raise InvalidParameterError(f"unknown anchor strategy {strategy!r}")
    anchors = [kmeans(np.asarray(x, dtype=float), m, rng)[0] for x in data.views]
    return AnchorSet(anchors, "kmeans", seed)


def pairwise_sq_dists(x, a):
    """Squared Euclidean distances between rows of ``x`` and rows of ``a``."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    if x.ndim != 2 or a.ndim != 2 or x.shape[1] != a.shape[1]:
        raise InvalidInputError(
            f"feature dimensions differ: {x.shape} vs {a.shape}")
    d = (np.einsum("ij,ij->i", x, x)[:, None]
         + np.einsum("ij,ij->i", a, a)[None, :]
         - 2.0 * x @ a.T)
    # the expansion loses precision for near-coincident rows; fix those exactly
    scale = np.maximum(np.abs(x).max(initial=0.0), np.abs(a).max(initial=0.0)) ** 2
    close = d <= 1e-6 * max(scale, 1.0)
    if np.any(close):
        ii, jj = np.nonzero(close)
        diff = x[ii] - a[jj]
        d[ii, jj] = np.einsum("ij,ij->i", diff, diff)
    return np.maximum(d, 0.0)


def _check_k(k, m):
    if not (1 <= k < m):
        raise InvalidParameterError(f"k must lie in [1, {m - 1}], got {k}")


def init_anchor_graph(d, k):
    """Closed-form k-nearest-anchor graph.

    Each row puts weight ``(d_(k+1) - d_(j)) / (k d_(k+1) - sum_{l<=k} d_(l))``
    on its ``k`` nearest anchors.  Rows whose denominator vanishes get
    uniform weight ``1/k`` on the nearest ``k``.
    """
    d = np.asarray(d, dtype=float)
    n, m = d.shape
    _check_k(k, m)
    order = np.argsort(d, axis=1, kind="stable")
    ds = np.take_along_axis(d, order, axis=1)
    kth = ds[:, k][:, None]
    num = kth - ds[:, :k]
    # k d_(k+1) - sum_l d_(l), summed termwise so no weight can exceed 1
    den = num.sum(axis=1)
    degenerate = den <= 1e-14 * np.maximum(np.abs(ds[:, k]), 1.0)
    w = np.empty((n, k))
    ok = ~degenerate
    w[ok] = num[ok] / den[ok, None]
    w[degenerate] = 1.0 / k
    z = np.zeros((n, m))
    np.put_along_axis(z, order[:, :k], w, axis=1)
    return z


def compute_alpha(d, k):
    """Average adaptive-neighbour regularization weight.

    Mean over rows of ``(k/2) d_(k+1) - (1/2) sum_{l<=k} d_(l)``, floored at
    ``1e-12``.
    """
    d = np.asarray(d, dtype=float)
    _check_k(k, d.shape[1])
    ds = np.sort(d, axis=1)[:, :k + 1]
    raw = np.mean(0.5 * k * ds[:, k] - 0.5 * ds[:, :k].sum(axis=1))
    return max(float(raw), ALPHA_FLOOR)
