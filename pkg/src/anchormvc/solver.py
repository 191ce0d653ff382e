"""Alternating minimization for multi-view anchor-graph learning.

State is kept as ``(N, V, M)`` tensors: ``z[:, v, :]`` is view ``v``'s
anchor graph, ``aux`` the low-rank copy produced by the Schatten-p prox
and ``dual`` the Lagrange multiplier.  One outer iteration performs

1. spectral embedding of the shared graph (top-K singular pairs of H),
2. the hidden-weight ``beta`` adaptation from the unit singular count,
3. the Schatten-p prox for ``aux``,
4. a row-wise simplex projection for every view's graph,
5. the dual ascent step and penalty increase.
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import bipartite
from ._errors import InvalidParameterError
from .anchors import (compute_alpha, init_anchor_graph, pairwise_sq_dists,
                      select_anchors)
from .tensor import prox_schatten_p, schatten_p_power

logger = logging.getLogger(__name__)

G_FLOOR = 1e-12


@dataclass
class SolverConfig:
    """Tunables of the solver.

    ``n_anchors`` is a ratio of ``N`` when it is ``<= 1`` and an absolute
    count otherwise.  ``knn=None`` means ``min(15, M - 1)``.
    """
    n_clusters: int = 2
    n_anchors: float = 0.5
    lam: float = 1.0
    p: float = 0.4
    mu0: float = 1e-5
    mu_max: float = 1e12
    eta: float = 1.1
    beta0: float = 1e-3
    knn: int = None
    tol_residual: float = 1e-6
    tol_unit_sv: float = 1e-6
    eps_edge: float = 1e-8
    max_iter: int = 500
    seed: int = 0
    anchor_strategy: str = "kmeans"
    stop_on_convergence: bool = True

    def validate(self):
        if self.n_clusters < 1:
            raise InvalidParameterError("n_clusters must be >= 1")
        if not self.n_anchors > 0:
            raise InvalidParameterError("n_anchors must be positive")
        if self.lam < 0:
            raise InvalidParameterError("lam must be >= 0")
        if not 0 < self.p <= 1:
            raise InvalidParameterError(f"p must lie in (0, 1], got {self.p}")
        if not 0 < self.mu0 < self.mu_max:
            raise InvalidParameterError("need 0 < mu0 < mu_max")
        if not self.eta > 1:
            raise InvalidParameterError("eta must exceed 1")
        if not self.beta0 > 0:
            raise InvalidParameterError("beta0 must be positive")
        if not 0 < self.tol_unit_sv < 0.1:
            raise InvalidParameterError("tol_unit_sv must lie in (0, 0.1)")
        if self.eps_edge < 0 or self.tol_residual < 0:
            raise InvalidParameterError("tolerances must be >= 0")
        if self.max_iter < 1:
            raise InvalidParameterError("max_iter must be >= 1")
        if self.knn is not None and self.knn < 1:
            raise InvalidParameterError("knn must be >= 1")
        return self

    def anchor_count(self, n):
        if self.n_anchors <= 1:
            m = int(round(self.n_anchors * n))
        else:
            m = int(self.n_anchors)
        return min(max(m, 1), n)

    def to_dict(self):
        return asdict(self)


@dataclass
class Embedding:
    p: np.ndarray
    q: np.ndarray


class IterationRecord(NamedTuple):
    iteration: int
    objective: float
    residual: float
    zero_eigs: int
    beta: float
    mu: float


@dataclass
class SolveResult:
    labels: np.ndarray
    exact_k: bool
    shared_graph: np.ndarray
    graphs: np.ndarray
    embedding: Embedding
    history: list
    status: str
    anchors: object = None
    alpha: list = None
    n_components: int = 0
    timings: dict = field(default_factory=dict)

    @property
    def n_iter(self):
        return len(self.history)


def update_embedding(zbar, k, deg=None):
    """Spectral embedding ``(P, Q)`` maximizing ``tr(P^T H Q)``.

    With ``P^T P + Q^T Q = I`` the optimum is ``P = U_k / sqrt(2)``,
    ``Q = V_k / sqrt(2)`` from the leading singular pairs of ``H``.
    Returns the embedding and all singular values of ``H`` (descending).
    """
    zbar = np.asarray(zbar, dtype=float)
    n, m = zbar.shape
    if not 1 <= k <= min(n, m):
        raise InvalidParameterError(f"k must lie in [1, {min(n, m)}], got {k}")
    if deg is None:
        deg = bipartite.degrees(zbar)
    h = bipartite.normalized_affinity(zbar, deg)
    u, s, vt = np.linalg.svd(h, full_matrices=False)
    scale = np.sqrt(0.5)
    return Embedding(scale * u[:, :k], scale * vt[:k].T), s


def update_aux(z, y, mu, lam, p):
    return prox_schatten_p(z + y / mu, lam / mu, p)


def project_simplex(v):
    """Euclidean projection of a vector onto the probability simplex."""
    return project_simplex_rows(np.asarray(v, dtype=float)[None, :])[0]


def project_simplex_rows(a):
    """Project every row of ``a`` onto the probability simplex (sort-based)."""
    a = np.asarray(a, dtype=float)
    n, m = a.shape
    u = -np.sort(-a, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    idx = np.arange(1, m + 1)
    cond = u - css / idx > 0
    rho = m - np.argmax(cond[:, ::-1], axis=1)
    gamma = -css[np.arange(n), rho - 1] / rho
    return np.maximum(a + gamma[:, None], 0.0)


def _embedding_dists(emb, deg):
    a = emb.p / np.sqrt(deg.dp)[:, None]
    b = emb.q / np.sqrt(deg.dq)[:, None]
    d = (np.einsum("ij,ij->i", a, a)[:, None]
         + np.einsum("ij,ij->i", b, b)[None, :] - 2.0 * a @ b.T)
    return np.maximum(d, 0.0)


def view_costs(dists, z):
    """``g_v = sqrt(sum_ij d_ij Z_ij)`` for every view, floored at 1e-12."""
    return np.array([max(np.sqrt(max(float(np.sum(d * z[:, v, :])), 0.0)), G_FLOOR)
                     for v, d in enumerate(dists)])


def update_graphs(dists, aux, dual, emb, deg, z_prev, alpha, beta, mu):
    """Closed-form update of every view's anchor graph."""
    n_views = z_prev.shape[1]
    g = view_costs(dists, z_prev)
    df = _embedding_dists(emb, deg) * (beta / n_views)
    z = np.empty_like(z_prev)
    for v, d in enumerate(dists):
        e = aux[:, v, :] - dual[:, v, :] / mu
        sigma = d / g[v] - mu * e + df
        z[:, v, :] = project_simplex_rows(-sigma / (mu + 2.0 * alpha[v]))
    return z


def update_beta(zero_count, k, beta):
    if zero_count < k:
        return 2.0 * beta, False
    if zero_count > k + 1:
        return beta / 2.0, False
    return beta, True


def update_duals(y, z, j, mu, eta, mu_max):
    return y + mu * (z - j), min(eta * mu, mu_max)


def objective(z, dists, alpha, lam, p, emb, deg, beta):
    zbar = bipartite.shared_graph(z)
    total = 0.0
    for v, d in enumerate(dists):
        zv = z[:, v, :]
        total += np.sqrt(max(float(np.sum(d * zv)), 0.0)) + alpha[v] * float(np.sum(zv * zv))
    if lam:
        total += lam * schatten_p_power(z, p)
    if beta:
        total += beta * float(np.sum(_embedding_dists(emb, deg) * zbar))
    return float(total)


def _degenerate_result(n, m, n_views, k, anchors, timings):
    labels = np.zeros(n, dtype=np.int64)
    z = np.full((n, n_views, m), 1.0 / m)
    emb = Embedding(np.zeros((n, k)), np.zeros((m, k)))
    return SolveResult(labels, k == 1, z.mean(axis=1), z, emb, [], "degenerate",
                       anchors, None, 1, timings)


def solve(data, cfg):
    """Cluster ``data`` (a :class:`MultiViewDataset`) with settings ``cfg``."""
    cfg.validate()
    t0 = time.perf_counter()
    n, n_views, k = data.n_samples, data.n_views, cfg.n_clusters
    m = cfg.anchor_count(n)
    if k < 2:
        raise InvalidParameterError("n_clusters must be >= 2")
    if m < k or n < k:
        raise InvalidParameterError(
            f"need anchors ({m}) and samples ({n}) >= clusters ({k})")
    knn = cfg.knn if cfg.knn is not None else min(15, m - 1)
    if knn >= m:
        raise InvalidParameterError(f"knn must be < number of anchors ({m})")

    anchors = select_anchors(data, m, cfg.anchor_strategy, cfg.seed)
    dists = [pairwise_sq_dists(x, a) for x, a in zip(data.views, anchors.anchors)]
    if all(float(d.max()) <= 1e-300 for d in dists):
        logger.warning("all samples coincide with their anchors; nothing to cluster")
        return _degenerate_result(n, m, n_views, k, anchors,
                                  {"setup": time.perf_counter() - t0, "loop": 0.0})

    z = np.stack([init_anchor_graph(d, knn) for d in dists], axis=1)
    g0 = view_costs(dists, z)
    # alpha lives on the same scale as the reweighted distances d / g
    alpha = [compute_alpha(d / g0[v], knn) for v, d in enumerate(dists)]
    zbar0 = bipartite.shared_graph(z)

    aux = z.copy()
    dual = np.zeros_like(z)
    mu, beta = cfg.mu0, cfg.beta0
    history = []
    status = "max-iter"
    emb = None
    t1 = time.perf_counter()
    for it in range(1, cfg.max_iter + 1):
        zbar = bipartite.shared_graph(z)
        deg = bipartite.degrees(zbar)
        emb, sv = update_embedding(zbar, k, deg)
        zero_count = bipartite.count_zero_eigs(sv[:min(k + 5, sv.size)], cfg.tol_unit_sv)
        # links lighter than ~1e-3 move a singular value by less than 1e-6
        zero_count = min(zero_count,
                         bipartite.connected_components(zbar, cfg.eps_edge).count)
        beta, reached = update_beta(zero_count, k, beta)
        # stop only once the graph produced by the last step has been checked
        if (cfg.stop_on_convergence and history and reached
                and history[-1].residual <= cfg.tol_residual):
            status = "converged"
            break
        aux = update_aux(z, dual, mu, cfg.lam, cfg.p)
        z = update_graphs(dists, aux, dual, emb, deg, z, alpha, beta, mu)
        dual, mu_next = update_duals(dual, z, aux, mu, cfg.eta, cfg.mu_max)
        residual = float(np.max(np.abs(z - aux)))
        obj = objective(z, dists, alpha, cfg.lam, cfg.p, emb, deg, beta)
        history.append(IterationRecord(it, obj, residual, zero_count, beta, mu))
        logger.debug("iter %d obj=%.6g res=%.3g zeros=%d beta=%.3g mu=%.3g",
                     it, obj, residual, zero_count, beta, mu)
        mu = mu_next
    t2 = time.perf_counter()

    zbar = bipartite.shared_graph(z)
    comp = bipartite.connected_components(zbar, cfg.eps_edge)
    labels, exact = bipartite.labels_from_components(comp, k, affinity=zbar0)
    if not exact:
        logger.warning("shared graph has %d components, expected %d", comp.count, k)
    timings = {"setup": t1 - t0, "loop": t2 - t1,
               "labels": time.perf_counter() - t2}
    return SolveResult(labels, exact, zbar, z, emb, history, status, anchors,
                       alpha, comp.count, timings)
