"""scikit-learn compatible front end."""
import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._errors import InvalidInputError
from .anchors import init_anchor_graph, pairwise_sq_dists
from .datasets import MultiViewDataset
from .solver import SolverConfig, solve


def check_views(X, min_samples=2):
    """Validate a multi-view input and return a list of float arrays.

    ``X`` is a sequence of ``(n_samples, n_features_v)`` arrays, or a
    :class:`MultiViewDataset`.
    """
    if isinstance(X, MultiViewDataset):
        X = X.views
    if isinstance(X, np.ndarray) and X.ndim == 2:
        X = [X]
    views = [check_array(x, dtype=np.float64, ensure_min_samples=min_samples)
             for x in X]
    if not views:
        raise InvalidInputError("at least one view is required")
    n = views[0].shape[0]
    if any(x.shape[0] != n for x in views):
        raise InvalidInputError(
            f"views disagree on the number of samples: {[x.shape[0] for x in views]}")
    return views


class MultiViewAnchorClustering(ClusterMixin, BaseEstimator):
    """Multi-view clustering through coupled anchor graphs.

    Each view learns an ``N x M`` sample-to-anchor graph.  The graphs are
    stacked into an ``N x V x M`` tensor whose Schatten p-norm is penalized,
    and their average is driven towards exactly ``n_clusters`` connected
    components, which are read off as the cluster labels.

    Parameters
    ----------
    n_clusters : int
        Number of clusters ``K``.
    n_anchors : float or int, default=0.5
        Anchor ratio of ``N`` when ``<= 1``, absolute count otherwise.
    lam : float, default=1.0
        Weight of the tensor Schatten p-norm term.
    p : float, default=0.4
        Schatten exponent in ``(0, 1]``.
    knn : int or None
        Neighbours used for the initial graph and the adaptive weight;
        ``None`` means ``min(15, M - 1)``.
    max_iter : int, default=500
    anchor_strategy : {"kmeans", "uniform"}
    random_state : int, default=0

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    exact_k_ : bool
        Whether the learned graph had exactly ``n_clusters`` components.
    shared_graph_ : ndarray of shape (n_samples, n_anchors)
    graphs_ : ndarray of shape (n_samples, n_views, n_anchors)
    anchors_ : list of ndarray
    anchor_labels_ : ndarray of shape (n_anchors,)
        Cluster of every anchor, ``-1`` for anchors left without edges.
    history_ : list of IterationRecord
    status_ : str
    """

    def __init__(self, n_clusters=2, n_anchors=0.5, lam=1.0, p=0.4, knn=None,
                 max_iter=500, beta0=1e-3, mu0=1e-5, mu_max=1e12, eta=1.1,
                 tol=1e-6, anchor_strategy="kmeans", random_state=0):
        self.n_clusters = n_clusters
        self.n_anchors = n_anchors
        self.lam = lam
        self.p = p
        self.knn = knn
        self.max_iter = max_iter
        self.beta0 = beta0
        self.mu0 = mu0
        self.mu_max = mu_max
        self.eta = eta
        self.tol = tol
        self.anchor_strategy = anchor_strategy
        self.random_state = random_state

    def _config(self):
        return SolverConfig(
            n_clusters=self.n_clusters, n_anchors=self.n_anchors, lam=self.lam,
            p=self.p, knn=self.knn, max_iter=self.max_iter, beta0=self.beta0,
            mu0=self.mu0, mu_max=self.mu_max, eta=self.eta,
            tol_residual=self.tol, anchor_strategy=self.anchor_strategy,
            seed=self.random_state)

    def fit(self, X, y=None):
        views = check_views(X)
        result = solve(MultiViewDataset(views), self._config())
        self.result_ = result
        self.labels_ = result.labels
        self.exact_k_ = result.exact_k
        self.shared_graph_ = result.shared_graph
        self.graphs_ = result.graphs
        self.anchors_ = result.anchors.anchors
        self.history_ = result.history
        self.status_ = result.status
        self.n_views_ = len(views)
        self.n_features_per_view_ = [x.shape[1] for x in views]
        self.anchor_labels_ = self._anchor_labels(result)
        return self

    def _anchor_labels(self, result):
        # anchors inherit the label of the samples they connect to
        z = result.shared_graph
        k = int(result.labels.max()) + 1 if result.labels.size else 0
        weight = np.zeros((z.shape[1], k))
        np.add.at(weight.T, result.labels, z)
        labels = np.argmax(weight, axis=1)
        labels[weight.sum(axis=1) <= 0] = -1
        return labels

    def predict(self, X):
        """Label new samples through their nearest anchors.

        Each view links a new sample to its ``knn`` nearest anchors with the
        initial closed-form weights; the views are averaged and the sample
        takes the cluster holding the most weight.
        """
        check_is_fitted(self, "labels_")
        views = check_views(X, min_samples=1)
        if len(views) != self.n_views_:
            raise InvalidInputError(
                f"expected {self.n_views_} views, got {len(views)}")
        m = self.anchors_[0].shape[0]
        knn = self.knn if self.knn is not None else min(15, m - 1)
        z = np.mean([init_anchor_graph(pairwise_sq_dists(x, a), knn)
                     for x, a in zip(views, self.anchors_)], axis=0)
        known = self.anchor_labels_ >= 0
        k = int(self.labels_.max()) + 1
        scores = np.zeros((z.shape[0], k))
        for c in range(k):
            scores[:, c] = z[:, known & (self.anchor_labels_ == c)].sum(axis=1)
        return np.argmax(scores, axis=1)
