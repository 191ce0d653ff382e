"""Algebra on the sample-anchor bipartite graph.

The shared graph ``zbar`` (N x M) defines the bipartite adjacency
``B = [[0, zbar], [zbar.T, 0]]``.  Zero eigenvalues of its normalized
Laplacian are the unit singular values of
``H = D_P^{-1/2} zbar D_Q^{-1/2}``, and their multiplicity equals the
number of connected components.
"""
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components

DEGREE_FLOOR = 1e-12
EDGE_EPS = 1e-8
UNIT_SV_TOL = 1e-6


@dataclass
class DegreePair:
    dp: np.ndarray
    dq: np.ndarray


@dataclass
class ComponentLabeling:
    """Component ids for samples and anchors.

    Anchors without any edge belong to no component and carry id ``-1``.
    """
    sample_labels: np.ndarray
    anchor_labels: np.ndarray
    count: int


def shared_graph(z):
    """Average the ``(N, V, M)`` graph tensor over views."""
    return np.asarray(z, dtype=float).mean(axis=1)


def degrees(zbar):
    zbar = np.asarray(zbar, dtype=float)
    dp = np.maximum(zbar.sum(axis=1), DEGREE_FLOOR)
    dq = np.maximum(zbar.sum(axis=0), DEGREE_FLOOR)
    return DegreePair(dp, dq)


def normalized_affinity(zbar, deg):
    return zbar / np.sqrt(deg.dp)[:, None] / np.sqrt(deg.dq)[None, :]


def count_zero_eigs(singulars, tol=UNIT_SV_TOL):
    """Number of singular values of ``H`` within ``tol`` of one."""
    return int(np.count_nonzero(np.asarray(singulars) >= 1.0 - tol))


def connected_components(zbar, eps=EDGE_EPS):
    """Components of the bipartite graph with edges ``zbar[i, j] > eps``.

    Ids are ordered by the smallest sample index in each component.
    """
    zbar = np.asarray(zbar)
    n, m = zbar.shape
    ii, jj = np.nonzero(zbar > eps)
    graph = coo_matrix((np.ones(ii.size), (ii, n + jj)), shape=(n + m, n + m))
    _, raw = _csgraph_components(graph, directed=False)
    # relabel by first appearance among samples
    remap = {}
    for c in raw[:n]:
        remap.setdefault(int(c), len(remap))
    sample_labels = np.array([remap[int(c)] for c in raw[:n]], dtype=np.int64)
    anchor_labels = np.array([remap.get(int(raw[n + j]), -1) for j in range(m)],
                             dtype=np.int64)
    return ComponentLabeling(sample_labels, anchor_labels, len(remap))


def labels_from_components(comp, k, affinity=None):
    """Turn a component labeling into ``k`` cluster labels.

    When there are more than ``k`` components, the smallest ones are merged,
    one at a time, into the component of the anchor they are most strongly
    linked to in ``affinity`` (an N x M matrix).  Components with no link
    at all are merged into the largest remaining one.

    Returns ``(labels, exact)`` where ``exact`` is true only if the graph
    already had exactly ``k`` components.
    """
    labels = comp.sample_labels.copy()
    exact = comp.count == k
    if comp.count <= k:
        return labels, exact
    anchor_labels = comp.anchor_labels.copy()
    alive = list(range(comp.count))
    while len(alive) > k:
        sizes = {c: int(np.count_nonzero(labels == c)) for c in alive}
        victim = min(alive, key=lambda c: (sizes[c], c))
        members = labels == victim
        target = None
        if affinity is not None:
            weight = np.asarray(affinity)[members].sum(axis=0)
            outside = (anchor_labels != victim) & (anchor_labels >= 0)
            weight = np.where(outside, weight, 0.0)
            if weight.max(initial=0.0) > 0:
                target = int(anchor_labels[int(np.argmax(weight))])
        if target is None:
            target = max((c for c in alive if c != victim),
                         key=lambda c: (sizes[c], -c))
        labels[members] = target
        anchor_labels[anchor_labels == victim] = target
        alive.remove(victim)
    # compact ids, ordered by first sample
    _, first = np.unique(labels, return_index=True)
    order = np.unique(labels)[np.argsort(first)]
    remap = {old: new for new, old in enumerate(order)}
    return np.array([remap[c] for c in labels], dtype=np.int64), exact
