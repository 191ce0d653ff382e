"""External clustering metrics computed from an integer contingency table."""
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._errors import InvalidInputError

METRIC_KEYS = ("acc", "nmi", "purity", "precision", "recall", "f_score", "ari")


@dataclass
class ContingencyTable:
    counts: np.ndarray  # predicted clusters x true classes

    @property
    def rows(self):
        return self.counts.sum(axis=1)

    @property
    def cols(self):
        return self.counts.sum(axis=0)

    @property
    def total(self):
        return int(self.counts.sum())


@dataclass
class MetricsReport:
    acc: float
    nmi: float
    purity: float
    precision: float
    recall: float
    f_score: float
    ari: float

    def as_dict(self):
        return asdict(self)


def _check_pair(pred, truth, min_len=1):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise InvalidInputError(
            f"label vectors differ in length: {pred.size} vs {truth.size}")
    if pred.size < min_len:
        raise InvalidInputError(f"need at least {min_len} labels")
    return pred, truth


def contingency(pred, truth):
    pred, truth = _check_pair(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    counts = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(counts, (p, t), 1)
    return ContingencyTable(counts)


def hungarian_assign(cost):
    """Minimum-cost one-to-one assignment of rows to columns.

    Returns ``(rows, cols)`` index arrays; a non-square matrix is padded with
    zero-cost dummies, which are dropped from the result.
    """
    cost = np.asarray(cost, dtype=float)
    r, c = cost.shape
    size = max(r, c)
    padded = np.zeros((size, size))
    padded[:r, :c] = cost
    rows, cols = linear_sum_assignment(padded)
    keep = (rows < r) & (cols < c)
    return rows[keep], cols[keep]


def accuracy(pred, truth):
    table = contingency(pred, truth)
    rows, cols = hungarian_assign(-table.counts)
    return float(table.counts[rows, cols].sum()) / table.total


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth):
    """Mutual information normalized by the geometric mean of entropies."""
    table = contingency(pred, truth)
    n = table.total
    hp, ht = _entropy(table.rows, n), _entropy(table.cols, n)
    nz = table.counts > 0
    c = table.counts[nz].astype(float)
    outer = np.outer(table.rows, table.cols)[nz].astype(float)
    mi = float(np.sum(c / n * np.log(c * n / outer)))
    if hp == 0.0 or ht == 0.0:
        same = table.counts.shape[0] == table.counts.shape[1] == 1
        return 1.0 if same else 0.0
    return float(min(max(mi / np.sqrt(hp * ht), 0.0), 1.0))


def purity(pred, truth):
    table = contingency(pred, truth)
    return float(table.counts.max(axis=1).sum()) / table.total


def _pairs(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def pair_metrics(pred, truth):
    """Pair-counting precision, recall, F-score and adjusted Rand index."""
    _check_pair(pred, truth, min_len=2)
    table = contingency(pred, truth)
    n = table.total
    same_both = int(_pairs(table.counts).sum())
    same_pred = int(_pairs(table.rows).sum())
    same_truth = int(_pairs(table.cols).sum())
    tp = same_both
    fp = same_pred - tp
    fn = same_truth - tp
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    total_pairs = n * (n - 1) // 2
    # ARI with the expectation cleared from the denominators: integers until
    # the final division, so rational cases come out exact
    num = 2 * (same_both * total_pairs - same_pred * same_truth)
    den = (same_pred + same_truth) * total_pairs - 2 * same_pred * same_truth
    ari = 1.0 if den == 0 else num / den
    return float(precision), float(recall), float(f), float(ari)


def evaluate(pred, truth):
    precision, recall, f, ari = pair_metrics(pred, truth)
    return MetricsReport(accuracy(pred, truth), nmi(pred, truth),
                         purity(pred, truth), precision, recall, f, ari)
