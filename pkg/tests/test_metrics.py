import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anchormvc._errors import InvalidInputError
from anchormvc.metrics import (METRIC_KEYS, accuracy, contingency, evaluate,
                               hungarian_assign, nmi, pair_metrics, purity)
from oracles import (brute_force_accuracy, brute_force_assignment_cost,
                     pair_metrics_loop)

A = [0, 0, 1, 1]
B = [0, 1, 0, 1]


class TestHungarian:
    def test_identity(self):
        cost = np.ones((4, 4)) - np.eye(4)
        rows, cols = hungarian_assign(cost)
        np.testing.assert_array_equal(cols[np.argsort(rows)], np.arange(4))

    def test_anti_diagonal(self):
        rows, cols = hungarian_assign(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert dict(zip(rows, cols)) == {0: 1, 1: 0}

    @pytest.mark.parametrize("shape", [(5, 5), (3, 6), (7, 4)])
    def test_brute_force(self, rng, shape):
        cost = rng.normal(size=shape)
        rows, cols = hungarian_assign(cost)
        assert cost[rows, cols].sum() == pytest.approx(brute_force_assignment_cost(cost),
                                                       abs=1e-12)


class TestHandCases:
    def test_accuracy(self):
        assert accuracy(A, A) == 1.0
        assert accuracy([2, 2, 0, 0], A) == 1.0
        assert accuracy(A, B) == 0.5

    def test_nmi(self):
        assert nmi([0, 1, 2, 0, 1, 2], [0, 1, 2, 0, 1, 2]) == pytest.approx(1.0, abs=1e-15)
        assert nmi([0, 0, 0, 0], A) == 0.0
        assert nmi(A, B) == pytest.approx(0.0, abs=1e-15)
        assert nmi([1, 1, 1], [0, 0, 0]) == 1.0

    def test_purity(self):
        assert purity(A, A) == 1.0
        assert purity([0, 0, 0, 0], A) == 0.5
        assert purity([0, 0, 0, 1], [0, 0, 1, 1]) == 0.75

    def test_pairs(self):
        assert pair_metrics(A, A) == (1.0, 1.0, 1.0, 1.0)
        assert pair_metrics(A, B) == (0.0, 0.0, 0.0, -0.5)

    def test_length_mismatch(self):
        for fn in (accuracy, nmi, purity, pair_metrics):
            with pytest.raises(InvalidInputError):
                fn([0, 1], [0, 1, 1])

    def test_report(self):
        report = evaluate(A, B).as_dict()
        assert tuple(report) == METRIC_KEYS


labelings = st.integers(2, 8).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 4), min_size=n, max_size=n),
    st.lists(st.integers(0, 4), min_size=n, max_size=n)))


class TestProperties:
    @settings(max_examples=1000)
    @given(labelings)
    def test_pair_loop_small(self, pair):
        pred, truth = pair
        got = pair_metrics(pred, truth)
        want = pair_metrics_loop(pred, truth)
        assert got[:3] == pytest.approx(want[:3], abs=0)
        assert got[3] == pytest.approx(want[3], abs=1e-12)

    @settings(max_examples=200)
    @given(labelings, st.permutations(range(5)), st.permutations(range(5)))
    def test_relabel_invariance(self, pair, pp, pt):
        pred, truth = pair
        p2 = [pp[c] for c in pred]
        t2 = [pt[c] for c in truth]
        a, b = evaluate(pred, truth).as_dict(), evaluate(p2, t2).as_dict()
        for key in METRIC_KEYS:
            assert a[key] == pytest.approx(b[key], abs=1e-12)

    @settings(max_examples=1000)
    @given(labelings)
    def test_ranges_and_f(self, pair):
        r = evaluate(*pair)
        for key in ("acc", "nmi", "purity", "precision", "recall", "f_score"):
            assert 0.0 <= getattr(r, key) <= 1.0
        assert -1.0 <= r.ari <= 1.0
        if r.precision > 0 and r.recall > 0:
            assert r.f_score == 2 * r.precision * r.recall / (r.precision + r.recall)

    def test_contingency_marginals(self, rng):
        pred, truth = rng.integers(4, size=50), rng.integers(3, size=50)
        t = contingency(pred, truth)
        np.testing.assert_array_equal(t.rows, t.counts.sum(axis=1))
        np.testing.assert_array_equal(t.cols, t.counts.sum(axis=0))
        assert t.total == 50 == t.counts.sum()

    def test_ari_chance_level(self, rng):
        vals = [pair_metrics(rng.integers(5, size=10_000), rng.integers(5, size=10_000))[3]
                for _ in range(100)]
        assert abs(np.mean(vals)) <= 0.01
