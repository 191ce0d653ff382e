import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anchormvc.bipartite import (ComponentLabeling, connected_components,
                                 count_zero_eigs, degrees, labels_from_components,
                                 normalized_affinity, shared_graph)
from oracles import (bfs_components, laplacian_zero_multiplicity, random_block_graph,
                     random_simplex_graph)

seeds = st.integers(0, 2**32 - 1)


def h_singulars(zbar):
    return np.linalg.svd(normalized_affinity(zbar, degrees(zbar)), compute_uv=False)


class TestSharedGraph:
    def test_single_view(self, rng):
        z = random_simplex_graph(rng, 5, 4)
        np.testing.assert_array_equal(shared_graph(z[:, None, :]), z)

    def test_identical_views(self, rng):
        z = random_simplex_graph(rng, 5, 4)
        np.testing.assert_allclose(shared_graph(np.stack([z, z], axis=1)), z, atol=1e-15)

    def test_one_hot_average(self):
        z = np.zeros((1, 2, 3))
        z[0, 0, 0] = z[0, 1, 1] = 1.0
        np.testing.assert_array_equal(shared_graph(z), [[0.5, 0.5, 0.0]])

    @settings(max_examples=1000)
    @given(seeds, st.integers(1, 8), st.integers(1, 4), st.integers(1, 6))
    def test_preserves_simplex_rows(self, seed, n, v, m):
        r = np.random.default_rng(seed)
        z = np.stack([random_simplex_graph(r, n, m) for _ in range(v)], axis=1)
        zbar = shared_graph(z)
        assert np.all(zbar >= 0)
        np.testing.assert_allclose(zbar.sum(axis=1), 1.0, atol=1e-12)


class TestDegrees:
    def test_simplex_rows(self, rng):
        np.testing.assert_allclose(degrees(random_simplex_graph(rng, 6, 3)).dp, 1.0)

    def test_column_sum(self):
        deg = degrees(np.array([[1.0], [1.0]]))
        np.testing.assert_array_equal(deg.dp, [1, 1])
        np.testing.assert_array_equal(deg.dq, [2])

    def test_loop_oracle(self, rng):
        z = rng.random((5, 3))
        deg = degrees(z)
        for i in range(5):
            assert deg.dp[i] == pytest.approx(sum(z[i, j] for j in range(3)), abs=1e-12)
        for j in range(3):
            assert deg.dq[j] == pytest.approx(sum(z[i, j] for i in range(5)), abs=1e-12)

    def test_floor(self):
        deg = degrees(np.array([[1.0, 0.0]]))
        assert deg.dq[1] == 1e-12


class TestAffinity:
    def test_two_by_one(self):
        z = np.array([[1.0], [1.0]])
        h = normalized_affinity(z, degrees(z))
        np.testing.assert_allclose(h, [[2 ** -0.5], [2 ** -0.5]], atol=1e-15)
        assert np.linalg.svd(h, compute_uv=False)[0] == pytest.approx(1.0, abs=1e-15)

    def test_permutation(self):
        perm = np.eye(5)[[3, 0, 4, 1, 2]]
        np.testing.assert_array_equal(normalized_affinity(perm, degrees(perm)), perm)
        np.testing.assert_allclose(h_singulars(perm), 1.0)

    @settings(max_examples=1000)
    @given(seeds, st.integers(1, 12), st.integers(1, 8))
    def test_spectral_bound(self, seed, n, m):
        s = h_singulars(random_simplex_graph(np.random.default_rng(seed), n, m))
        assert 0 <= s[-1] and s[0] <= 1 + 1e-9


class TestZeroEigs:
    @pytest.mark.parametrize("blocks", [1, 2, 3, 5])
    def test_block_diagonal(self, rng, blocks):
        z = random_block_graph(rng, blocks)
        assert count_zero_eigs(h_singulars(z), 1e-6) == blocks
        assert laplacian_zero_multiplicity(z) == blocks

    def test_connected(self, rng):
        assert count_zero_eigs(h_singulars(rng.random((6, 4)) + 0.1)) == 1

    def test_tail_zeros(self):
        assert count_zero_eigs(np.array([1.0, 1.0 - 1e-8, 0.4, 0.0, 0.0]), 1e-6) == 2

    @settings(max_examples=1000)
    @given(seeds, st.integers(1, 6))
    def test_matches_components(self, seed, blocks):
        z = random_block_graph(np.random.default_rng(seed), blocks)
        count = connected_components(z, 1e-8).count
        assert count_zero_eigs(h_singulars(z), 1e-6) == count == blocks


class TestComponents:
    def test_three_blocks(self):
        z = np.zeros((6, 3))
        z[[0, 3], 1] = 1
        z[[1, 4], 0] = 1
        z[[2, 5], 2] = 1
        comp = connected_components(z)
        assert comp.count == 3
        np.testing.assert_array_equal(comp.sample_labels, [0, 1, 2, 0, 1, 2])
        np.testing.assert_array_equal(comp.anchor_labels, [1, 0, 2])

    def test_dense(self, rng):
        assert connected_components(rng.random((7, 5)) + 1e-3).count == 1

    def test_isolated_anchor(self):
        comp = connected_components(np.array([[1.0, 0.0], [1.0, 0.0]]))
        assert comp.count == 1
        np.testing.assert_array_equal(comp.anchor_labels, [0, -1])

    @settings(max_examples=1000)
    @given(seeds, st.integers(2, 10), st.integers(2, 8))
    def test_sparse_matches_oracles(self, seed, n, m):
        r = np.random.default_rng(seed)
        z = random_simplex_graph(r, n, m, density=0.25)
        z[z < 1e-4] = 0.0
        z /= z.sum(axis=1, keepdims=True)
        comp = connected_components(z, 1e-8)
        count, labels = bfs_components(z, 1e-8)
        assert comp.count == count
        np.testing.assert_array_equal(comp.sample_labels, labels)
        if np.all(z.sum(axis=0) > 0):
            assert laplacian_zero_multiplicity(z) == count
            assert count_zero_eigs(h_singulars(z), 1e-6) == count

    @settings(max_examples=1000)
    @given(seeds, st.integers(1, 5))
    def test_permutation_invariance(self, seed, blocks):
        r = np.random.default_rng(seed)
        z = random_block_graph(r, blocks)
        pr, pc = r.permutation(z.shape[0]), r.permutation(z.shape[1])
        a = connected_components(z).sample_labels
        b = connected_components(z[pr][:, pc]).sample_labels
        # same partition, read through the row permutation
        pairs = set(zip(a[pr].tolist(), b.tolist()))
        assert len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))

    def test_ids_contiguous_and_edges_respected(self, rng):
        z = random_block_graph(rng, 4)
        comp = connected_components(z)
        assert set(comp.sample_labels.tolist()) == set(range(comp.count))
        ii, jj = np.nonzero(z > 1e-8)
        np.testing.assert_array_equal(comp.sample_labels[ii], comp.anchor_labels[jj])


class TestLabels:
    def test_exact(self):
        comp = ComponentLabeling(np.array([0, 1, 1, 0]), np.array([0, 1]), 2)
        labels, exact = labels_from_components(comp, 2)
        assert exact
        np.testing.assert_array_equal(labels, [0, 1, 1, 0])

    def test_single_cluster(self):
        comp = ComponentLabeling(np.array([0, 1, 1]), np.array([0, 1]), 2)
        labels, exact = labels_from_components(comp, 1)
        assert not exact
        np.testing.assert_array_equal(labels, [0, 0, 0])
        comp1 = ComponentLabeling(np.zeros(3, int), np.zeros(2, int), 1)
        assert labels_from_components(comp1, 1)[1]

    def test_singleton_absorbed_by_affinity(self):
        # samples 0-2 on anchor 0, 3-5 on anchor 1, sample 6 alone on anchor 2
        z = np.zeros((7, 3))
        z[:3, 0] = z[3:6, 1] = z[6, 2] = 1.0
        comp = connected_components(z)
        assert comp.count == 3
        affinity = z.copy()
        affinity[6] = [0.1, 0.5, 0.4]
        labels, exact = labels_from_components(comp, 2, affinity)
        assert not exact
        np.testing.assert_array_equal(labels, [0, 0, 0, 1, 1, 1, 1])

    def test_fallback_to_largest(self):
        comp = ComponentLabeling(np.array([0, 0, 0, 1, 1, 2]), np.array([0, 1, 2]), 3)
        labels, exact = labels_from_components(comp, 2)
        np.testing.assert_array_equal(labels, [0, 0, 0, 1, 1, 0])

    def test_fewer_components(self):
        comp = ComponentLabeling(np.array([0, 0, 0]), np.array([0]), 1)
        labels, exact = labels_from_components(comp, 3)
        assert not exact
        np.testing.assert_array_equal(labels, [0, 0, 0])
