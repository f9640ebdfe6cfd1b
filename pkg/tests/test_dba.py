import numpy as np
import pytest

from pqdtw.dba import dba_barycenter, dba_kmeans
from pqdtw.distance import dtw


class TestDbaBarycenter:
    def test_fixed_point_of_duplicates(self):
        x = np.array([5.0, 7.0, 6.0])
        out = dba_barycenter(np.stack([x, x]), np.zeros(3))
        assert np.array_equal(out, x)

    def test_two_constant_members(self):
        out = dba_barycenter(np.array([[0.0, 0.0], [2.0, 2.0]]), np.array([0.0, 0.0]))
        assert np.array_equal(out, [1.0, 1.0])

    def test_single_member(self, rng):
        x = rng.standard_normal(12)
        assert np.array_equal(dba_barycenter(x[None, :], x), x)

    def test_empty_members(self):
        with pytest.raises(ValueError):
            dba_barycenter(np.empty((0, 4)), np.zeros(4))

    def test_output_length(self, rng):
        members = rng.standard_normal((6, 20))
        out = dba_barycenter(members, members[0])
        assert out.shape == (20,)

    def test_reduces_inertia(self, rng):
        members = rng.standard_normal((8, 16))
        init = members.mean(axis=0)
        before = sum(dtw(m, init) ** 2 for m in members)
        center = dba_barycenter(members, init, max_iter=5)
        after = sum(dtw(m, center) ** 2 for m in members)
        assert after <= before + 1e-9


class TestDbaKmeans:
    def test_k_equals_n_distinct(self, rng):
        data = rng.standard_normal((6, 10))
        model = dba_kmeans(data, 6, seed=3)
        assert model.inertia == 0.0
        assert sorted(model.assignments.tolist()) == list(range(6))

    def test_k_one_is_barycenter(self, rng):
        data = rng.standard_normal((5, 12))
        model = dba_kmeans(data, 1, seed=0)
        assert model.centroids.shape == (1, 12)
        assert np.array_equal(model.assignments, np.zeros(5, dtype=np.int64))

    def test_separated_groups_recovered(self):
        a = np.tile([0.0, 0.0, 1.0, 0.0], (5, 1))
        b = np.tile([9.0, 9.0, 10.0, 9.0], (5, 1))
        model = dba_kmeans(np.vstack([a, b]), 2, seed=11)
        first, second = model.assignments[:5], model.assignments[5:]
        assert len(set(first.tolist())) == 1
        assert len(set(second.tolist())) == 1
        assert first[0] != second[0]
        assert model.inertia == 0.0

    def test_inertia_non_increasing(self, rng):
        data = rng.standard_normal((24, 16))
        model = dba_kmeans(data, 4, seed=5)
        hist = model.inertia_history
        assert all(a >= b - 1e-9 for a, b in zip(hist, hist[1:]))

    def test_seed_reproducible_bitwise(self, rng):
        data = rng.standard_normal((15, 12))
        m1 = dba_kmeans(data, 3, seed=42)
        m2 = dba_kmeans(data, 3, seed=42)
        assert np.array_equal(m1.centroids, m2.centroids)
        assert np.array_equal(m1.assignments, m2.assignments)
        assert m1.inertia == m2.inertia

    def test_centroid_length_matches_input(self, rng):
        data = rng.standard_normal((10, 18))
        model = dba_kmeans(data, 2, seed=1)
        assert model.centroids.shape == (2, 18)

    def test_k_larger_than_n(self, rng):
        with pytest.raises(ValueError):
            dba_kmeans(rng.standard_normal((3, 8)), 4)

    def test_duplicate_heavy_data_survives_empty_clusters(self):
        # fewer distinct points than clusters forces duplicate centroids and
        # empty-cluster re-seeding; the fit must still terminate cleanly
        a = np.array([0.0, 0.0, 1.0, 0.0])
        b = np.array([6.0, 6.0, 7.0, 6.0])
        data = np.stack([a, a, a, a, b])
        model = dba_kmeans(data, 3, seed=2)
        assert model.inertia == 0.0
        assert model.assignments.shape == (5,)
        assert np.all((model.assignments >= 0) & (model.assignments < 3))

    def test_assignments_are_nearest(self, rng):
        data = rng.standard_normal((20, 10))
        model = dba_kmeans(data, 3, seed=9, window=2)
        for i, row in enumerate(data):
            dists = [dtw(row, c, window=2) for c in model.centroids]
            assert dists[model.assignments[i]] == pytest.approx(min(dists), abs=1e-12)
