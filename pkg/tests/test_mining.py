import numpy as np
import pytest

from oracles import mst_edge_weights, rand_index_pairs
from pqdtw.codec import encode_dataset, train
from pqdtw.distance import dtw, euclidean
from pqdtw.mining import (
    adjusted_rand_index,
    agglomerative,
    cut_k,
    knn_classify,
    pairwise_matrix,
    rand_index,
    topk_accuracy,
)
from pqdtw.series import LabeledDataset


@pytest.fixture(scope="module")
def labeled(request):
    rng = np.random.default_rng(21)
    a = rng.standard_normal(24)
    b = rng.standard_normal(24) + 4
    rows = [a + 0.05 * rng.standard_normal(24) for _ in range(8)]
    rows += [b + 0.05 * rng.standard_normal(24) for _ in range(8)]
    return LabeledDataset(np.stack(rows), ["a"] * 8 + ["b"] * 8)


@pytest.fixture(scope="module")
def pq_model(labeled):
    cb = train(labeled, n_subspaces=3, n_centroids=6, tail=0, window=2, seed=2)
    return cb, encode_dataset(cb, labeled)


class TestKnnClassify:
    def test_self_query_every_measure(self, labeled):
        # lossless codebook (K = N, no tail): quantization is exact, so even
        # the PQ measures see a true zero on self-queries
        cb = train(labeled, n_subspaces=3, n_centroids=labeled.n, tail=0,
                   window=None, seed=2)
        codes = encode_dataset(cb, labeled)
        for measure in ("ed", "dtw", "pq-sym", "pq-asym"):
            res = knn_classify(
                labeled, labeled.values[2], k=1, measure=measure,
                codebook=cb, codes=codes,
            )
            label, d = res.neighbors[0]
            assert label == "a"
            assert d == pytest.approx(0.0, abs=1e-9)

    def test_pq_asym_ranking_matches_direct_aggregation(self, labeled, pq_model, rng):
        cb, codes = pq_model
        for _ in range(50):
            q = rng.standard_normal(24)
            res = knn_classify(
                labeled, q, k=labeled.n, measure="pq-asym", codebook=cb, codes=codes
            )
            segs = cb.segments(q)
            direct = [
                np.sqrt(
                    sum(
                        dtw(segs[m], cb.centroids[m, codes[i][m]], window=cb.window) ** 2
                        for m in range(cb.n_subspaces)
                    )
                )
                for i in range(labeled.n)
            ]
            order = np.argsort(direct, kind="stable")
            expected = [(labeled.labels[i], direct[i]) for i in order]
            for (lab, d), (elab, ed) in zip(res.neighbors, expected):
                assert lab == elab
                assert d == pytest.approx(ed, abs=1e-9)

    def test_ed_full_ranking_sorted(self, labeled):
        res = knn_classify(labeled, labeled.values[0], k=labeled.n, measure="ed")
        dists = [d for _, d in res.neighbors]
        assert dists == sorted(dists)
        assert len(res.neighbors) == labeled.n

    def test_k_too_large(self, labeled):
        with pytest.raises(ValueError):
            knn_classify(labeled, labeled.values[0], k=labeled.n + 1, measure="ed")

    def test_tie_break_by_training_index(self):
        values = np.array([[0.0, 1.0], [0.0, 1.0], [5.0, 6.0]])
        ds = LabeledDataset(values, ["first", "second", "far"])
        res = knn_classify(ds, np.array([0.0, 1.0]), k=2, measure="ed")
        assert res.neighbors[0][0] == "first"
        assert res.neighbors[1][0] == "second"


class TestPairwiseMatrix:
    def test_duplicate_series_zero_entry(self):
        x = np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [4.0, 4.0, 4.0]])
        mat = pairwise_matrix(x, "dtw")
        assert mat[0, 1] == 0.0

    def test_matches_elementwise_calls(self, rng):
        x = rng.standard_normal((6, 12))
        mat_dtw = pairwise_matrix(x, "dtw", window=3)
        mat_ed = pairwise_matrix(x, "ed")
        for i in range(6):
            for j in range(6):
                if i == j:
                    continue
                assert mat_dtw[i, j] == pytest.approx(
                    dtw(x[i], x[j], window=3), abs=1e-9
                )
                assert mat_ed[i, j] == pytest.approx(euclidean(x[i], x[j]), abs=1e-9)

    def test_symmetry_exact(self, rng):
        x = rng.standard_normal((7, 10))
        mat = pairwise_matrix(x, "dtw")
        assert np.array_equal(mat, mat.T)
        assert np.all(np.diag(mat) == 0.0)

    def test_pq_sym_matches_per_pair_distance(self, labeled, pq_model):
        from pqdtw.codec import sym_distance

        cb, codes = pq_model
        mat = pairwise_matrix(labeled, "pq-sym", codebook=cb, codes=codes)
        for i in (0, 5):
            for j in (3, 12):
                assert mat[i, j] == pytest.approx(
                    sym_distance(cb, codes[i], codes[j]), abs=1e-12
                )

    def test_pq_sym_lb_replace_at_least_plain(self, labeled, pq_model):
        cb, codes = pq_model
        plain = pairwise_matrix(labeled, "pq-sym", codebook=cb, codes=codes)
        replaced = pairwise_matrix(
            labeled, "pq-sym", codebook=cb, codes=codes, lb_replace=True
        )
        off = ~np.eye(labeled.n, dtype=bool)
        assert np.all(replaced[off] >= plain[off] - 1e-12)

    def test_pq_asym_rejected(self, labeled, pq_model):
        cb, codes = pq_model
        with pytest.raises(ValueError, match="symmetric"):
            pairwise_matrix(labeled, "pq-asym", codebook=cb, codes=codes)


class TestAgglomerative:
    def test_two_points(self):
        dend = agglomerative(np.array([[0.0, 2.5], [2.5, 0.0]]), "single")
        assert dend.merges == ((0, 1, 2.5, 2),)

    def test_three_point_complete_by_hand(self):
        mat = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
        dend = agglomerative(mat, "complete")
        assert dend.merges == ((0, 1, 1.0, 2), (2, 3, 3.0, 3))

    def test_three_point_single_by_hand(self):
        mat = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
        dend = agglomerative(mat, "single")
        assert dend.merges == ((0, 1, 1.0, 2), (2, 3, 2.0, 3))

    def test_average_linkage_by_hand(self):
        mat = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 4.0], [2.0, 4.0, 0.0]])
        dend = agglomerative(mat, "average")
        assert dend.merges[0] == (0, 1, 1.0, 2)
        assert dend.merges[1] == (2, 3, 3.0, 3)

    def test_heights_non_decreasing(self, rng):
        points = rng.standard_normal((12, 2))
        mat = np.sqrt(((points[:, None] - points[None, :]) ** 2).sum(-1))
        for linkage in ("single", "average", "complete"):
            dend = agglomerative(mat, linkage)
            heights = [h for _, _, h, _ in dend.merges]
            assert all(x <= y + 1e-12 for x, y in zip(heights, heights[1:]))

    def test_single_linkage_equals_mst(self, rng):
        points = rng.standard_normal((10, 3))
        mat = np.sqrt(((points[:, None] - points[None, :]) ** 2).sum(-1))
        dend = agglomerative(mat, "single")
        heights = sorted(h for _, _, h, _ in dend.merges)
        assert np.allclose(heights, mst_edge_weights(mat), atol=1e-9)

    def test_too_small(self):
        with pytest.raises(ValueError):
            agglomerative(np.zeros((1, 1)), "single")


class TestCutK:
    @pytest.fixture()
    def dend(self):
        mat = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
        return agglomerative(mat, "complete")

    def test_k_equals_n(self, dend):
        assert cut_k(dend, 3).tolist() == [0, 1, 2]

    def test_k_one(self, dend):
        assert cut_k(dend, 1).tolist() == [0, 0, 0]

    def test_k_two_matches_merge_order(self, dend):
        labels = cut_k(dend, 2)
        assert labels[0] == labels[1] != labels[2]

    def test_always_k_nonempty_clusters(self, rng):
        points = rng.standard_normal((15, 2))
        mat = np.sqrt(((points[:, None] - points[None, :]) ** 2).sum(-1))
        dend = agglomerative(mat, "average")
        for k in range(1, 16):
            labels = cut_k(dend, k)
            assert len(set(labels.tolist())) == k

    def test_out_of_range(self, dend):
        with pytest.raises(ValueError):
            cut_k(dend, 4)


class TestRandIndex:
    def test_identical(self):
        assert rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
        assert adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0

    def test_crossed_pairs(self):
        assert rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(2 / 6)

    def test_matches_pair_enumeration(self, rng):
        for _ in range(50):
            n = int(rng.integers(4, 20))
            pred = rng.integers(0, 4, n).tolist()
            truth = rng.integers(0, 3, n).tolist()
            assert rand_index(pred, truth) == pytest.approx(
                rand_index_pairs(pred, truth), abs=1e-12
            )

    def test_ari_random_mean_near_zero(self, rng):
        truth = [i // 10 for i in range(40)]
        values = []
        for _ in range(300):
            pred = rng.permutation(truth).tolist()
            values.append(adjusted_rand_index(pred, truth))
        assert abs(np.mean(values)) < 0.02

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rand_index([0, 1], [0, 1, 2])


class TestTopkAccuracy:
    def test_dedup_by_label(self, labeled):
        res = knn_classify(labeled, labeled.values[0], k=labeled.n, measure="ed")
        # 8 'a' neighbours come first, so top-1 and top-2 distinct labels
        # are ['a'] and ['a', 'b']
        assert res.top_labels(1) == ["a"]
        assert res.top_labels(2) == ["a", "b"]
        acc = topk_accuracy([res], ["b"], (1, 2))
        assert acc[1] == 0.0 and acc[2] == 1.0
