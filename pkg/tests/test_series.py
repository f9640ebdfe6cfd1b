import numpy as np
import pytest

from pqdtw.series import (
    LabeledDataset,
    ParseError,
    as_series,
    load_ucr_tsv,
    resample_linear,
    save_ucr_tsv,
    z_normalize,
)


class TestZNormalize:
    def test_simple_ramp(self):
        out = z_normalize([1, 2, 3])
        assert out == pytest.approx([-1.2247, 0.0, 1.2247], abs=1e-4)

    def test_constant_maps_to_zeros(self):
        assert np.array_equal(z_normalize([5, 5, 5]), [0.0, 0.0, 0.0])

    def test_idempotent(self, rng):
        s = rng.standard_normal(50)
        once = z_normalize(s)
        assert np.allclose(z_normalize(once), once, atol=1e-9)

    def test_mean_zero_std_one(self, rng):
        out = z_normalize(rng.standard_normal(64) * 7 + 3)
        assert out.mean() == pytest.approx(0.0, abs=1e-12)
        assert out.std() == pytest.approx(1.0, abs=1e-12)


class TestResampleLinear:
    def test_midpoint(self):
        assert np.allclose(resample_linear([0, 1], 3), [0, 0.5, 1])

    def test_identity_is_exact(self, rng):
        s = rng.standard_normal(17)
        assert np.array_equal(resample_linear(s, 17), s)

    def test_uniform_grid(self):
        assert np.allclose(resample_linear([0, 3], 4), [0, 1, 2, 3])

    def test_endpoints_preserved(self, rng):
        s = rng.standard_normal(29)
        out = resample_linear(s, 12)
        assert out[0] == s[0] and out[-1] == s[-1]

    def test_linear_ramp_roundtrip(self):
        ramp = np.linspace(-2.0, 5.0, 9)
        up = resample_linear(ramp, 18)
        assert np.allclose(resample_linear(up, 9), ramp, atol=1e-12)

    def test_target_too_small(self):
        with pytest.raises(ValueError):
            resample_linear([0, 1, 2], 1)


class TestSeriesValidation:
    def test_rejects_short(self):
        with pytest.raises(ValueError):
            as_series([1.0])

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            as_series([1.0, np.nan])


class TestUcrTsv:
    def test_parse(self, tmp_path):
        p = tmp_path / "d.tsv"
        p.write_text("1\t0.0\t1.0\n2\t1.0\t0.0\n")
        ds = load_ucr_tsv(p)
        assert ds.n == 2 and ds.length == 2
        assert ds.labels == ["1", "2"]

    def test_empty_file(self, tmp_path):
        p = tmp_path / "e.tsv"
        p.write_text("")
        with pytest.raises(ParseError, match="empty"):
            load_ucr_tsv(p)

    def test_ragged_row_names_line(self, tmp_path):
        p = tmp_path / "r.tsv"
        p.write_text("1\t0.0\t1.0\n2\t1.0\t0.0\t3.0\n")
        with pytest.raises(ParseError, match="line 2"):
            load_ucr_tsv(p)

    def test_non_numeric_names_line(self, tmp_path):
        p = tmp_path / "n.tsv"
        p.write_text("1\t0.0\tfoo\n")
        with pytest.raises(ParseError, match="line 1"):
            load_ucr_tsv(p)

    def test_roundtrip(self, tmp_path, rng):
        ds = LabeledDataset(rng.standard_normal((5, 8)), list("abcde"))
        p = tmp_path / "rt.tsv"
        save_ucr_tsv(ds, p)
        back = load_ucr_tsv(p)
        assert np.array_equal(back.values, ds.values)
        assert back.labels == ds.labels


class TestLabeledDataset:
    def test_label_count_mismatch(self, rng):
        with pytest.raises(ValueError):
            LabeledDataset(rng.standard_normal((3, 4)), ["a", "b"])

    def test_normalized(self, rng):
        ds = LabeledDataset(rng.standard_normal((4, 16)) * 3 + 1).normalized()
        assert np.allclose(ds.values.mean(axis=1), 0, atol=1e-12)
