import os

import numpy as np
import pytest

from helu import data
from helu.errors import DataError, ParseError

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


class TestGenerators:
    def test_zero_spread_collapses_to_k_points(self):
        ds = data.gen_blobs(100, 2, 4, 0.0, seed=5)
        uniq = np.unique(ds.features, axis=0)
        assert uniq.shape == (4, 2)
        counts = np.bincount(ds.labels)
        assert np.array_equal(counts, [25, 25, 25, 25])

    def test_same_seed_identical(self):
        a = data.gen_blobs(60, 3, 3, 1.0, seed=9)
        b = data.gen_blobs(60, 3, 3, 1.0, seed=9)
        assert a.features.tobytes() == b.features.tobytes()
        assert np.array_equal(a.labels, b.labels)
        a = data.gen_spirals(60, 3, 0.1, seed=9)
        b = data.gen_spirals(60, 3, 0.1, seed=9)
        assert a.features.tobytes() == b.features.tobytes()

    def test_class_balance_within_one(self):
        for n in (100, 101, 103):
            ds = data.gen_spirals(n, 3, 0.1, seed=1)
            counts = np.bincount(ds.labels)
            assert counts.max() - counts.min() <= 1
            assert counts.sum() == n

    def test_spirals_not_linearly_separable(self):
        # A linear classifier caps well below an MLP on the same split.
        from sklearn.linear_model import LogisticRegression

        from helu import activations as act
        from helu import nn

        ds = data.gen_spirals(400, 3, 0.0, seed=7)
        tr, te = data.split(ds, 0.75, seed=7)
        linear = LogisticRegression(max_iter=2000).fit(tr.features, tr.labels)
        linear_acc = linear.score(te.features, te.labels)
        model = nn.init([2, 32, 32, 3], seed=7, activation=act.relu())
        nn.train(model, tr, nn.TrainConfig(learning_rate=0.05, epochs=120, seed=7))
        mlp_acc = nn.evaluate(model, te)
        assert linear_acc < mlp_acc


class TestSplit:
    def test_partition_disjoint_exhaustive(self):
        ds = data.gen_blobs(101, 2, 3, 1.0, seed=3)
        tr, te = data.split(ds, 0.7, seed=3)
        assert tr.n + te.n == ds.n
        all_rows = {tuple(r) for r in ds.features}
        tr_rows = {tuple(r) for r in tr.features}
        te_rows = {tuple(r) for r in te.features}
        assert tr_rows | te_rows == all_rows
        assert not tr_rows & te_rows

    def test_bad_fraction(self):
        ds = data.gen_blobs(10, 2, 2, 1.0, seed=0)
        with pytest.raises(DataError):
            data.split(ds, 1.0, seed=0)


class TestCsv:
    def _write(self, tmp_path, text):
        p = tmp_path / "data.csv"
        p.write_text(text)
        return p

    def test_happy_path(self, tmp_path):
        p = self._write(tmp_path, "x,label,y\n1.0,0,2.0\n3.5,1,4.5\n")
        ds = data.load_csv(p, "label")
        assert np.array_equal(ds.features, [[1.0, 2.0], [3.5, 4.5]])
        assert np.array_equal(ds.labels, [0, 1])
        assert ds.n_classes == 2

    def test_missing_label_column(self, tmp_path):
        p = self._write(tmp_path, "x,y\n1.0,2.0\n")
        with pytest.raises(DataError, match="no column"):
            data.load_csv(p, "label")

    def test_bad_row_reports_line_number(self, tmp_path):
        p = self._write(tmp_path, "x,label\n1.0,0\nbad,1\n")
        with pytest.raises(ParseError, match="line 3"):
            data.load_csv(p, "label")

    def test_wrong_field_count_reports_line(self, tmp_path):
        p = self._write(tmp_path, "x,label\n1.0,0,9\n")
        with pytest.raises(ParseError, match="line 2"):
            data.load_csv(p, "label")

    def test_empty_file(self, tmp_path):
        p = self._write(tmp_path, "")
        with pytest.raises(ParseError, match="line 1"):
            data.load_csv(p, "label")

    def test_negative_label(self, tmp_path):
        p = self._write(tmp_path, "x,label\n1.0,-1\n")
        with pytest.raises(DataError):
            data.load_csv(p, "label")


class TestIdx:
    def test_fixture_reproduces_exact_pixels(self):
        ds = data.load_idx(
            os.path.join(FIXTURES, "images-2x3x3.idx"),
            os.path.join(FIXTURES, "labels-2.idx"),
        )
        expected0 = np.array([0, 128, 255, 10, 20, 30, 40, 50, 60]) / 255.0
        expected1 = np.array([255, 0, 5, 9, 99, 199, 1, 2, 3]) / 255.0
        assert ds.features.shape == (2, 9)
        assert np.array_equal(ds.features[0], expected0)
        assert np.array_equal(ds.features[1], expected1)
        assert np.array_equal(ds.labels, [7, 2])
        assert ds.n_classes == 8

    def test_bad_magic_reports_offset(self, tmp_path):
        p = tmp_path / "bad.idx"
        p.write_bytes(b"\x00\x00\x08\x99" + b"\x00" * 12)
        with pytest.raises(ParseError, match="byte 0"):
            data.load_idx(p, os.path.join(FIXTURES, "labels-2.idx"))

    def test_truncated_pixels(self, tmp_path):
        src = open(os.path.join(FIXTURES, "images-2x3x3.idx"), "rb").read()
        p = tmp_path / "cut.idx"
        p.write_bytes(src[:-4])
        with pytest.raises(ParseError, match="pixel"):
            data.load_idx(p, os.path.join(FIXTURES, "labels-2.idx"))

    def test_count_mismatch(self, tmp_path):
        import struct

        p = tmp_path / "labels1.idx"
        p.write_bytes(struct.pack(">II", 0x00000801, 1) + bytes([3]))
        with pytest.raises(DataError, match="images but"):
            data.load_idx(os.path.join(FIXTURES, "images-2x3x3.idx"), p)


class TestStandardize:
    def test_zero_mean_unit_variance(self):
        ds = data.gen_blobs(200, 4, 3, 2.0, seed=12)
        out = data.standardize(ds)
        np.testing.assert_allclose(out.features.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(out.features.std(axis=0), 1.0, atol=1e-12)

    def test_constant_column_survives(self):
        ds = data.Dataset(np.array([[1.0, 5.0], [2.0, 5.0]]), np.array([0, 1]), 2)
        out = data.standardize(ds)
        assert np.all(np.isfinite(out.features))
        assert np.array_equal(out.features[:, 1], [0.0, 0.0])


class TestDatasetValidation:
    def test_label_out_of_range(self):
        with pytest.raises(DataError):
            data.Dataset(np.ones((2, 2)), np.array([0, 2]), 2)

    def test_non_finite_features(self):
        with pytest.raises(DataError):
            data.Dataset(np.array([[np.inf, 0.0]]), np.array([0]), 1)

    def test_empty(self):
        with pytest.raises(DataError):
            data.Dataset(np.zeros((0, 2)), np.zeros(0, dtype=int), 1)
