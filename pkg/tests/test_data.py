import numpy as np
import pytest

from adfsa import (
    DataError,
    FeatureMatrix,
    LabelVector,
    SyntheticSpec,
    generate_synthetic,
    load_features_csv,
    pearson,
    standardize,
    stratified_kfold,
    train_test_split,
)


def test_feature_matrix_rejects_nonfinite():
    with pytest.raises(DataError):
        FeatureMatrix(np.array([[1.0, np.nan]]))


def test_label_vector_requires_every_class_present():
    with pytest.raises(DataError, match="zero samples"):
        LabelVector(np.array([0, 0, 2]), n_classes=3)


class TestLoadCsv:
    def test_first_appearance_encoding(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("f0,f1,label\n1,2,a\n3,4,b\n5,6,a\n")
        X, y, mapping = load_features_csv(p, "label")
        assert X.values.shape == (3, 2)
        assert y.labels.tolist() == [0, 1, 0]
        assert y.n_classes == 2
        assert mapping == {"a": 0, "b": 1}

    def test_non_numeric_cell_reports_position(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("f0,f1,label\n1,NaN,a\n3,4,b\n")
        with pytest.raises(DataError, match="row 1, column 1"):
            load_features_csv(p, "label")

    def test_ragged_row(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("f0,f1,label\n1,2,a\n3,b\n")
        with pytest.raises(DataError, match="ragged"):
            load_features_csv(p, "label")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_features_csv(tmp_path / "absent.csv", "label")

    def test_missing_label_column(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("f0,f1\n1,2\n")
        with pytest.raises(DataError, match="label"):
            load_features_csv(p, "label")

    def test_full_scale_shape(self, tmp_path):
        # 1600 rows x 128 features
        rng = np.random.default_rng(0)
        rows = ["f" + ",f".join(str(j) for j in range(128)) + ",label"]
        vals = rng.standard_normal((1600, 128))
        labs = np.arange(1600) % 11
        for row, lab in zip(vals, labs):
            rows.append(",".join(f"{v:.4f}" for v in row) + f",c{lab}")
        p = tmp_path / "big.csv"
        p.write_text("\n".join(rows) + "\n")
        X, y, _ = load_features_csv(p, "label")
        assert X.values.shape == (1600, 128)
        assert y.n_classes == 11


class TestSplit:
    def test_forced_stratification(self):
        X = FeatureMatrix(np.arange(20.0).reshape(10, 2))
        y = LabelVector(np.array([0] * 5 + [1] * 5), 2)
        (tr, te) = train_test_split(X, y, 0.2, seed=7)
        (X_tr, y_tr), (X_te, y_te) = tr, te
        assert len(y_tr) == 8 and len(y_te) == 2
        assert y_te.class_counts().tolist() == [1, 1]

    def test_determinism(self):
        X = FeatureMatrix(np.arange(20.0).reshape(10, 2))
        y = LabelVector(np.array([0] * 5 + [1] * 5), 2)
        a = train_test_split(X, y, 0.2, seed=7)
        b = train_test_split(X, y, 0.2, seed=7)
        assert np.array_equal(a[0][0].values, b[0][0].values)
        assert np.array_equal(a[1][0].values, b[1][0].values)

    def test_80_20_on_1600(self):
        X = FeatureMatrix(np.zeros((1600, 2)) + np.arange(1600)[:, None])
        y = LabelVector(np.arange(1600) % 8, 8)
        (tr, _), (te, _2) = (None, None), (None, None)
        (X_tr, y_tr), (X_te, y_te) = train_test_split(X, y, 0.2, seed=0)
        assert X_tr.n_samples == 1280 and X_te.n_samples == 320

    def test_disjoint_exhaustive(self):
        X = FeatureMatrix(np.arange(60.0).reshape(30, 2))
        y = LabelVector(np.arange(30) % 3, 3)
        (X_tr, _), (X_te, _2) = train_test_split(X, y, 0.3, seed=1)
        seen = np.concatenate([X_tr.values[:, 0], X_te.values[:, 0]])
        assert sorted(seen.tolist()) == sorted(X.values[:, 0].tolist())

    def test_single_sample_class_rejected(self):
        X = FeatureMatrix(np.zeros((3, 1)))
        with pytest.raises(DataError):
            train_test_split(X, LabelVector(np.array([0, 0, 1]), 2), 0.5, 0)


class TestKfold:
    def test_one_per_class_per_fold(self):
        y = LabelVector(np.array([0, 1] * 5), 2)
        folds = stratified_kfold(y, 5, seed=0)
        for f in range(5):
            idx = folds.test_indices(f)
            assert idx.size == 2
            assert sorted(y.labels[idx].tolist()) == [0, 1]

    def test_balance_within_one(self):
        y = LabelVector(np.arange(103) % 4, 4)
        folds = stratified_kfold(y, 5, seed=3)
        for c in range(4):
            counts = [int(np.sum(y.labels[folds.test_indices(f)] == c))
                      for f in range(5)]
            assert max(counts) - min(counts) <= 1

    def test_fold_sizes_1600(self):
        y = LabelVector(np.arange(1600) % 8, 8)
        folds = stratified_kfold(y, 5, seed=0)
        sizes = [folds.test_indices(f).size for f in range(5)]
        assert sizes == [320] * 5

    def test_small_class_rejected(self):
        y = LabelVector(np.array([0, 0, 0, 1, 1, 1, 1, 1]), 2)
        with pytest.raises(DataError):
            stratified_kfold(y, 5, seed=0)

    def test_determinism(self):
        y = LabelVector(np.arange(40) % 4, 4)
        a = stratified_kfold(y, 5, seed=9).fold_of_sample
        b = stratified_kfold(y, 5, seed=9).fold_of_sample
        assert np.array_equal(a, b)


class TestStandardize:
    def test_hand_computed_zscores(self):
        X = FeatureMatrix(np.array([[1.0], [2.0], [3.0]]))
        Z, mean, std = standardize(X)
        np.testing.assert_allclose(Z.values[:, 0], [-1.2247448, 0.0, 1.2247448],
                                   atol=1e-6)
        assert mean[0] == 2.0

    def test_zero_variance_column(self):
        X = FeatureMatrix(np.array([[5.0], [5.0], [5.0]]))
        Z, mean, std = standardize(X)
        assert np.all(Z.values == 0.0)
        assert std[0] == 1.0

    def test_test_row_at_train_mean_maps_to_zero(self):
        X = FeatureMatrix(np.array([[1.0, 4.0], [3.0, 8.0]]))
        probe = FeatureMatrix(np.array([[2.0, 6.0]]))
        Z, P, mean, std = standardize(X, probe)
        np.testing.assert_allclose(P.values, 0.0, atol=1e-12)

    def test_round_trip(self):
        rng = np.random.default_rng(4)
        X = FeatureMatrix(rng.standard_normal((20, 5)) * 3 + 1)
        Z, mean, std = standardize(X)
        back = Z.values * std + mean
        np.testing.assert_allclose(back, X.values, rtol=1e-9)


class TestSynthetic:
    def test_full_scale_shape_and_truth(self):
        spec = SyntheticSpec(400, 128, 7, 20, 11)
        X, y, truth = generate_synthetic(spec, 1)
        assert X.values.shape == (400, 128)
        assert len(truth) == 7
        assert y.n_classes == 11

    def test_rho_one_gives_exact_correlation(self):
        spec = SyntheticSpec(100, 10, 2, 3, 2, redundancy_rho=1.0)
        X, y, truth = generate_synthetic(spec, 5)
        others = [j for j in range(10) if j not in truth]
        exact = 0
        for j in others:
            for i in truth:
                r = pearson(X.values[:, j], X.values[:, i])
                if abs(abs(r) - 1.0) < 1e-12:
                    exact += 1
        assert exact >= 3  # each redundant column matches its source exactly

    def test_rho_target_approximate(self):
        spec = SyntheticSpec(2000, 6, 1, 4, 2, redundancy_rho=0.6)
        X, y, truth = generate_synthetic(spec, 2)
        src = truth[0]
        rs = [abs(pearson(X.values[:, j], X.values[:, src]))
              for j in range(6) if j != src and j != 5]
        # 4 redundant columns; sample correlation near the 0.6 target
        close = [r for r in rs if abs(r - 0.6) < 0.1]
        assert len(close) >= 3

    def test_determinism(self):
        spec = SyntheticSpec(50, 12, 3, 2, 3)
        a = generate_synthetic(spec, 11)
        b = generate_synthetic(spec, 11)
        assert np.array_equal(a[0].values, b[0].values)
        assert np.array_equal(a[1].labels, b[1].labels)
        assert a[2] == b[2]

    def test_separable_data_knn_oracle(self):
        from adfsa import ClassifierSpec, fit, predict
        spec = SyntheticSpec(60, 2, 2, 0, 2, noise_std=0.05)
        X, y, truth = generate_synthetic(spec, 3)
        model = fit(ClassifierSpec("knn", knn_k=1), X, y)
        assert model.train_accuracy == 1.0

    def test_spec_violations(self):
        with pytest.raises(DataError):
            SyntheticSpec(10, 5, 4, 3, 2)
        with pytest.raises(DataError):
            SyntheticSpec(10, 5, 2, 0, 1)
        with pytest.raises(DataError):
            SyntheticSpec(10, 5, 2, 0, 2, redundancy_rho=0.0)
