"""Rank-distance nearest neighbors against an exact brute-force oracle."""

import numpy as np
import pytest

from bucket_ensemble import RankKNNClassifier
from bucket_ensemble.errors import ConfigError
from conftest import oracle_knn

TRAIN_X = np.array([
    [1.0, 2.0, 3.0],
    [3.0, 2.0, 1.0],
    [2.0, 1.0, 3.0],
    [1.0, 3.0, 2.0],
])
TRAIN_Y = np.array([1, 1, -1, -1])


def test_three_neighbor_hand_example():
    # query [1,2,3]: distances 0 (row 0), 2 (row 1), 0.5 (rows 2 and 3,
    # an exact tie resolved toward the lower index). Top 3 are rows
    # 0, 2, 3 with labels +1, -1, -1.
    model = RankKNNClassifier(n_neighbors=3, distance="spearman").fit(TRAIN_X, TRAIN_Y)
    q = np.array([[1.0, 2.0, 3.0]])
    assert model.predict(q)[0] == -1
    assert model.predict_proba(q)[0, 1] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_tied_vote_goes_to_nearest_neighbor():
    model = RankKNNClassifier(n_neighbors=4, distance="spearman").fit(TRAIN_X, TRAIN_Y)
    q = np.array([[1.0, 2.0, 3.0]])
    # 2 votes each way; the single nearest row is row 0 with label +1
    assert model.predict(q)[0] == 1
    assert model.predict_proba(q)[0, 1] == pytest.approx(0.5, abs=1e-12)


def test_duplicate_rows_resolve_to_lowest_index():
    X = np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [9.0, 1.0, 5.0]])
    y = np.array([-1, 1, 1])
    model = RankKNNClassifier(n_neighbors=1, distance="spearman").fit(X, y)
    assert model.predict([[1.0, 2.0, 3.0]])[0] == -1


def test_exact_training_row_is_its_own_neighbor():
    model = RankKNNClassifier(n_neighbors=1, distance="correlation").fit(TRAIN_X, TRAIN_Y)
    assert np.array_equal(model.predict(TRAIN_X), TRAIN_Y)


def test_matches_brute_force_oracle():
    rng = np.random.default_rng(0)
    for trial in range(30):
        n = int(rng.integers(8, 40))
        d = int(rng.integers(4, 12))
        k = min(int(rng.integers(1, 6)), n)
        kind = "spearman" if trial % 2 == 0 else "correlation"
        X = rng.normal(size=(n, d))
        y = np.where(rng.random(n) < 0.5, 1, -1)
        if len(set(y.tolist())) < 2:
            continue
        Q = rng.normal(size=(8, d))
        model = RankKNNClassifier(n_neighbors=k, distance=kind).fit(X, y)
        dec, score = model.predict(Q), model.predict_proba(Q)
        odec, oscore = oracle_knn(X, y, Q, k, kind)
        assert np.array_equal(dec, odec)
        chosen = np.where(dec == 1, score[:, 1], score[:, 0])
        assert np.allclose(chosen, oscore, atol=1e-12)


def test_spearman_decisions_invariant_under_monotone_transforms():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(20, 6))
    y = np.where(rng.random(20) < 0.5, 1, -1)
    y[:2] = [1, -1]
    Q = rng.normal(size=(10, 6))
    base = RankKNNClassifier(n_neighbors=3, distance="spearman").fit(X, y)
    want_dec = base.predict(Q)
    want_proba = base.predict_proba(Q)
    for fwd in (np.exp, lambda v: v**3, lambda v: 5.0 * v - 11.0):
        model = RankKNNClassifier(n_neighbors=3, distance="spearman").fit(fwd(X), y)
        assert np.array_equal(model.predict(fwd(Q)), want_dec)
        assert np.array_equal(model.predict_proba(fwd(Q)), want_proba)


def test_half_votes_score_for_even_k():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(12, 5))
    y = np.array([1, -1] * 6)
    model = RankKNNClassifier(n_neighbors=4, distance="correlation").fit(X, y)
    proba = model.predict_proba(rng.normal(size=(20, 5)))
    # scores are quarters of k
    assert set(np.round(proba[:, 1] * 4).astype(int).tolist()).issubset({0, 1, 2, 3, 4})


def test_validation_errors():
    with pytest.raises(ConfigError):
        RankKNNClassifier(n_neighbors=5).fit(TRAIN_X, TRAIN_Y)
    with pytest.raises(ConfigError):
        RankKNNClassifier(n_neighbors=0).fit(TRAIN_X, TRAIN_Y)
    with pytest.raises(ConfigError):
        RankKNNClassifier(distance="euclidean").fit(TRAIN_X, TRAIN_Y)
    with pytest.raises(ConfigError):
        RankKNNClassifier().fit(TRAIN_X[:, :1], TRAIN_Y)
    with pytest.raises(ConfigError):
        RankKNNClassifier().predict(TRAIN_X)
    model = RankKNNClassifier(n_neighbors=2, distance="spearman").fit(TRAIN_X, TRAIN_Y)
    with pytest.raises(ConfigError):
        model.predict(np.ones((2, 5)))
