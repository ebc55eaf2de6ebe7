import itertools
import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from vizrec._rng import substream
from vizrec.errors import ValidationError
from vizrec.models import (
    GaussianNaiveBayes,
    KNearestNeighbors,
    L1LogisticRegression,
    ModelSpec,
    NeuralNetwork,
    RandomForest,
    gradient_check,
    load_model,
    mdi_importances,
    model_from_document,
    model_to_document,
    save_model,
    train_model,
)


def _nb_oracle(X_train, y_train, x, classes, var_smoothing=1e-9):
    """Independent Gaussian NB: direct density evaluation per class."""
    X_train = np.asarray(X_train, dtype=float)
    eps = var_smoothing * max(X_train.var(axis=0).max(), 1e-12)
    best, best_score = None, -np.inf
    for c in classes:
        rows = X_train[np.array([yy == c for yy in y_train])]
        prior = len(rows) / len(X_train)
        mean = rows.mean(axis=0)
        var = rows.var(axis=0) + eps
        log_lik = math.log(prior) + float(
            np.sum(-0.5 * np.log(2 * np.pi * var) - (x - mean) ** 2 / (2 * var))
        )
        if log_lik > best_score:
            best, best_score = c, log_lik
    return best


def _knn_oracle(X_train, y_train, x, k, classes):
    """Brute-force KNN with the documented tie-breaks."""
    d = [float(np.sum((np.asarray(r) - x) ** 2)) for r in X_train]
    order = sorted(range(len(d)), key=lambda i: (d[i], classes.index(y_train[i]), i))
    votes = [y_train[i] for i in order[:k]]
    return max(classes, key=lambda c: (votes.count(c), -classes.index(c)))


def _random_cases(n_cases, seed):
    rng = substream(seed, "cases")
    for case in range(n_cases):
        n = int(rng.integers(2, 7))
        d = int(rng.integers(1, 4))
        n_classes = int(rng.integers(2, 4))
        classes = ["a", "b", "c"][:n_classes]
        while True:
            y = [classes[int(rng.integers(n_classes))] for _ in range(n)]
            if len(set(y)) >= 2:
                break
        X = rng.normal(size=(n, d))
        queries = rng.normal(size=(3, d))
        yield X, y, [c for c in classes if c in set(y)] or classes, queries


class TestNaiveBayes:
    def test_matches_oracle_exhaustively(self):
        for X, y, classes, queries in _random_cases(120, seed=1):
            model = GaussianNaiveBayes(classes=classes).fit(X, y)
            for q in queries:
                assert model.predict([q])[0] == _nb_oracle(X, y, q, classes)

    def test_hand_case(self):
        model = GaussianNaiveBayes(classes=["A", "B"]).fit(
            [[0.0], [0.1], [1.0], [1.1]], ["A", "A", "B", "B"]
        )
        assert model.predict([[0.05]])[0] == "A"

    def test_probabilities_sum_to_one(self):
        rng = substream(2, "nb")
        X = rng.normal(size=(30, 4))
        y = ["a" if v < 0 else "b" for v in X[:, 0]]
        model = GaussianNaiveBayes(classes=["a", "b"]).fit(X, y)
        proba = model.predict_proba(rng.normal(size=(10, 4)))
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


class TestKNN:
    def test_matches_oracle_exhaustively(self):
        for X, y, classes, queries in _random_cases(120, seed=3):
            model = KNearestNeighbors(n_neighbors=3, classes=classes).fit(X, y)
            for q in queries:
                assert model.predict([q])[0] == _knn_oracle(X, y, q, 3, classes)

    def test_unanimous_vote(self):
        model = KNearestNeighbors(classes=["A", "B"]).fit(
            [[0.0], [0.1], [0.2], [0.0], [0.1], [9.0]], ["A"] * 5 + ["B"]
        )
        labels, proba = model.predict([[0.05]]), model.predict_proba([[0.05]])
        assert labels[0] == "A" and proba[0, 0] == 1.0

    def test_k1_training_accuracy_on_unique_rows(self):
        rng = substream(4, "knn")
        X = np.unique(rng.normal(size=(40, 3)), axis=0)
        y = ["a" if v > 0 else "b" for v in X[:, 0]]
        model = KNearestNeighbors(n_neighbors=1, classes=["a", "b"]).fit(X, y)
        assert (model.predict(X) == np.array(y, dtype=object)).all()

    def test_empty_query(self):
        model = KNearestNeighbors(classes=["a", "b"]).fit([[0.0], [1.0]], ["a", "b"])
        assert model.predict(np.zeros((0, 1))).size == 0


class TestLogisticRegression:
    def test_separable_reaches_full_accuracy(self):
        rng = substream(5, "lr")
        X = np.vstack([rng.normal(-3, 0.4, size=(10, 2)), rng.normal(3, 0.4, size=(10, 2))])
        y = np.array(["a"] * 10 + ["b"] * 10, dtype=object)
        model = L1LogisticRegression(classes=["a", "b"]).fit(X, y)
        assert (model.predict(X) == y).all()
        assert model.converged_

    def test_huge_penalty_zeroes_weights(self):
        rng = substream(6, "lr")
        X = rng.normal(size=(30, 3))
        y = ["a" if v > 0 else "b" for v in X[:, 0]]
        model = L1LogisticRegression(penalty_strength=1e6, classes=["a", "b"]).fit(X, y)
        assert np.abs(model.coef_).max() == 0.0

    def test_objective_monotone_non_increasing(self):
        rng = substream(7, "lr")
        X = rng.normal(size=(40, 4))
        y = ["a" if v > 0.2 else "b" for v in X[:, 1]]
        model = L1LogisticRegression(classes=["a", "b"]).fit(X, y)
        diffs = np.diff(model.objective_history_)
        assert (diffs <= 1e-9).all()

    def test_zero_feature_is_irrelevant(self):
        rng = substream(8, "lr")
        X = rng.normal(size=(30, 2))
        y = ["a" if v > 0 else "b" for v in X[:, 0]]
        with_zero = np.hstack([X, np.zeros((30, 1))])
        a = L1LogisticRegression(classes=["a", "b"]).fit(X, y)
        b = L1LogisticRegression(classes=["a", "b"]).fit(with_zero, y)
        assert np.allclose(
            a.predict_proba(X), b.predict_proba(np.hstack([X, np.zeros((30, 1))])), atol=1e-9
        )

    def test_multinomial_three_classes(self):
        rng = substream(9, "lr")
        centers = {"a": (-4, 0), "b": (4, 0), "c": (0, 5)}
        X = np.vstack([rng.normal(centers[c], 0.5, size=(12, 2)) for c in "abc"])
        y = np.repeat(list("abc"), 12).astype(object)
        model = L1LogisticRegression(classes=["a", "b", "c"]).fit(X, y)
        assert (model.predict(X) == y).mean() == 1.0


class TestRandomForest:
    def test_single_tree_pure_split(self):
        X = np.array([[0.0, 5.0], [0.1, 3.0], [1.0, 4.0], [1.1, 6.0]])
        y = np.array(["a", "a", "b", "b"], dtype=object)
        model = RandomForest(n_estimators=1, max_features=2, bootstrap=False, random_state=0, classes=["a", "b"]).fit(X, y)
        assert (model.predict(X) == y).all()

    def test_importance_of_sole_split_feature(self):
        X = np.array([[0.0, 1.0], [0.1, 1.0], [1.0, 1.0], [1.1, 1.0]])
        y = np.array(["a", "a", "b", "b"], dtype=object)
        model = RandomForest(n_estimators=5, max_features=2, bootstrap=False, random_state=0, classes=["a", "b"]).fit(X, y)
        imp = model.feature_importances_
        assert imp[0] == pytest.approx(1.0)
        assert imp[1] == 0.0

    def test_mdi_ranked_and_normalized(self):
        rng = substream(10, "rf")
        X = rng.normal(size=(200, 5))
        y = np.where(X[:, 2] > 0, "a", "b").astype(object)
        model = RandomForest(n_estimators=20, random_state=1, classes=["a", "b"]).fit(X, y)
        ranked = mdi_importances(model, feature_names=[f"g{i}" for i in range(5)])
        assert ranked[0][0] == "g2"
        assert sum(v for _, v in ranked) == pytest.approx(1.0, abs=1e-9)
        assert all(v >= 0 for _, v in ranked)

    def test_mdi_requires_forest(self):
        nb = GaussianNaiveBayes(classes=["a", "b"]).fit([[0.0], [1.0]], ["a", "b"])
        with pytest.raises(ValidationError):
            mdi_importances(nb)

    def test_deterministic(self):
        rng = substream(11, "rf")
        X = rng.normal(size=(80, 4))
        y = np.where(X[:, 0] + 0.3 * rng.normal(size=80) > 0, "a", "b").astype(object)
        a = RandomForest(n_estimators=10, random_state=5, classes=["a", "b"]).fit(X, y)
        b = RandomForest(n_estimators=10, random_state=5, classes=["a", "b"]).fit(X, y)
        assert np.array_equal(a.predict_proba(X), b.predict_proba(X))


class TestNeuralNetwork:
    def test_gradient_check_tiny_network(self):
        rng = substream(12, "nn")
        X = rng.normal(size=(6, 5))
        labels = [("a", "b")[int(v)] for v in rng.integers(0, 2, 6)]
        assert gradient_check((12, 8), X, labels, ["a", "b"], seed=1) < 1e-4

    def test_zero_input_dead_relu_zero_hidden_gradient(self):
        from vizrec.models import batch_gradients

        weights = [np.zeros((3, 4)), np.zeros((4, 2))]
        biases = [np.zeros(4), np.zeros(2)]
        X = np.zeros((2, 3))
        grads_W, _ = batch_gradients(weights, biases, X, np.array([0, 1]))
        assert np.all(grads_W[0] == 0.0)

    def test_duplicated_rows_double_gradient(self):
        from vizrec.models import batch_gradients

        rng = substream(13, "nn")
        weights = [rng.normal(size=(4, 6)), rng.normal(size=(6, 2))]
        biases = [rng.normal(size=6), rng.normal(size=2)]
        x = rng.normal(size=(1, 4))
        gw1, gb1 = batch_gradients([w.copy() for w in weights], [b.copy() for b in biases], x, np.array([1]))
        doubled = np.vstack([x, x])
        gw2, gb2 = batch_gradients([w.copy() for w in weights], [b.copy() for b in biases], doubled, np.array([1, 1]))
        for a, b in zip(gw1, gw2):
            assert np.allclose(2 * a, b, atol=1e-12)
        for a, b in zip(gb1, gb2):
            assert np.allclose(2 * a, b, atol=1e-12)

    def test_xor_learned_with_scaled_network(self):
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        y = np.array(["a", "b", "b", "a"], dtype=object)
        X_train, y_train = np.tile(X, (50, 1)), np.tile(y, 50)
        model = NeuralNetwork(hidden_layers=(8, 8), learning_rate=5e-3, batch_size=16, random_state=0, classes=["a", "b"])
        model.fit(X_train, y_train, validation=(X, y))
        assert (model.predict(X) == y).all()
        assert model.n_epochs_ <= 100

    def test_schedule_limits(self):
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        y = np.array(["a", "b", "b", "a"], dtype=object)
        model = NeuralNetwork(hidden_layers=(8, 8), learning_rate=5e-3, batch_size=16, random_state=0, classes=["a", "b"])
        model.fit(np.tile(X, (50, 1)), np.tile(y, 50), validation=(X, y))
        assert len(model.lr_events_) <= 3
        assert all(b < a for a, b in zip([model.learning_rate, *model.lr_events_], model.lr_events_))
        # Reductions only fire after full plateau windows.
        events = [e["epoch"] for e in model.training_log_ if "lr_reduced_to" in e]
        assert events and events[0] >= model.plateau_epochs - 1
        for a, b in zip(events, events[1:]):
            assert b - a >= model.plateau_epochs

    def test_training_log_complete(self):
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        y = np.array(["a", "b", "b", "a"], dtype=object)
        model = NeuralNetwork(hidden_layers=(4,), learning_rate=5e-3, batch_size=4, max_epochs=12, random_state=0, classes=["a", "b"])
        model.fit(np.tile(X, (10, 1)), np.tile(y, 10), validation=(X, y))
        assert len(model.training_log_) == model.n_epochs_
        for entry in model.training_log_:
            assert {"epoch", "lr", "train_accuracy", "validation_accuracy"} <= set(entry)

    def test_validation_required(self):
        model = NeuralNetwork(hidden_layers=(4,), classes=["a", "b"])
        with pytest.raises(ValidationError):
            model.fit(np.zeros((4, 2)), np.array(["a", "b", "a", "b"], dtype=object))


class TestEstimatorApi:
    MODELS = [
        GaussianNaiveBayes(classes=["a", "b"]),
        KNearestNeighbors(classes=["a", "b"]),
        L1LogisticRegression(classes=["a", "b"]),
        RandomForest(n_estimators=3, classes=["a", "b"]),
    ]

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
    def test_get_params_and_clone(self, model):
        params = model.get_params()
        assert "classes" in params
        cloned = clone(model)
        assert cloned.get_params() == params

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
    def test_unfitted_predict_raises(self, model):
        with pytest.raises(NotFittedError):
            clone(model).predict([[0.0]])

    def test_width_mismatch_rejected(self):
        model = GaussianNaiveBayes(classes=["a", "b"]).fit([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
        with pytest.raises(ValidationError):
            model.predict([[0.0]])

    def test_single_class_rejected(self):
        with pytest.raises(ValidationError):
            GaussianNaiveBayes(classes=["a", "b"]).fit([[0.0], [1.0]], ["a", "a"])

    def test_tie_break_follows_vocabulary_order(self):
        X = np.array([[0.0], [2.0]])
        model = KNearestNeighbors(n_neighbors=2, classes=["z", "q"]).fit(X, ["z", "q"])
        # Both neighbors vote once: the tie goes to 'z', first in the vocabulary.
        assert model.predict([[1.0]])[0] == "z"

    def test_probabilities_row_order_invariant(self):
        rng = substream(14, "api")
        X = rng.normal(size=(20, 3))
        y = ["a" if v > 0 else "b" for v in X[:, 0]]
        model = GaussianNaiveBayes(classes=["a", "b"]).fit(X, y)
        queries = rng.normal(size=(5, 3))
        forward = model.predict_proba(queries)
        backward = model.predict_proba(queries[::-1])
        assert np.allclose(forward, backward[::-1])


class TestSpecAndSerialization:
    def test_default_hyperparameters(self):
        assert ModelSpec("knn").build().n_neighbors == 5
        lr = ModelSpec("lr").build()
        assert lr.penalty_strength == 1.0
        rf = ModelSpec("rf", seed=3).build()
        assert rf.max_features == "sqrt" and rf.random_state == 3
        nn = ModelSpec("nn").build()
        assert nn.hidden_layers == (1000, 1000, 1000)
        assert nn.learning_rate == 5e-4 and nn.batch_size == 200

    def test_all_families_round_trip(self, tmp_path):
        rng = substream(15, "io")
        X = rng.normal(size=(40, 3))
        y = np.where(X[:, 0] > 0, "a", "b").astype(object)
        X_val, y_val = X[:10], y[:10]
        for family in ("nb", "knn", "lr", "rf", "nn"):
            hyper = {"hidden_layers": (6,), "max_epochs": 5} if family == "nn" else {}
            if family == "rf":
                hyper = {"n_estimators": 4}
            spec = ModelSpec(family, hyper, seed=2)
            model = train_model(spec, X, y, classes=["a", "b"], validation=(X_val, y_val))
            path = tmp_path / f"{family}.json"
            save_model(model, path, manifest_fingerprint="fp:test")
            loaded = load_model(path, expected_manifest="fp:test")
            assert np.array_equal(model.predict_proba(X), loaded.predict_proba(X)), family

    def test_serialization_deterministic(self):
        rng = substream(16, "io")
        X = rng.normal(size=(30, 3))
        y = np.where(X[:, 1] > 0, "a", "b").astype(object)
        docs = []
        for _ in range(2):
            model = train_model(ModelSpec("rf", {"n_estimators": 5}, seed=9), X, y, classes=["a", "b"])
            docs.append(model_to_document(model))
        import json

        assert json.dumps(docs[0], sort_keys=True) == json.dumps(docs[1], sort_keys=True)

    def test_manifest_mismatch(self, tmp_path):
        model = GaussianNaiveBayes(classes=["a", "b"]).fit([[0.0], [1.0], [0.1], [1.1]], ["a", "b", "a", "b"])
        save_model(model, tmp_path / "m.json", manifest_fingerprint="fp:one")
        from vizrec.errors import ManifestMismatchError

        with pytest.raises(ManifestMismatchError):
            load_model(tmp_path / "m.json", expected_manifest="fp:two")
