"""Model specs, the family registry, and versioned model files.

A model file is a JSON envelope: family, hyperparameters, class
vocabulary, feature-manifest fingerprint, training log, and the fitted
parameters as base64-encoded numeric blocks. Loading validates the
fingerprint when the caller provides one and reconstructs an estimator
whose predictions are bit-identical to the saved one.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ManifestMismatchError, UsageError, ValidationError
from .forest import RandomForest
from .knn import KNearestNeighbors
from .logistic import L1LogisticRegression
from .naive_bayes import GaussianNaiveBayes
from .network import NeuralNetwork

FORMAT_VERSION = 1

FAMILIES = {
    "naive_bayes": GaussianNaiveBayes,
    "knn": KNearestNeighbors,
    "logistic_regression": L1LogisticRegression,
    "random_forest": RandomForest,
    "neural_network": NeuralNetwork,
}

FAMILY_ALIASES = {
    "nb": "naive_bayes",
    "knn": "knn",
    "lr": "logistic_regression",
    "rf": "random_forest",
    "nn": "neural_network",
}


def resolve_family(name: str) -> str:
    key = name.strip().lower()
    key = FAMILY_ALIASES.get(key, key)
    if key not in FAMILIES:
        raise UsageError(f"unknown model family {name!r}; expected one of {sorted(FAMILIES)}")
    return key


@dataclass
class ModelSpec:
    """Family, hyperparameter overrides, and the training seed."""

    family: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def build(self, classes=None):
        family = resolve_family(self.family)
        cls = FAMILIES[family]
        kwargs = dict(self.hyperparameters)
        if family in ("random_forest", "neural_network"):
            kwargs.setdefault("random_state", self.seed)
        estimator = cls(classes=classes, **kwargs)
        return estimator


def train_model(spec: ModelSpec, X, y, classes=None, validation=None):
    """Fit one model; the neural network requires a validation pair."""
    model = spec.build(classes=classes)
    if resolve_family(spec.family) == "neural_network":
        if validation is None:
            raise ValidationError("neural_network training requires a validation slice")
        model.fit(X, y, validation=validation)
    else:
        model.fit(X, y)
    return model


def _encode(arr: np.ndarray) -> dict:
    arr = np.ascontiguousarray(arr)
    return {
        "dtype": str(arr.dtype),
        "shape": list(arr.shape),
        "data": base64.b64encode(arr.tobytes()).decode("ascii"),
    }


def _decode(payload: dict) -> np.ndarray:
    raw = base64.b64decode(payload["data"])
    return np.frombuffer(raw, dtype=np.dtype(payload["dtype"])).reshape(payload["shape"]).copy()


def _family_of(model) -> str:
    for name, cls in FAMILIES.items():
        if type(model) is cls:
            return name
    raise ValidationError(f"cannot serialize unknown model type {type(model).__name__}")


def model_to_document(model, manifest_fingerprint: str | None = None, metadata: dict | None = None) -> dict:
    family = _family_of(model)
    params: dict = {}
    training_log: dict | list = {}
    if family == "naive_bayes":
        params = {
            "class_log_prior": _encode(model.class_log_prior_),
            "theta": _encode(model.theta_),
            "var": _encode(model.var_),
            "epsilon": model.epsilon_,
        }
    elif family == "knn":
        params = {"X": _encode(model.X_), "y_codes": _encode(model.y_codes_)}
    elif family == "logistic_regression":
        params = {"coef": _encode(model.coef_), "intercept": _encode(model.intercept_)}
        training_log = {
            "n_iter": model.n_iter_,
            "converged": model.converged_,
            "final_objective": model.objective_history_[-1],
        }
    elif family == "random_forest":
        params = {
            "trees": [
                {key: _encode(tree[key]) for key in ("feature", "threshold", "left", "right", "value", "importances")}
                for tree in model.trees_
            ]
        }
    elif family == "neural_network":
        params = {
            "weights": [_encode(w) for w in model.weights_],
            "biases": [_encode(b) for b in model.biases_],
        }
        training_log = model.training_log_
    hyper = {k: v for k, v in model.get_params().items() if k != "classes"}
    return {
        "format_version": FORMAT_VERSION,
        "family": family,
        "classes": list(model.classes_),
        "n_features_in": int(model.n_features_in_),
        "hyperparameters": _jsonable(hyper),
        "manifest_fingerprint": manifest_fingerprint,
        "metadata": metadata or {},
        "training_log": training_log,
        "parameters": params,
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def model_from_document(document: dict, expected_manifest: str | None = None):
    if document.get("format_version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported model file version {document.get('format_version')}")
    if expected_manifest is not None and document.get("manifest_fingerprint") != expected_manifest:
        raise ManifestMismatchError("model was trained against a different feature manifest")
    family = resolve_family(document["family"])
    hyper = dict(document["hyperparameters"])
    for key in ("hidden_layers", "clip_percentiles"):
        if key in hyper and isinstance(hyper[key], list):
            hyper[key] = tuple(hyper[key])
    model = FAMILIES[family](**hyper)
    model.classes_ = np.asarray(document["classes"], dtype=object)
    model.n_features_in_ = document["n_features_in"]
    params = document["parameters"]
    if family == "naive_bayes":
        model.class_log_prior_ = _decode(params["class_log_prior"])
        model.theta_ = _decode(params["theta"])
        model.var_ = _decode(params["var"])
        model.epsilon_ = params["epsilon"]
    elif family == "knn":
        model.X_ = _decode(params["X"])
        model.y_codes_ = _decode(params["y_codes"])
        model._sq_norms = np.einsum("ij,ij->i", model.X_, model.X_)
    elif family == "logistic_regression":
        model.coef_ = _decode(params["coef"])
        model.intercept_ = _decode(params["intercept"])
        log = document["training_log"]
        model.n_iter_ = log["n_iter"]
        model.converged_ = log["converged"]
        model.objective_history_ = [log["final_objective"]]
    elif family == "random_forest":
        model.trees_ = [{key: _decode(tree[key]) for key in tree} for tree in params["trees"]]
    elif family == "neural_network":
        model.weights_ = [_decode(w) for w in params["weights"]]
        model.biases_ = [_decode(b) for b in params["biases"]]
        model.training_log_ = document["training_log"]
        model.lr_events_ = [e["lr_reduced_to"] for e in model.training_log_ if "lr_reduced_to" in e]
        model.n_epochs_ = len(model.training_log_)
        model.final_validation_accuracy_ = (
            model.training_log_[-1]["validation_accuracy"] if model.training_log_ else None
        )
    return model


def save_model(model, path: str | Path, manifest_fingerprint: str | None = None, metadata: dict | None = None) -> None:
    document = model_to_document(model, manifest_fingerprint, metadata)
    Path(path).write_text(json.dumps(document, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path, expected_manifest: str | None = None):
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    return model_from_document(document, expected_manifest)
