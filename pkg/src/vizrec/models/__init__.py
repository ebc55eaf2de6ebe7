"""The five classifier families, from first principles."""

from .base import ChoiceClassifier
from .forest import RandomForest, mdi_importances
from .io import (
    FAMILIES,
    ModelSpec,
    load_model,
    model_from_document,
    model_to_document,
    resolve_family,
    save_model,
    train_model,
)
from .knn import KNearestNeighbors
from .logistic import L1LogisticRegression
from .naive_bayes import GaussianNaiveBayes
from .network import NeuralNetwork, batch_gradients, batch_loss, gradient_check

__all__ = [
    "FAMILIES",
    "ChoiceClassifier",
    "GaussianNaiveBayes",
    "KNearestNeighbors",
    "L1LogisticRegression",
    "ModelSpec",
    "NeuralNetwork",
    "RandomForest",
    "batch_gradients",
    "batch_loss",
    "gradient_check",
    "load_model",
    "mdi_importances",
    "model_from_document",
    "model_to_document",
    "resolve_family",
    "save_model",
    "train_model",
]
