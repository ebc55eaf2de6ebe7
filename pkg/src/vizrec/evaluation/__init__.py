"""Accuracy, cross-validation, consensus scoring, synthetic corpora."""

from .consensus import (
    THREE_CLASS,
    TWO_CLASS,
    CarsReport,
    VoteDistribution,
    bootstrap_ci,
    cars,
    cars_report,
    effectiveness,
    load_predictions,
    load_votes,
    modal_predictions,
    random_predictions,
    vote_gini,
)
from .cv import CvReport, cross_validate
from .metrics import accuracy
from .synth import RULES, PlantedRule, generate_synthetic_corpus, get_rule

__all__ = [
    "RULES",
    "THREE_CLASS",
    "TWO_CLASS",
    "CarsReport",
    "CvReport",
    "PlantedRule",
    "VoteDistribution",
    "accuracy",
    "bootstrap_ci",
    "cars",
    "cars_report",
    "cross_validate",
    "effectiveness",
    "generate_synthetic_corpus",
    "get_rule",
    "load_predictions",
    "load_votes",
    "modal_predictions",
    "random_predictions",
    "vote_gini",
]
