"""Consensus-adjusted benchmark scoring.

Crowdsourced votes define a per-dataset choice distribution. A predicted
choice scores its vote probability normalized by the modal probability
(effectiveness); a predictor's CARS is the mean effectiveness across
datasets times 100, so the modal-vote oracle scores exactly 100 and every
predictor scores above 0 on any realizable vote set. Confidence intervals
come from percentile bootstrap over synthetic votes drawn from the
observed distributions. The Gini of the vote shares measures consensus
strength: 0 at uniformity, (C-1)/C at unanimity.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .._rng import substream
from ..errors import DataError, ValidationError

TWO_CLASS = ("bar", "line")
THREE_CLASS = ("bar", "line", "scatter")


@dataclass(frozen=True)
class VoteDistribution:
    """Vote counts over a task vocabulary for one dataset."""

    dataset_id: str
    counts: tuple[int, ...]
    vocabulary: tuple[str, ...]

    def __post_init__(self):
        if len(self.counts) != len(self.vocabulary):
            raise ValidationError("vote counts must align with the vocabulary")
        if any(c < 0 for c in self.counts):
            raise ValidationError("vote counts must be non-negative")
        if self.total == 0:
            raise DataError(f"dataset {self.dataset_id!r} has zero votes")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def shares(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.total


@dataclass
class CarsReport:
    """Consensus-adjusted recommendation score of one predictor."""

    predictor: str
    per_dataset: dict[str, float]
    cars: float
    ci_level: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    replicates: int | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "predictor": self.predictor,
            "cars": self.cars,
            "ci_level": self.ci_level,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "replicates": self.replicates,
            "per_dataset": self.per_dataset,
            "metadata": self.metadata,
        }


def effectiveness(votes: VoteDistribution, choice: str) -> float:
    """Vote probability of ``choice`` normalized by the modal probability."""
    if choice not in votes.vocabulary:
        raise ValidationError(
            f"choice {choice!r} outside the vote vocabulary {votes.vocabulary}"
        )
    shares = votes.shares
    return float(shares[votes.vocabulary.index(choice)] / shares.max())


def vote_gini(votes: VoteDistribution) -> float:
    """Gini of the vote-share vector: mean absolute pairwise difference of
    shares over twice the mean share. Zero-vote classes count."""
    shares = votes.shares
    c = shares.size
    mad = float(np.abs(shares[:, None] - shares[None, :]).mean())
    return mad / (2.0 * (1.0 / c))


def cars(
    predictions: dict[str, str],
    votes: dict[str, VoteDistribution],
    predictor: str = "predictor",
) -> CarsReport:
    """Mean per-dataset effectiveness times 100, without a CI."""
    missing = sorted(set(votes) - set(predictions))
    if missing:
        raise DataError(f"predictions missing for datasets: {missing}")
    per_dataset = {d: effectiveness(votes[d], predictions[d]) for d in sorted(votes)}
    if not per_dataset:
        raise DataError("no vote distributions to score")
    value = 100.0 * float(np.mean(list(per_dataset.values())))
    return CarsReport(predictor=predictor, per_dataset=per_dataset, cars=value)


def bootstrap_ci(
    votes: dict[str, VoteDistribution],
    predictions: dict[str, str],
    replicates: int = 100_000,
    level: float = 0.95,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile CI of CARS over parametric-multinomial vote resamples.

    Each replicate redraws every dataset's N votes from its observed share
    vector and rescores the fixed predictions.
    """
    if replicates < 1:
        raise ValidationError("need at least 1 bootstrap replicate")
    ids = sorted(votes)
    if not ids:
        raise DataError("no vote distributions to bootstrap")
    eff_sum = np.zeros(replicates)
    for dataset_id in ids:
        dist = votes[dataset_id]
        rng = substream(seed, "bootstrap_votes", dataset_id)
        samples = rng.multinomial(dist.total, dist.shares, size=replicates).astype(float)
        choice_idx = dist.vocabulary.index(predictions[dataset_id])
        eff_sum += samples[:, choice_idx] / samples.max(axis=1)
    cars_values = 100.0 * eff_sum / len(ids)
    alpha = (1.0 - level) / 2.0
    low, high = np.percentile(cars_values, [100.0 * alpha, 100.0 * (1.0 - alpha)])
    return float(low), float(high)


def cars_report(
    predictions: dict[str, str],
    votes: dict[str, VoteDistribution],
    predictor: str = "predictor",
    replicates: int = 100_000,
    level: float = 0.95,
    seed: int = 0,
) -> CarsReport:
    """CARS with a bootstrap percentile confidence interval."""
    report = cars(predictions, votes, predictor)
    low, high = bootstrap_ci(votes, predictions, replicates, level, seed)
    report.ci_level = level
    report.ci_low = low
    report.ci_high = high
    report.replicates = replicates
    return report


def modal_predictions(votes: dict[str, VoteDistribution]) -> dict[str, str]:
    """The oracle predictor: the modal vote of every dataset (CARS = 100)."""
    out = {}
    for dataset_id, dist in votes.items():
        out[dataset_id] = dist.vocabulary[int(np.argmax(dist.counts))]
    return out


def random_predictions(
    dataset_ids, vocabulary, seed: int = 0
) -> dict[str, str]:
    """Uniform random baseline over the task vocabulary, seeded."""
    vocabulary = tuple(vocabulary)
    out = {}
    for dataset_id in sorted(dataset_ids):
        rng = substream(seed, "random_predictor", dataset_id)
        out[dataset_id] = vocabulary[int(rng.integers(len(vocabulary)))]
    return out


def load_votes(
    content: str,
    vocabulary=None,
    exclude_worker: str | None = None,
) -> dict[str, VoteDistribution]:
    """Parse a votes CSV with header (dataset_id, worker_id, choice).

    ``exclude_worker`` implements leave-one-out scoring: that worker's
    votes are removed from every distribution before scoring them.
    """
    reader = csv.DictReader(io.StringIO(content))
    required = {"dataset_id", "worker_id", "choice"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise DataError(f"votes file must have columns {sorted(required)}")
    rows = [(r["dataset_id"], r["worker_id"], r["choice"]) for r in reader]
    if vocabulary is None:
        vocabulary = tuple(sorted({choice for _, _, choice in rows}))
    else:
        vocabulary = tuple(vocabulary)
        bad = {choice for _, _, choice in rows} - set(vocabulary)
        if bad:
            raise DataError(f"votes outside the vocabulary {vocabulary}: {sorted(bad)}")
    by_dataset: dict[str, list[str]] = {}
    for dataset_id, worker, choice in rows:
        if exclude_worker is not None and worker == exclude_worker:
            continue
        by_dataset.setdefault(dataset_id, []).append(choice)
    return {
        d: VoteDistribution(d, tuple(choices.count(v) for v in vocabulary), vocabulary)
        for d, choices in by_dataset.items()
    }


def load_predictions(content: str) -> dict[str, str]:
    """Parse a predictions CSV with header (dataset_id, choice)."""
    reader = csv.DictReader(io.StringIO(content))
    if reader.fieldnames is None or not {"dataset_id", "choice"} <= set(reader.fieldnames):
        raise DataError("predictions file must have columns dataset_id, choice")
    return {r["dataset_id"]: r["choice"] for r in reader}
