"""vizrec: learned visualization recommendation.

Profiles tabular datasets, extracts design choices from trace-based chart
specifications, trains design-choice classifiers from first principles,
and benchmarks predictors with consensus-adjusted scores.
"""

__version__ = "0.1.0"
