"""Column, pairwise and dataset-level feature extraction."""

from .aggregate import DatasetFeatures, aggregate_features, aggregate_values
from .catalog import (
    DATASET_FEATURES,
    DATASET_NAMES,
    MASKS,
    PAIRWISE_FEATURES,
    PAIRWISE_NAMES,
    SINGLE_FEATURES,
    SINGLE_NAMES,
    dataset_mask_indices,
    manifest,
    manifest_hash,
    single_mask_indices,
)
from .matrix import (
    FeatureMatrix,
    apply_feature_mask,
    column_feature_matrix,
    dataset_feature_matrix,
    profile_dataset,
    single_feature_row,
)
from .pairwise import edit_distance, extract_pairwise_features, nestedness
from .stattests import normality, statistical_tests
from .single import (
    distribution_features,
    extract_single_column_features,
    gini_coefficient,
    histogram_entropy,
    outlier_features,
    sortedness,
    space_sequence_coefficients,
)

__all__ = [
    "DATASET_FEATURES",
    "DATASET_NAMES",
    "MASKS",
    "PAIRWISE_FEATURES",
    "PAIRWISE_NAMES",
    "SINGLE_FEATURES",
    "SINGLE_NAMES",
    "DatasetFeatures",
    "FeatureMatrix",
    "aggregate_features",
    "aggregate_values",
    "apply_feature_mask",
    "column_feature_matrix",
    "dataset_feature_matrix",
    "dataset_mask_indices",
    "distribution_features",
    "edit_distance",
    "extract_pairwise_features",
    "extract_single_column_features",
    "gini_coefficient",
    "histogram_entropy",
    "manifest",
    "manifest_hash",
    "nestedness",
    "normality",
    "outlier_features",
    "profile_dataset",
    "single_feature_row",
    "single_mask_indices",
    "sortedness",
    "space_sequence_coefficients",
    "statistical_tests",
]
