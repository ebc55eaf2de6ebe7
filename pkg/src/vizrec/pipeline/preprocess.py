"""Feature preprocessing: one-hot -> clip -> impute -> standardize.

The stages run in exactly that order. Categorical features one-hot expand
over the categories observed at fit time (unseen categories map to an
all-zero block); numeric values are clipped to the fit-time 1st/99th
percentiles; missing values are imputed with the categorical mode or the
post-clip numeric mean; finally every output column is centered and
scaled to unit variance (constant columns are centered only and flagged).

Statistics are fitted on one slice (the training split) and applied
unchanged elsewhere. The transformer records a fingerprint of the rows it
was fitted on so leakage is auditable after the fact.
"""

from __future__ import annotations

import base64
import hashlib
import json

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ..errors import ManifestMismatchError, ValidationError
from ..features.matrix import FeatureMatrix


def _as_array(X) -> np.ndarray:
    if isinstance(X, FeatureMatrix):
        X = X.values
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValidationError("preprocessor expects a 2-D feature matrix")
    return X


class FeaturePreprocessor(BaseEstimator, TransformerMixin):
    """Fit on raw feature rows, transform to a fully numeric, finite matrix."""

    def __init__(self, kinds=None, names=None, clip_percentiles=(1.0, 99.0)):
        self.kinds = kinds
        self.names = names
        self.clip_percentiles = clip_percentiles

    def fit(self, X, y=None):
        matrix = X if isinstance(X, FeatureMatrix) else None
        X = _as_array(X)
        n_rows, n_features = X.shape
        if n_rows < 2:
            raise ValidationError("preprocessor needs at least 2 rows to fit")
        kinds = self.kinds
        names = self.names
        if matrix is not None:
            kinds = kinds or matrix.kinds
            names = names or matrix.names
        if kinds is None:
            kinds = ["numeric"] * n_features
        if names is None:
            names = [f"f{i}" for i in range(n_features)]
        if len(kinds) != n_features or len(names) != n_features:
            raise ValidationError("kinds/names must match the feature count")

        low_p, high_p = self.clip_percentiles
        features = []
        flagged = []
        for j in range(n_features):
            col = X[:, j]
            present = col[~np.isnan(col)]
            if kinds[j] == "categorical":
                categories = sorted(set(present.tolist()))
                if categories:
                    counts = {c: int((present == c).sum()) for c in categories}
                    mode = max(categories, key=lambda c: (counts[c], -categories.index(c)))
                else:
                    flagged.append(names[j])
                    mode = None
                features.append({"kind": "categorical", "categories": categories, "mode": mode})
            else:
                if present.size:
                    lo, hi = np.percentile(present, [low_p, high_p])
                    clipped = np.clip(present, lo, hi)
                    impute = float(clipped.mean())
                    feat = {"kind": "numeric", "clip_low": float(lo), "clip_high": float(hi), "impute": impute}
                else:
                    # All-missing at fit time: neutral parameters, flagged.
                    flagged.append(names[j])
                    feat = {"kind": "numeric", "clip_low": None, "clip_high": None, "impute": 0.0}
                features.append(feat)

        self.feature_params_ = features
        self.input_names_ = list(names)
        self.input_kinds_ = list(kinds)
        self.flagged_features_ = flagged
        self.output_names_ = self._output_names()
        self.fit_fingerprint_ = hashlib.sha256(np.ascontiguousarray(X).tobytes()).hexdigest()
        self.fit_row_count_ = n_rows
        if matrix is not None:
            self.fit_row_ids_ = list(matrix.row_ids)
            self.manifest_fingerprint_ = matrix.manifest_fingerprint()
        else:
            self.fit_row_ids_ = None
            self.manifest_fingerprint_ = None

        # Standardization moments come from the fitted slice after the first
        # three stages have been applied to it.
        staged = self._apply_stages(X)
        mean = staged.mean(axis=0)
        std = staged.std(axis=0)
        # Columns that are constant up to float rounding must not be scaled by
        # their ulp-sized "deviation"; they are centered only.
        near_constant = std <= 100.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(mean))
        scale = np.where(near_constant, 1.0, std)
        self.standardize_mean_ = mean
        self.standardize_scale_ = scale
        self.constant_columns_ = [self.output_names_[i] for i in np.nonzero(near_constant)[0]]
        return self

    def _output_names(self) -> list[str]:
        out = []
        for name, params in zip(self.input_names_, self.feature_params_):
            if params["kind"] == "categorical":
                for c in params["categories"]:
                    label = {0.0: "false", 1.0: "true"}.get(c, repr(c))
                    out.append(f"{name}={label}")
                if not params["categories"]:
                    out.append(f"{name}=<none>")
            else:
                out.append(name)
        return out

    def _apply_stages(self, X: np.ndarray) -> np.ndarray:
        """Stages 1-3: one-hot, clip, impute. Standardization is separate."""
        blocks = []
        for j, params in enumerate(self.feature_params_):
            col = X[:, j]
            missing = np.isnan(col)
            if params["kind"] == "categorical":
                categories = params["categories"]
                if not categories:
                    blocks.append(np.zeros((X.shape[0], 1)))
                    continue
                block = np.zeros((X.shape[0], len(categories)))
                for k, c in enumerate(categories):
                    block[:, k] = (~missing) & (col == c)
                if params["mode"] is not None and missing.any():
                    mode_idx = categories.index(params["mode"])
                    block[missing, mode_idx] = 1.0
                blocks.append(block)
            else:
                out = col.copy()
                if params["clip_low"] is not None:
                    out = np.clip(out, params["clip_low"], params["clip_high"])
                out[missing] = params["impute"]
                blocks.append(out[:, None])
        return np.hstack(blocks)

    def transform(self, X):
        if not hasattr(self, "feature_params_"):
            raise NotFittedError("preprocessor is not fitted")
        matrix = X if isinstance(X, FeatureMatrix) else None
        if matrix is not None and self.manifest_fingerprint_ is not None:
            if matrix.manifest_fingerprint() != self.manifest_fingerprint_:
                raise ManifestMismatchError(
                    "feature matrix was built against a different manifest or mask"
                )
        X = _as_array(X)
        if X.shape[1] != len(self.feature_params_):
            raise ValidationError(
                f"expected {len(self.feature_params_)} features, got {X.shape[1]}"
            )
        staged = self._apply_stages(X)
        return (staged - self.standardize_mean_) / self.standardize_scale_

    # --- persistence -----------------------------------------------------

    PARAMS_VERSION = 1

    def to_json(self) -> str:
        if not hasattr(self, "feature_params_"):
            raise NotFittedError("preprocessor is not fitted")
        payload = {
            "version": self.PARAMS_VERSION,
            "clip_percentiles": list(self.clip_percentiles),
            "input_names": self.input_names_,
            "input_kinds": self.input_kinds_,
            "features": self.feature_params_,
            "output_names": self.output_names_,
            "flagged_features": self.flagged_features_,
            "constant_columns": self.constant_columns_,
            "standardize_mean": _encode_array(self.standardize_mean_),
            "standardize_scale": _encode_array(self.standardize_scale_),
            "fit_fingerprint": self.fit_fingerprint_,
            "fit_row_count": self.fit_row_count_,
            "fit_row_ids": self.fit_row_ids_,
            "manifest_fingerprint": self.manifest_fingerprint_,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, payload: str, expected_manifest: str | None = None) -> "FeaturePreprocessor":
        data = json.loads(payload)
        if data.get("version") != cls.PARAMS_VERSION:
            raise ValidationError(f"unsupported preprocessor params version {data.get('version')}")
        if expected_manifest is not None and data["manifest_fingerprint"] != expected_manifest:
            raise ManifestMismatchError(
                "preprocessor params were fitted against a different feature manifest"
            )
        obj = cls(kinds=data["input_kinds"], names=data["input_names"], clip_percentiles=tuple(data["clip_percentiles"]))
        obj.feature_params_ = data["features"]
        obj.input_names_ = data["input_names"]
        obj.input_kinds_ = data["input_kinds"]
        obj.flagged_features_ = data["flagged_features"]
        obj.constant_columns_ = data["constant_columns"]
        obj.output_names_ = data["output_names"]
        obj.standardize_mean_ = _decode_array(data["standardize_mean"])
        obj.standardize_scale_ = _decode_array(data["standardize_scale"])
        obj.fit_fingerprint_ = data["fit_fingerprint"]
        obj.fit_row_count_ = data["fit_row_count"]
        obj.fit_row_ids_ = data["fit_row_ids"]
        obj.manifest_fingerprint_ = data["manifest_fingerprint"]
        return obj


def _encode_array(x: np.ndarray) -> dict:
    x = np.ascontiguousarray(x, dtype=float)
    return {"shape": list(x.shape), "data": base64.b64encode(x.tobytes()).decode("ascii")}


def _decode_array(payload: dict) -> np.ndarray:
    raw = base64.b64decode(payload["data"])
    return np.frombuffer(raw, dtype=float).reshape(payload["shape"]).copy()
